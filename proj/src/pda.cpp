#include "storax/pda.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "storax/transforms.hpp"

namespace storax {

namespace {

int find_name(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

bool token_ok(const std::string& name) {
  if (name.empty() || name == "-") return false;
  for (char c : name)
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') return false;
  return true;
}

}  // namespace

int PdaSpec::add_state(const std::string& name, bool acc) {
  if (!token_ok(name) || state_id(name) >= 0)
    throw std::invalid_argument("bad or duplicate pda state name: " + name);
  stateNames.push_back(name);
  accepting.push_back(acc ? 1 : 0);
  return static_cast<int>(stateNames.size()) - 1;
}

int PdaSpec::add_input(const std::string& name) {
  if (!token_ok(name) || name == "<" || name == ">" || input_id(name) >= 0)
    throw std::invalid_argument("bad or duplicate pda input name: " + name);
  inputNames.push_back(name);
  return static_cast<int>(inputNames.size()) - 1;
}

int PdaSpec::add_stack(const std::string& name) {
  if (!token_ok(name) || stack_id(name) >= 0)
    throw std::invalid_argument("bad or duplicate pda stack name: " + name);
  stackNames.push_back(name);
  return static_cast<int>(stackNames.size()) - 1;
}

int PdaSpec::state_id(const std::string& name) const {
  return find_name(stateNames, name);
}
int PdaSpec::input_id(const std::string& name) const {
  return find_name(inputNames, name);
}
int PdaSpec::stack_id(const std::string& name) const {
  return find_name(stackNames, name);
}

ValidationReport validate_pda(const PdaSpec& spec) {
  ValidationReport report;
  auto bad = [&](const std::string& what, int rule = -1) {
    report.issues.push_back({what, rule});
  };
  const int nq = static_cast<int>(spec.stateNames.size());
  const int ni = static_cast<int>(spec.inputNames.size());
  const int nz = static_cast<int>(spec.stackNames.size());
  if (nq == 0) bad("no states");
  if (nz == 0) bad("no stack symbols (bottom marker required)");
  if (spec.initial < 0 || spec.initial >= nq) bad("initial state out of range");
  if (static_cast<int>(spec.accepting.size()) != nq)
    bad("accepting table size mismatch");

  // (from, top) -> rule indices, for the determinism check.
  std::map<std::pair<int, int>, std::vector<int>> byKey;
  for (std::size_t ri = 0; ri < spec.rules.size(); ++ri) {
    const PdaRule& r = spec.rules[ri];
    const int idx = static_cast<int>(ri);
    if (r.from < 0 || r.from >= nq || r.to < 0 || r.to >= nq) {
      bad("rule state out of range", idx);
      continue;
    }
    if (r.in != pda_eps && r.in != pda_end && (r.in < 0 || r.in >= ni)) {
      bad("rule input symbol out of range", idx);
      continue;
    }
    if (r.top < 0 || r.top >= nz) {
      bad("rule stack top out of range", idx);
      continue;
    }
    bool pushOk = true;
    for (int z : r.push)
      if (z < 0 || z >= nz) pushOk = false;
    if (!pushOk) {
      bad("rule push symbol out of range", idx);
      continue;
    }
    if (r.top == 0) {
      // The bottom marker is never popped and must stay at the bottom.
      if (r.push.empty() || r.push.front() != 0)
        bad("bottom marker popped or displaced", idx);
      for (std::size_t j = 1; j < r.push.size(); ++j)
        if (r.push[j] == 0) bad("bottom marker duplicated", idx);
    } else {
      for (int z : r.push)
        if (z == 0) bad("bottom marker pushed above the bottom", idx);
    }
    byKey[{r.from, r.top}].push_back(idx);
  }
  for (const auto& [key, idxs] : byKey) {
    bool haveEps = false;
    std::map<int, int> perIn;
    for (int idx : idxs) {
      const PdaRule& r = spec.rules[idx];
      if (r.in == pda_eps) {
        if (haveEps) bad("duplicate epsilon rule for (state, top)", idx);
        haveEps = true;
      } else {
        if (++perIn[r.in] > 1) bad("duplicate rule for (state, input, top)", idx);
      }
    }
    if (haveEps && !perIn.empty())
      bad("epsilon rule conflicts with reading rules for (state, top)",
          idxs.front());
  }
  return report;
}

Word pda_word_from_string(const PdaSpec& spec, const std::string& text) {
  Word w;
  for (char c : text) {
    int id = spec.input_id(std::string(1, c));
    if (id < 0)
      throw std::invalid_argument(std::string("unknown pda input symbol: ") + c);
    w.push_back(id);
  }
  return w;
}

PdaRun run_dpda(const PdaSpec& spec, const Word& x, long long stepCap) {
  if (stepCap < 0) stepCap = default_pda_step_cap;
  // (from, top) -> {eps rule, end rule, per-input rule}
  std::map<std::pair<int, int>, int> epsRule, endRule;
  std::map<std::tuple<int, int, int>, int> inRule;
  for (std::size_t ri = 0; ri < spec.rules.size(); ++ri) {
    const PdaRule& r = spec.rules[ri];
    if (r.in == pda_eps)
      epsRule[{r.from, r.top}] = static_cast<int>(ri);
    else if (r.in == pda_end)
      endRule[{r.from, r.top}] = static_cast<int>(ri);
    else
      inRule[{r.from, r.in, r.top}] = static_cast<int>(ri);
  }

  PdaRun run;
  int q = spec.initial;
  std::size_t pos = 0;
  std::vector<int> stack{0};
  for (;;) {
    if (pos == x.size() && spec.accepting[q]) {
      run.outcome = Outcome::Accept;
      return run;
    }
    if (run.steps >= stepCap) {
      run.truncated = true;
      run.outcome = Outcome::Inconclusive;
      return run;
    }
    const int top = stack.back();
    int ruleIdx = -1;
    if (auto it = epsRule.find({q, top}); it != epsRule.end()) {
      ruleIdx = it->second;
    } else if (pos < x.size()) {
      if (auto it = inRule.find({q, x[pos], top}); it != inRule.end())
        ruleIdx = it->second;
    } else if (auto it = endRule.find({q, top}); it != endRule.end()) {
      ruleIdx = it->second;
    }
    if (ruleIdx < 0) {
      run.outcome = Outcome::Reject;
      return run;
    }
    const PdaRule& r = spec.rules[ruleIdx];
    stack.pop_back();
    stack.insert(stack.end(), r.push.begin(), r.push.end());
    if (stack.empty())
      throw std::logic_error("pda popped its bottom marker");
    if (r.in >= 0) ++pos;
    q = r.to;
    ++run.steps;
  }
}

PdaRun run_dpda_string(const PdaSpec& spec, const std::string& x,
                       long long stepCap) {
  return run_dpda(spec, pda_word_from_string(spec, x), stepCap);
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

PdaSpec parse_pda(std::istream& in) {
  PdaSpec spec;
  bool sawHeader = false;
  std::string line;
  int lineNo = 0;
  auto fail = [&](const std::string& what) { throw ParseError(lineNo, what); };
  while (std::getline(in, line)) {
    ++lineNo;
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (!sawHeader) {
      if (tok[0] != "machine") fail("expected machine header");
      bool sawKind = false;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto eq = tok[i].find('=');
        if (eq == std::string::npos) fail("bad header field: " + tok[i]);
        const std::string key = tok[i].substr(0, eq);
        const std::string val = tok[i].substr(eq + 1);
        if (key == "kind") {
          if (val != "dpda") fail("expected kind=dpda, got " + val);
          sawKind = true;
        } else if (key == "name") {
          spec.name = val;
        } else {
          fail("unknown header field: " + key);
        }
      }
      if (!sawKind) fail("machine header missing kind");
      sawHeader = true;
      continue;
    }
    const std::string& kw = tok[0];
    if (kw == "states") {
      for (std::size_t i = 1; i < tok.size(); ++i) spec.add_state(tok[i]);
    } else if (kw == "initial") {
      if (tok.size() != 2) fail("initial takes one state");
      int id = spec.state_id(tok[1]);
      if (id < 0) fail("unknown state: " + tok[1]);
      spec.initial = id;
    } else if (kw == "accept") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        int id = spec.state_id(tok[i]);
        if (id < 0) fail("unknown state: " + tok[i]);
        spec.accepting[id] = 1;
      }
    } else if (kw == "input") {
      for (std::size_t i = 1; i < tok.size(); ++i) spec.add_input(tok[i]);
    } else if (kw == "stack") {
      for (std::size_t i = 1; i < tok.size(); ++i) spec.add_stack(tok[i]);
    } else if (kw == "rule") {
      if (tok.size() != 7 || tok[4] != "->") fail("bad rule line");
      PdaRule r;
      r.from = spec.state_id(tok[1]);
      if (r.from < 0) fail("unknown state: " + tok[1]);
      if (tok[2] == "-")
        r.in = pda_eps;
      else if (tok[2] == "<")
        r.in = pda_end;
      else {
        r.in = spec.input_id(tok[2]);
        if (r.in < 0) fail("unknown input symbol: " + tok[2]);
      }
      r.top = spec.stack_id(tok[3]);
      if (r.top < 0) fail("unknown stack symbol: " + tok[3]);
      r.to = spec.state_id(tok[5]);
      if (r.to < 0) fail("unknown state: " + tok[5]);
      if (tok[6] != "-") {
        for (const std::string& name : split_commas(tok[6])) {
          int id = spec.stack_id(name);
          if (id < 0) fail("unknown stack symbol: " + name);
          r.push.push_back(id);
        }
      }
      spec.rules.push_back(r);
    } else {
      fail("unknown directive: " + kw);
    }
  }
  if (!sawHeader) throw ParseError(lineNo, "empty pda file");
  return spec;
}

PdaSpec parse_pda_string(const std::string& text) {
  std::istringstream in(text);
  return parse_pda(in);
}

PdaSpec parse_pda_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open file: " + path);
  return parse_pda(in);
}

void print_pda(std::ostream& out, const PdaSpec& spec) {
  out << "machine kind=dpda";
  if (!spec.name.empty()) out << " name=" << spec.name;
  out << "\n";
  out << "states";
  for (const auto& s : spec.stateNames) out << ' ' << s;
  out << "\n";
  out << "initial " << spec.stateNames[spec.initial] << "\n";
  bool anyAcc = false;
  for (char a : spec.accepting) anyAcc = anyAcc || a;
  if (anyAcc) {
    out << "accept";
    for (std::size_t i = 0; i < spec.stateNames.size(); ++i)
      if (spec.accepting[i]) out << ' ' << spec.stateNames[i];
    out << "\n";
  }
  if (!spec.inputNames.empty()) {
    out << "input";
    for (const auto& s : spec.inputNames) out << ' ' << s;
    out << "\n";
  }
  out << "stack";
  for (const auto& s : spec.stackNames) out << ' ' << s;
  out << "\n";
  for (const PdaRule& r : spec.rules) {
    out << "rule " << spec.stateNames[r.from] << ' ';
    if (r.in == pda_eps)
      out << '-';
    else if (r.in == pda_end)
      out << '<';
    else
      out << spec.inputNames[r.in];
    out << ' ' << spec.stackNames[r.top] << " -> " << spec.stateNames[r.to]
        << ' ';
    if (r.push.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < r.push.size(); ++i) {
        if (i) out << ',';
        out << spec.stackNames[r.push[i]];
      }
    }
    out << "\n";
  }
}

std::string print_pda_string(const PdaSpec& spec) {
  std::ostringstream out;
  print_pda(out, spec);
  return out.str();
}

// ---------------------------------------------------------------------------
// dpda -> depth-2 storage machine
// ---------------------------------------------------------------------------

MachineSpec dpda_to_sda2(const PdaSpec& spec) {
  {
    ValidationReport rep = validate_pda(spec);
    if (!rep.ok())
      throw PreconditionViolated("dpda_to_sda2: invalid pda: " +
                                 rep.issues.front().what);
  }
  MachineSpec m;
  m.kind = MachineKind::Sda;
  m.k = 2;
  m.relaxed = true;
  m.name = spec.name;

  // Input alphabet: same user symbols.
  std::vector<int> inMap(spec.inputNames.size());
  for (std::size_t i = 0; i < spec.inputNames.size(); ++i)
    inMap[i] = m.add_input(spec.inputNames[i]);
  // Depth-1 storage symbols: every stack symbol except the bottom marker,
  // which is represented by the storage left endmarker.
  std::vector<int> stMap(spec.stackNames.size(), -1);
  for (std::size_t i = 1; i < spec.stackNames.size(); ++i)
    stMap[i] = m.add_stor(spec.stackNames[i], 1);

  const int boot = m.add_state("boot");
  std::vector<int> home(spec.stateNames.size());
  for (std::size_t i = 0; i < spec.stateNames.size(); ++i)
    home[i] = m.add_state("h:" + spec.stateNames[i]);
  const int acc = m.add_state("acc", true);
  m.initial = boot;

  // Dispatch symbols a rule can be entered under.  A reading rule is entered
  // under its own symbol, an end rule under the right endmarker, and an
  // epsilon rule under any symbol the input head may rest on (every user
  // symbol or the right endmarker; the left endmarker is left behind by the
  // boot step).
  std::vector<int> anySigma;
  for (int id : inMap) anySigma.push_back(id);
  anySigma.push_back(in_rend);

  auto addRule = [&](int from, int in, int st, int to, int stW, int d1,
                     int d3) {
    Rule r;
    r.from = from;
    r.in = in;
    r.wk = wk_lend;
    r.st = st;
    r.to = to;
    r.wkW = wk_lend;
    r.stW = stW;
    r.d1 = d1;
    r.d2 = 0;
    r.d3 = d3;
    m.rules.push_back(r);
  };

  // Boot: step off the input left endmarker; the storage head stays home.
  addRule(boot, in_lend, st_lend, home[spec.initial], st_lend, 1, 0);

  // Rides: while scanning a frozen blank, a home state drifts left unchanged.
  for (std::size_t q = 0; q < spec.stateNames.size(); ++q)
    for (int sig : anySigma)
      addRule(home[q], sig, st_frozen, home[q], st_frozen, 0, -1);

  // Acceptance: once the whole input is consumed, an accepting control state
  // halts the machine from its resting cell (top of stack or left endmarker).
  std::vector<int> restSyms;
  restSyms.push_back(st_lend);
  for (std::size_t i = 1; i < spec.stackNames.size(); ++i)
    restSyms.push_back(stMap[i]);
  for (std::size_t q = 0; q < spec.stateNames.size(); ++q)
    if (spec.accepting[q])
      for (int s : restSyms) addRule(home[q], in_rend, s, acc, s, 0, 0);

  // Per-rule translation.
  for (std::size_t ri = 0; ri < spec.rules.size(); ++ri) {
    const PdaRule& r = spec.rules[ri];
    // Which dispatch symbols fire this rule, and does it consume?
    std::vector<int> sigmas;
    int d1 = 0;
    if (r.in == pda_eps) {
      for (int sig : anySigma) {
        // The acceptance rule owns the (accepting state, end) combination.
        if (sig == in_rend && spec.accepting[r.from]) continue;
        sigmas.push_back(sig);
      }
    } else if (r.in == pda_end) {
      if (!spec.accepting[r.from]) sigmas.push_back(in_rend);
    } else {
      sigmas.push_back(inMap[r.in]);
      d1 = 1;
    }
    if (sigmas.empty()) continue;

    // Replacement to write at the blank frontier.
    std::vector<int> beta;
    const bool atBottom = (r.top == 0);
    const std::size_t betaFrom = atBottom ? 1 : 0;
    for (std::size_t j = betaFrom; j < r.push.size(); ++j)
      beta.push_back(stMap[r.push[j]]);
    const int scan = atBottom ? st_lend : stMap[r.top];

    if (beta.empty()) {
      if (atBottom) {
        // State-only move at the left endmarker.
        for (int sig : sigmas)
          addRule(home[r.from], sig, scan, home[r.to], st_lend, d1, 0);
      } else {
        // Pop: freeze the top in place; the home state then rides left.
        for (int sig : sigmas)
          addRule(home[r.from], sig, scan, home[r.to], st_frozen, d1, 0);
      }
      continue;
    }

    // Push/replace: leave the scanned cell (freezing it unless it is the
    // endmarker), ride right to the first fresh cell, write the replacement.
    const int seek =
        m.add_state("s:" + std::to_string(ri));
    for (int sig : sigmas)
      addRule(home[r.from], sig, scan, seek,
              atBottom ? st_lend : st_frozen, d1, 1);
    for (int sig : anySigma)
      addRule(seek, sig, st_frozen, seek, st_frozen, 0, 1);
    int cur = seek;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      const bool last = (j + 1 == beta.size());
      const int next =
          last ? home[r.to]
               : m.add_state("w:" + std::to_string(ri) + ":" +
                             std::to_string(j + 1));
      for (int sig : anySigma)
        addRule(cur, sig, st_blank, next, beta[j], 0, last ? 0 : 1);
      cur = next;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// depth-2 storage machine -> dpda
// ---------------------------------------------------------------------------

namespace {

// Folds a deterministic one-way depth-2 machine whose frozen-blank episodes
// are straight, state-frozen traversals (the shape desensitize() produces)
// into a pushdown automaton.  Live depth-1 cells form the stack; the head is
// either at the anchor (top of stack, or the left endmarker when the stack is
// empty) or at the first fresh cell right of everything ever written; frozen
// traversals between the two are elided.  One bit per stack entry ("are
// frozen cells buried directly below this entry?") plus one bit of state
// ("are frozen cells buried between the anchor and the fresh frontier?")
// decide whether an elided traversal actually crosses frozen cells and then
// needs the machine's frozen-blank rule to exist.
struct StackFolder {
  const MachineSpec& n;
  PdaSpec p;

  // Sim state: machine state, head mode (0 = at anchor, 1 = at frontier),
  // buffered input symbol (machine input id; -1 = empty), gap bit.
  struct Key {
    int q, mode, buf, gap;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, int> stateIds;
  std::deque<Key> work;
  int accDrain = -1;

  // (from, in, st) -> rule, for deterministic lookup.
  std::map<std::tuple<int, int, int>, const Rule*> ruleAt;

  explicit StackFolder(const MachineSpec& machine) : n(machine) {
    for (const Rule& r : n.rules) {
      auto key = std::make_tuple(r.from, r.in, r.st);
      if (ruleAt.count(key))
        throw PreconditionViolated(
            "sda2_to_dpda: input machine is not deterministic");
      ruleAt[key] = &r;
    }
    p.name = n.name;
    for (std::size_t i = 2; i < n.inputNames.size(); ++i)
      p.add_input(n.inputNames[i]);
    // Stack symbols: bottom marker, then every depth-1 symbol twice (with and
    // without the buried-gap bit).
    p.add_stack("$");
    for (std::size_t s = 0; s < n.storNames.size(); ++s)
      if (n.storDepth[s] == 1) {
        p.add_stack(n.storNames[s]);
        p.add_stack(n.storNames[s] + "/g");
      }
    accDrain = p.add_state("acc!", true);
    for (std::size_t i = 0; i < p.inputNames.size(); ++i)
      for (std::size_t z = 0; z < p.stackNames.size(); ++z)
        p.rules.push_back({accDrain, static_cast<int>(i),
                           static_cast<int>(z), accDrain,
                           {static_cast<int>(z)}});
  }

  bool accepting_state(int q) const { return n.accepting[q] != 0; }
  bool rejecting_state(int q) const { return n.rejecting[q] != 0; }

  int stack_sym(int stor, int gapBelow) const {
    const std::string name =
        n.storNames[stor] + (gapBelow ? "/g" : "");
    int id = p.stack_id(name);
    if (id < 0) throw std::logic_error("missing stack symbol");
    return id;
  }

  int intern(int q, int mode, int buf, int gap) {
    if (accepting_state(q)) return accDrain;
    Key key{q, mode, buf, gap};
    auto it = stateIds.find(key);
    if (it != stateIds.end()) return it->second;
    std::string name = n.stateNames[q];
    name += (mode == 0) ? "|a" : "|x";
    name += '|';
    name += (buf < 0) ? std::string("?") : n.inputNames[buf];
    name += gap ? "|g" : "|.";
    int id = p.add_state(name, false);
    stateIds.emplace(key, id);
    work.push_back(key);
    return id;
  }

  // The frozen-blank rule a traversal in state q under input sigma relies on.
  // Returns +1/-1 for a straight traversal, 0 for a stall (the machine sits
  // on the frozen cell forever), -2 when no rule exists (the machine dies).
  int slide_direction(int q, int sigma) {
    auto it = ruleAt.find(std::make_tuple(q, sigma, st_frozen));
    if (it == ruleAt.end()) return -2;
    const Rule* r = it->second;
    if (r->d1 != 0 || r->to != q || r->stW != st_frozen)
      throw PreconditionViolated(
          "sda2_to_dpda: machine moves its input head or changes state while "
          "scanning a frozen blank");
    return r->d3;
  }

  void emit(int from, int in, int top, int to, std::vector<int> push) {
    p.rules.push_back({from, in, top, to, std::move(push)});
  }

  // Derive the successor of sim state `key` when the stack top is `z`
  // (a pda stack id).  Emits at most one pda rule.
  void derive(const Key& key, int zTop) {
    const int from = stateIds.at(key);
    if (key.buf < 0) {
      // Buffering states are handled in expand(); never reached here.
      return;
    }
    // What storage symbol does the machine scan?
    int scan;
    int topStor = -1, topGap = 0;
    if (key.mode == 0) {
      if (zTop == 0) {
        scan = st_lend;
      } else {
        const std::string& name = p.stackNames[zTop];
        std::string base = name;
        if (base.size() > 2 && base.substr(base.size() - 2) == "/g") {
          base = base.substr(0, base.size() - 2);
          topGap = 1;
        }
        topStor = n.stor_id(base);
        scan = topStor;
      }
    } else {
      scan = st_blank;
    }
    auto it = ruleAt.find(std::make_tuple(key.q, key.buf, scan));
    if (it == ruleAt.end()) return;  // machine halts; word rejected
    const Rule& r = *it->second;
    if (rejecting_state(r.to)) return;
    if (key.buf == in_rend && r.d1 != 0) return;  // would run off the input
    const int bufNext = (r.d1 != 0) ? -1 : key.buf;
    const int wDepth = n.depth_of(r.stW);

    auto target = [&](int mode, int gap) {
      return intern(r.to, mode, bufNext, gap);
    };
    auto keepTop = [&] { return std::vector<int>{zTop}; };

    if (key.mode == 0 && zTop == 0) {
      // At the storage left endmarker (stack empty).
      if (r.stW != st_lend) return;
      if (r.d3 == 0) {
        emit(from, pda_eps, zTop, target(0, key.gap), keepTop());
      } else if (r.d3 == 1) {
        if (key.gap && slide_direction(r.to, key.buf) != 1) return;
        emit(from, pda_eps, zTop, target(1, key.gap), keepTop());
      }
      // d3 == -1 runs off the tape: no rule.
      return;
    }

    if (key.mode == 0) {
      // At the top of the stack, scanning topStor.
      if (r.d3 == 0) {
        if (r.stW == scan) {
          emit(from, pda_eps, zTop, target(0, key.gap), keepTop());
        } else if (r.stW == st_frozen) {
          // Freeze in place, then traverse out of the fresh frozen cell.
          const int dir = slide_direction(r.to, key.buf);
          if (dir == 1)
            emit(from, pda_eps, zTop, target(1, 1), {});
          else if (dir == -1)
            emit(from, pda_eps, zTop, target(0, 1), {});
        }
        // Any other stationary rewrite cannot legally fire.
        return;
      }
      // Moving off a depth-1 cell always freezes it (pop).
      if (r.stW != st_frozen) return;
      if (r.d3 == 1) {
        if (key.gap && slide_direction(r.to, key.buf) != 1) return;
        emit(from, pda_eps, zTop, target(1, 1), {});
      } else {
        if (topGap && slide_direction(r.to, key.buf) != -1) return;
        emit(from, pda_eps, zTop, target(0, 1), {});
      }
      return;
    }

    // mode == 1: at the first fresh cell.
    if (r.d3 == 0) {
      if (r.stW == st_blank) {
        emit(from, pda_eps, zTop, target(1, key.gap), keepTop());
      } else if (wDepth == 1) {
        // Push in place: the head now rests on the new top.
        emit(from, pda_eps, zTop, target(0, 0),
             {zTop, stack_sym(r.stW, key.gap)});
      } else if (r.stW == st_frozen) {
        const int dir = slide_direction(r.to, key.buf);
        if (dir == 1)
          emit(from, pda_eps, zTop, target(1, 1), keepTop());
        else if (dir == -1)
          emit(from, pda_eps, zTop, target(0, 1), keepTop());
      }
      return;
    }
    if (r.d3 == 1) {
      if (wDepth == 1) {
        emit(from, pda_eps, zTop, target(1, 0),
             {zTop, stack_sym(r.stW, key.gap)});
      } else if (r.stW == st_frozen) {
        emit(from, pda_eps, zTop, target(1, 1), keepTop());
      }
      return;
    }
    // d3 == -1 from a fresh cell.
    if (wDepth == 1)
      throw PreconditionViolated(
          "sda2_to_dpda: storage evolution is not stack-like (a live cell "
          "was written behind a leftward move)");
    if (r.stW != st_frozen) return;
    if (key.gap && slide_direction(r.to, key.buf) != -1) return;
    emit(from, pda_eps, zTop, target(0, 1), keepTop());
  }

  void expand(const Key& key) {
    const int from = stateIds.at(key);
    if (key.buf < 0) {
      // Refill the one-symbol input buffer: consume the next user symbol, or
      // look ahead at the end of the input.
      for (std::size_t i = 2; i < n.inputNames.size(); ++i) {
        const int to = intern(key.q, key.mode, static_cast<int>(i), key.gap);
        for (std::size_t z = 0; z < p.stackNames.size(); ++z)
          emit(from, static_cast<int>(i) - 2, static_cast<int>(z), to,
               {static_cast<int>(z)});
      }
      const int to = intern(key.q, key.mode, in_rend, key.gap);
      for (std::size_t z = 0; z < p.stackNames.size(); ++z)
        emit(from, pda_end, static_cast<int>(z), to, {static_cast<int>(z)});
      return;
    }
    if (key.mode == 0) {
      for (std::size_t z = 0; z < p.stackNames.size(); ++z)
        derive(key, static_cast<int>(z));
    } else {
      for (std::size_t z = 0; z < p.stackNames.size(); ++z)
        derive(key, static_cast<int>(z));
    }
  }

  PdaSpec fold() {
    if (accepting_state(n.initial)) {
      p.initial = accDrain;
      return p;
    }
    p.initial = intern(n.initial, 0, in_lend, 0);
    while (!work.empty()) {
      Key key = work.front();
      work.pop_front();
      expand(key);
    }
    return p;
  }
};

}  // namespace

PdaSpec sda2_to_dpda(const MachineSpec& spec) {
  if (spec.kind != MachineKind::Sda)
    throw PreconditionViolated(
        "sda2_to_dpda: input must be a deterministic one-way machine");
  if (spec.k != 2)
    throw PreconditionViolated("sda2_to_dpda: input must have depth 2");
  for (const Rule& r : spec.rules)
    if (r.st == st_frozen && r.d1 != 0)
      throw PreconditionViolated(
          "sda2_to_dpda: input machine moves its input head while scanning a "
          "frozen blank");
  MachineSpec n = desensitize(spec);
  StackFolder folder(n);
  return folder.fold();
}

}  // namespace storax
