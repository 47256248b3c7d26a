#include "storax/machine.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace storax {

bool kind_is_aux(MachineKind k) {
    return k == MachineKind::AuxSda || k == MachineKind::AuxSna;
}

bool kind_is_deterministic(MachineKind k) {
    return k == MachineKind::Sda || k == MachineKind::AuxSda;
}

std::string kind_name(MachineKind k) {
    switch (k) {
        case MachineKind::Sda: return "sda";
        case MachineKind::Sna: return "sna";
        case MachineKind::AuxSda: return "aux-sda";
        case MachineKind::AuxSna: return "aux-sna";
    }
    return "?";
}

MachineKind kind_from_name(const std::string& s) {
    if (s == "sda") return MachineKind::Sda;
    if (s == "sna") return MachineKind::Sna;
    if (s == "aux-sda") return MachineKind::AuxSda;
    if (s == "aux-sna") return MachineKind::AuxSna;
    throw std::invalid_argument("unknown machine kind: " + s);
}

MachineSpec::MachineSpec() : MachineSpec(MachineKind::Sna, 2) {}

MachineSpec::MachineSpec(MachineKind kind_, int k_, std::string name_)
    : kind(kind_), k(k_), name(std::move(name_)) {
    inputNames = {">", "<"};
    storNames = {">", "_", "B"};
    storDepth = {k, 0, k};
    workNames = {">", "_"};
}

StateId MachineSpec::add_state(const std::string& nm, bool acc, bool rej) {
    stateNames.push_back(nm);
    accepting.push_back(acc ? 1 : 0);
    rejecting.push_back(rej ? 1 : 0);
    return (StateId)stateNames.size() - 1;
}

SymId MachineSpec::add_input(const std::string& nm) {
    inputNames.push_back(nm);
    return (SymId)inputNames.size() - 1;
}

SymId MachineSpec::add_stor(const std::string& nm, int depth) {
    if (depth < 1 || depth > k - 1)
        throw std::invalid_argument("storage symbol depth must lie in [1,k-1]: " + nm);
    storNames.push_back(nm);
    storDepth.push_back(depth);
    return (SymId)storNames.size() - 1;
}

SymId MachineSpec::add_work(const std::string& nm) {
    workNames.push_back(nm);
    return (SymId)workNames.size() - 1;
}

static int find_name(const std::vector<std::string>& v, const std::string& nm) {
    auto it = std::find(v.begin(), v.end(), nm);
    return it == v.end() ? -1 : (int)(it - v.begin());
}

StateId MachineSpec::state_id(const std::string& nm) const { return find_name(stateNames, nm); }
SymId MachineSpec::input_id(const std::string& nm) const { return find_name(inputNames, nm); }
SymId MachineSpec::stor_id(const std::string& nm) const { return find_name(storNames, nm); }
SymId MachineSpec::work_id(const std::string& nm) const { return find_name(workNames, nm); }

size_t ConfigurationHash::operator()(const Configuration& c) const {
    size_t h = 1469598103934665603ull;
    auto mix = [&h](size_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix((size_t)c.state);
    mix((size_t)c.l1);
    mix((size_t)c.l2);
    mix((size_t)c.l3);
    mix((size_t)c.lastMove);
    for (SymId s : c.work) mix((size_t)s * 31 + 7);
    mix(0xabcdull);
    for (SymId s : c.storage) mix((size_t)s * 37 + 11);
    return h;
}

Configuration initial_configuration(const MachineSpec& spec) {
    Configuration c;
    c.state = spec.initial;
    c.l1 = c.l2 = c.l3 = 0;
    c.work = {wk_lend};
    c.storage = {st_lend};
    c.lastMove = LastMove::Stationary;
    return c;
}

Word word_from_string(const MachineSpec& spec, const std::string& s) {
    Word w;
    for (char ch : s) {
        SymId id = spec.input_id(std::string(1, ch));
        if (id < 2) throw std::invalid_argument(std::string("unknown input symbol: ") + ch);
        w.push_back(id);
    }
    return w;
}

std::string word_to_string(const MachineSpec& spec, const Word& w) {
    std::string s;
    for (SymId id : w) s += spec.inputNames[id];
    return s;
}

SymId input_at(const Word& x, int l1) {
    if (l1 == 0) return in_lend;
    if (l1 == (int)x.size() + 1) return in_rend;
    if (l1 < 0 || l1 > (int)x.size() + 1) throw std::logic_error("input head out of range");
    return x[l1 - 1];
}

SymId work_at(const Configuration& c, int pos) {
    if (pos < 0) throw std::logic_error("work head out of range");
    return pos < (int)c.work.size() ? c.work[pos] : wk_blank;
}

SymId storage_at(const Configuration& c, int pos) {
    if (pos < 0) throw std::logic_error("storage head out of range");
    return pos < (int)c.storage.size() ? c.storage[pos] : st_blank;
}

StepError::StepError(StepErrorKind k, const std::string& what)
    : std::runtime_error(what), kind(k) {}

TurnKind classify_turn(LastMove lm, int d3) {
    if (lm == LastMove::FromLeft && d3 == -1) return TurnKind::Left;
    if (lm == LastMove::FromRight && d3 == 1) return TurnKind::Right;
    return TurnKind::None;
}

StationaryKind classify_stationary(LastMove lm, int d3) {
    if (d3 != 0) return StationaryKind::None;
    return lm == LastMove::Stationary ? StationaryKind::Extrinsic : StationaryKind::Intrinsic;
}

int mandated_depth(int e, int k, TurnKind turn) {
    return std::min(e + (turn == TurnKind::None ? 1 : 2), k);
}

static void trim_tail(std::vector<SymId>& tape, SymId blank) {
    while (tape.size() > 1 && tape.back() == blank) tape.pop_back();
}

// Core transition check + apply. Returns false with (err, msg) set when the rule is
// dynamically illegal; assumes the rule already matches the scanned symbols.
static bool apply_rule(const MachineSpec& spec, const Word& x, const Configuration& cfg,
                       const Rule& r, Configuration& out, StepErrorKind& err,
                       std::string& msg) {
    auto fail = [&](StepErrorKind k, const std::string& m) {
        err = k;
        msg = m;
        return false;
    };
    const int n = (int)x.size();

    if (r.d1 < -1 || r.d1 > 1 || r.d2 < -1 || r.d2 > 1 || r.d3 < -1 || r.d3 > 1)
        return fail(StepErrorKind::MalformedMove, "head displacement outside {-1,0,1}");
    if (!spec.aux()) {
        if (r.d1 < 0) return fail(StepErrorKind::MalformedMove, "one-way machine moving input head left");
        if (r.d2 != 0 || r.wk != wk_lend || r.wkW != wk_lend)
            return fail(StepErrorKind::MalformedMove, "one-way machine using work tape");
    }
    if (r.d1 == 0 && r.d2 == 0 && r.d3 == 0 && !spec.relaxed)
        return fail(StepErrorKind::MalformedMove, "all heads stationary");
    if (cfg.l1 + r.d1 < 0 || cfg.l1 + r.d1 > n + 1)
        return fail(StepErrorKind::MalformedMove, "input head out of range");
    if (cfg.l2 + r.d2 < 0)
        return fail(StepErrorKind::MalformedMove, "work head left of endmarker");
    if (cfg.l3 + r.d3 < 0)
        return fail(StepErrorKind::MalformedMove, "storage head left of endmarker");

    // Work tape: stationary head keeps its symbol; endmarker cell is immutable.
    if (r.d2 == 0 && r.wkW != r.wk)
        return fail(StepErrorKind::MalformedMove, "work write without work head motion");
    if (r.wk == wk_lend && r.wkW != wk_lend)
        return fail(StepErrorKind::MalformedMove, "overwriting work endmarker");
    if (r.wkW == wk_lend && r.wk != wk_lend)
        return fail(StepErrorKind::MalformedMove, "writing work endmarker inside tape");

    // Storage write discipline.
    if (r.stW == st_lend && r.st != st_lend)
        return fail(StepErrorKind::MalformedMove, "writing storage endmarker inside tape");
    const int e = spec.depth_of(r.st);
    const int w = spec.depth_of(r.stW);
    if (e == spec.k) {
        if (r.stW != r.st)
            return fail(StepErrorKind::FrozenWrite, "rewriting a depth-k storage cell");
    } else if (r.d3 != 0) {
        const int m = mandated_depth(e, spec.k, classify_turn(cfg.lastMove, r.d3));
        if (spec.relaxed ? (w < m || w > spec.k) : (w != m))
            return fail(StepErrorKind::DepthViolation,
                        "moving write depth " + std::to_string(w) + " vs mandate " +
                            std::to_string(m));
    } else {
        const bool keep = r.stW == r.st;
        if (classify_stationary(cfg.lastMove, 0) == StationaryKind::Intrinsic) {
            if (spec.relaxed ? (!keep && (w <= e || w > spec.k)) : (w != std::min(e + 1, spec.k)))
                return fail(StepErrorKind::DepthViolation,
                            "stationary write after arrival must deepen");
        } else {
            if (spec.relaxed ? (!keep && (w <= e || w > spec.k)) : !keep)
                return fail(StepErrorKind::DepthViolation,
                            "stationary dwell may not rewrite its cell");
        }
    }

    out = cfg;
    out.state = r.to;
    if ((int)out.work.size() <= cfg.l2) out.work.resize(cfg.l2 + 1, wk_blank);
    out.work[cfg.l2] = r.wkW;
    if ((int)out.storage.size() <= cfg.l3) out.storage.resize(cfg.l3 + 1, st_blank);
    out.storage[cfg.l3] = r.stW;
    out.l1 = cfg.l1 + r.d1;
    out.l2 = cfg.l2 + r.d2;
    out.l3 = cfg.l3 + r.d3;
    out.lastMove = r.d3 == 0 ? LastMove::Stationary
                             : (r.d3 > 0 ? LastMove::FromLeft : LastMove::FromRight);
    trim_tail(out.work, wk_blank);
    trim_tail(out.storage, st_blank);
    return true;
}

static bool rule_matches(const MachineSpec& spec, const Word& x, const Configuration& cfg,
                         const Rule& r) {
    return r.from == cfg.state && r.in == input_at(x, cfg.l1) &&
           r.wk == work_at(cfg, cfg.l2) && r.st == storage_at(cfg, cfg.l3);
}

Configuration step(const MachineSpec& spec, const Word& x, const Configuration& cfg,
                   const Rule& rule) {
    if (spec.halting(cfg.state)) throw std::logic_error("stepping a halted configuration");
    if (!rule_matches(spec, x, cfg, rule)) throw std::logic_error("rule does not match configuration");
    Configuration out;
    StepErrorKind err;
    std::string msg;
    if (!apply_rule(spec, x, cfg, rule, out, err, msg)) throw StepError(err, msg);
    return out;
}

std::vector<int> applicable_rules(const MachineSpec& spec, const Word& x,
                                  const Configuration& cfg) {
    std::vector<int> idx;
    if (spec.halting(cfg.state)) return idx;
    for (int i = 0; i < (int)spec.rules.size(); i++) {
        const Rule& r = spec.rules[i];
        if (!rule_matches(spec, x, cfg, r)) continue;
        Configuration out;
        StepErrorKind err;
        std::string msg;
        if (apply_rule(spec, x, cfg, r, out, err, msg)) idx.push_back(i);
    }
    return idx;
}

std::vector<Configuration> successors(const MachineSpec& spec, const Word& x,
                                      const Configuration& cfg) {
    std::vector<Configuration> res;
    if (spec.halting(cfg.state)) return res;
    std::unordered_set<Configuration, ConfigurationHash> seen;
    for (const Rule& r : spec.rules) {
        if (!rule_matches(spec, x, cfg, r)) continue;
        Configuration out;
        StepErrorKind err;
        std::string msg;
        if (apply_rule(spec, x, cfg, r, out, err, msg) && seen.insert(out).second)
            res.push_back(out);
    }
    return res;
}

SurfaceConfiguration surface_of(const Configuration& c) {
    SurfaceConfiguration s;
    s.state = c.state;
    s.l1 = c.l1;
    s.l2 = c.l2;
    s.l3 = c.l3;
    s.work = c.work;
    s.scan = storage_at(c, c.l3);
    return s;
}

ValidationReport validate_machine(const MachineSpec& spec) {
    ValidationReport rep;
    auto issue = [&rep](const std::string& w, int ri = -1) {
        rep.issues.push_back({w, ri});
    };

    if (spec.k < 1) issue("storage depth bound k must be >= 1");
    if (spec.stateNames.empty()) issue("no states");
    if (spec.initial < 0 || spec.initial >= spec.n_states()) issue("initial state out of range");
    for (int q = 0; q < spec.n_states(); q++)
        if (spec.accepting[q] && spec.rejecting[q])
            issue("state " + spec.stateNames[q] + " both accepting and rejecting");
    if (spec.storDepth.size() != spec.storNames.size()) issue("storage depth table size mismatch");
    for (int s = 3; s < (int)spec.storNames.size(); s++)
        if (spec.storDepth[s] < 1 || spec.storDepth[s] > spec.k - 1)
            issue("storage symbol " + spec.storNames[s] + " depth outside [1,k-1]");

    for (int i = 0; i < (int)spec.rules.size(); i++) {
        const Rule& r = spec.rules[i];
        auto bad = [&](const std::string& w) { issue(w, i); };
        if (r.from < 0 || r.from >= spec.n_states() || r.to < 0 || r.to >= spec.n_states()) {
            bad("rule state out of range");
            continue;
        }
        if (r.in < 0 || r.in >= (int)spec.inputNames.size()) bad("rule input symbol out of range");
        if (r.st < 0 || r.st >= (int)spec.storNames.size() || r.stW < 0 ||
            r.stW >= (int)spec.storNames.size())
            bad("rule storage symbol out of range");
        if (r.wk < 0 || r.wk >= (int)spec.workNames.size() || r.wkW < 0 ||
            r.wkW >= (int)spec.workNames.size())
            bad("rule work symbol out of range");
        if (spec.halting(r.from)) bad("rule leaves a halting state");
        if (r.d1 < -1 || r.d1 > 1 || r.d2 < -1 || r.d2 > 1 || r.d3 < -1 || r.d3 > 1)
            bad("head displacement outside {-1,0,1}");
        if (!spec.aux()) {
            if (r.d1 < 0) bad("one-way machine moving input head left");
            if (r.d2 != 0 || r.wk != wk_lend || r.wkW != wk_lend)
                bad("one-way machine using work tape");
        }
        if (r.d1 == 0 && r.d2 == 0 && r.d3 == 0 && !spec.relaxed)
            bad("all heads stationary");
        if (r.d2 == 0 && r.wkW != r.wk) bad("work write without work head motion");
        if (r.wk == wk_lend && r.wkW != wk_lend) bad("overwriting work endmarker");
        if (r.wkW == wk_lend && r.wk != wk_lend) bad("writing work endmarker inside tape");
        if (r.stW == st_lend && r.st != st_lend) bad("writing storage endmarker inside tape");
        if (spec.depth_of(r.st) == spec.k && r.stW != r.st) bad("rewriting a depth-k storage cell");
        if (r.stW != r.st && spec.depth_of(r.stW) <= spec.depth_of(r.st))
            bad("storage rewrite does not deepen");
        if (r.in == in_rend && r.d1 > 0) bad("input head moving right off the right endmarker");
    }

    if (spec.deterministic()) {
        std::unordered_set<long long> seen;
        for (int i = 0; i < (int)spec.rules.size(); i++) {
            const Rule& r = spec.rules[i];
            long long key = ((long long)r.from << 40) ^ ((long long)r.in << 28) ^
                            ((long long)r.wk << 16) ^ (long long)r.st;
            if (!seen.insert(key).second)
                issue("duplicate deterministic branch point", i);
        }
    }
    return rep;
}

ParseError::ParseError(int line_, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

bool comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return true;
}

int parse_int(const std::string& t, int lineNo, const std::string& what) {
    try {
        size_t pos;
        int v = std::stoi(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineNo, "expected integer for " + what + ", got '" + t + "'");
    }
}

}  // namespace

MachineSpec parse_machine(std::istream& is) {
    std::string line;
    int lineNo = 0;
    bool haveHeader = false;
    MachineSpec spec;
    auto need_state = [&](const std::string& nm) {
        StateId q = spec.state_id(nm);
        if (q < 0) throw ParseError(lineNo, "unknown state '" + nm + "'");
        return q;
    };
    auto need_input = [&](const std::string& nm) {
        SymId s = spec.input_id(nm);
        if (s < 0) throw ParseError(lineNo, "unknown input symbol '" + nm + "'");
        return s;
    };
    auto need_stor = [&](const std::string& nm) {
        SymId s = spec.stor_id(nm);
        if (s < 0) throw ParseError(lineNo, "unknown storage symbol '" + nm + "'");
        return s;
    };
    auto need_work = [&](const std::string& nm) {
        SymId s = spec.work_id(nm);
        if (s < 0) throw ParseError(lineNo, "unknown work symbol '" + nm + "'");
        return s;
    };

    while (std::getline(is, line)) {
        lineNo++;
        if (comment_or_blank(line)) continue;
        auto toks = tokenize(line);
        if (!haveHeader) {
            if (toks[0] != "machine") throw ParseError(lineNo, "expected 'machine' header");
            MachineKind kind = MachineKind::Sna;
            int k = -1;
            bool relaxed = false;
            std::string name;
            bool haveKind = false;
            for (size_t i = 1; i < toks.size(); i++) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw ParseError(lineNo, "expected key=value, got '" + toks[i] + "'");
                std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
                if (key == "kind") {
                    try {
                        kind = kind_from_name(val);
                    } catch (const std::invalid_argument& ex) {
                        throw ParseError(lineNo, ex.what());
                    }
                    haveKind = true;
                } else if (key == "k") {
                    k = parse_int(val, lineNo, "k");
                } else if (key == "relaxed") {
                    relaxed = parse_int(val, lineNo, "relaxed") != 0;
                } else if (key == "name") {
                    name = val;
                } else {
                    throw ParseError(lineNo, "unknown header key '" + key + "'");
                }
            }
            if (!haveKind || k < 1) throw ParseError(lineNo, "header needs kind= and k>=1");
            spec = MachineSpec(kind, k, name);
            spec.relaxed = relaxed;
            haveHeader = true;
            continue;
        }
        const std::string& head = toks[0];
        if (head == "states") {
            for (size_t i = 1; i < toks.size(); i++) {
                if (spec.state_id(toks[i]) >= 0)
                    throw ParseError(lineNo, "duplicate state '" + toks[i] + "'");
                spec.add_state(toks[i]);
            }
        } else if (head == "initial") {
            if (toks.size() != 2) throw ParseError(lineNo, "initial takes one state");
            spec.initial = need_state(toks[1]);
        } else if (head == "accept") {
            for (size_t i = 1; i < toks.size(); i++) spec.accepting[need_state(toks[i])] = 1;
        } else if (head == "reject") {
            for (size_t i = 1; i < toks.size(); i++) spec.rejecting[need_state(toks[i])] = 1;
        } else if (head == "input") {
            for (size_t i = 1; i < toks.size(); i++) {
                if (spec.input_id(toks[i]) >= 0)
                    throw ParseError(lineNo, "duplicate input symbol '" + toks[i] + "'");
                spec.add_input(toks[i]);
            }
        } else if (head == "storage") {
            if (toks.size() < 2) throw ParseError(lineNo, "storage needs a depth");
            int depth = parse_int(toks[1], lineNo, "storage depth");
            if (depth == 0 || depth == spec.k) {
                // The reserved blanks may be declared redundantly.
                const std::string want = depth == 0 ? "_" : "B";
                for (size_t i = 2; i < toks.size(); i++)
                    if (toks[i] != want)
                        throw ParseError(lineNo, "depth " + toks[1] + " admits only '" + want + "'");
                continue;
            }
            if (depth < 1 || depth > spec.k - 1)
                throw ParseError(lineNo, "storage depth outside [1,k-1]");
            for (size_t i = 2; i < toks.size(); i++) {
                if (spec.stor_id(toks[i]) >= 0)
                    throw ParseError(lineNo, "duplicate storage symbol '" + toks[i] + "'");
                spec.add_stor(toks[i], depth);
            }
        } else if (head == "work") {
            if (!spec.aux()) throw ParseError(lineNo, "work symbols on a machine without work tape");
            for (size_t i = 1; i < toks.size(); i++) {
                if (spec.work_id(toks[i]) >= 0)
                    throw ParseError(lineNo, "duplicate work symbol '" + toks[i] + "'");
                spec.add_work(toks[i]);
            }
        } else if (head == "trans") {
            // trans <state> <in> <work|-> <stor> -> <state> <workW|-> <storW> <d1> <d2|-> <d3>
            Rule r;
            if (toks.size() != 12 || toks[5] != "->")
                throw ParseError(lineNo, "malformed trans line");
            auto work_field = [&](const std::string& t) {
                if (spec.aux()) {
                    if (t == "-") throw ParseError(lineNo, "aux machine needs a work symbol, not '-'");
                    return need_work(t);
                }
                if (t != "-") throw ParseError(lineNo, "machine without work tape: use '-'");
                return wk_lend;
            };
            r.from = need_state(toks[1]);
            r.in = need_input(toks[2]);
            r.wk = work_field(toks[3]);
            r.st = need_stor(toks[4]);
            r.to = need_state(toks[6]);
            r.wkW = work_field(toks[7]);
            r.stW = need_stor(toks[8]);
            r.d1 = parse_int(toks[9], lineNo, "d1");
            if (spec.aux()) {
                r.d2 = parse_int(toks[10], lineNo, "d2");
            } else {
                if (toks[10] != "-") throw ParseError(lineNo, "machine without work tape: d2 is '-'");
                r.d2 = 0;
            }
            r.d3 = parse_int(toks[11], lineNo, "d3");
            spec.rules.push_back(r);
        } else {
            throw ParseError(lineNo, "unknown directive '" + head + "'");
        }
    }
    if (!haveHeader) throw ParseError(lineNo, "empty machine file");
    return spec;
}

MachineSpec parse_machine_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open machine file: " + path);
    return parse_machine(f);
}

MachineSpec parse_machine_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_machine(ss);
}

std::string print_machine(const MachineSpec& spec) {
    std::ostringstream os;
    os << "machine kind=" << kind_name(spec.kind) << " k=" << spec.k;
    if (spec.relaxed) os << " relaxed=1";
    if (!spec.name.empty()) os << " name=" << spec.name;
    os << "\n";
    os << "states";
    for (const auto& s : spec.stateNames) os << " " << s;
    os << "\n";
    os << "initial " << spec.stateNames[spec.initial] << "\n";
    bool anyAcc = false, anyRej = false;
    for (int q = 0; q < spec.n_states(); q++) {
        anyAcc = anyAcc || spec.accepting[q];
        anyRej = anyRej || spec.rejecting[q];
    }
    if (anyAcc) {
        os << "accept";
        for (int q = 0; q < spec.n_states(); q++)
            if (spec.accepting[q]) os << " " << spec.stateNames[q];
        os << "\n";
    }
    if (anyRej) {
        os << "reject";
        for (int q = 0; q < spec.n_states(); q++)
            if (spec.rejecting[q]) os << " " << spec.stateNames[q];
        os << "\n";
    }
    if (spec.inputNames.size() > 2) {
        os << "input";
        for (size_t i = 2; i < spec.inputNames.size(); i++) os << " " << spec.inputNames[i];
        os << "\n";
    }
    for (int d = 1; d <= spec.k - 1; d++) {
        bool any = false;
        for (size_t i = 3; i < spec.storNames.size(); i++)
            if (spec.storDepth[i] == d) any = true;
        if (!any) continue;
        os << "storage " << d;
        for (size_t i = 3; i < spec.storNames.size(); i++)
            if (spec.storDepth[i] == d) os << " " << spec.storNames[i];
        os << "\n";
    }
    if (spec.aux() && spec.workNames.size() > 2) {
        os << "work";
        for (size_t i = 2; i < spec.workNames.size(); i++) os << " " << spec.workNames[i];
        os << "\n";
    }
    for (const Rule& r : spec.rules) {
        os << "trans " << spec.stateNames[r.from] << " " << spec.inputNames[r.in] << " "
           << (spec.aux() ? spec.workNames[r.wk] : "-") << " " << spec.storNames[r.st] << " -> "
           << spec.stateNames[r.to] << " " << (spec.aux() ? spec.workNames[r.wkW] : "-") << " "
           << spec.storNames[r.stW] << " " << r.d1 << " ";
        if (spec.aux())
            os << r.d2;
        else
            os << "-";
        os << " " << r.d3 << "\n";
    }
    return os.str();
}

}  // namespace storax
