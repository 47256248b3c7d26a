#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "storax/machine.hpp"
#include "storax/pda.hpp"
#include "storax/simulate.hpp"

using namespace storax;

namespace {

// Independent language oracles.
bool balanced_brackets(const std::string& x) {
  int depth = 0;
  for (char c : x) {
    if (c == '(')
      ++depth;
    else if (c == ')')
      --depth;
    else
      return false;
    if (depth < 0) return false;
  }
  return depth == 0;
}

bool is_anbn(const std::string& x) {
  std::size_t i = 0;
  while (i < x.size() && x[i] == 'a') ++i;
  std::size_t j = i;
  while (j < x.size() && x[j] == 'b') ++j;
  return j == x.size() && (x.size() - i) == i;
}

std::vector<std::string> words_up_to(const std::string& alpha, int maxLen) {
  std::vector<std::string> out{""};
  std::size_t layerBegin = 0;
  for (int len = 1; len <= maxLen; ++len) {
    std::size_t layerEnd = out.size();
    for (std::size_t i = layerBegin; i < layerEnd; ++i)
      for (char c : alpha) out.push_back(out[i] + c);
    layerBegin = layerEnd;
  }
  return out;
}

PdaSpec bracket_pda() {
  PdaSpec p;
  p.name = "dyck";
  int s = p.add_state("s");
  int acc = p.add_state("acc", true);
  int lp = p.add_input("(");
  int rp = p.add_input(")");
  int Z = p.add_stack("Z");
  int A = p.add_stack("A");
  p.initial = s;
  p.rules.push_back({s, lp, Z, s, {Z, A}});
  p.rules.push_back({s, lp, A, s, {A, A}});
  p.rules.push_back({s, rp, A, s, {}});
  p.rules.push_back({s, pda_end, Z, acc, {Z}});
  return p;
}

PdaSpec anbn_pda() {
  PdaSpec p;
  p.name = "anbn";
  int st = p.add_state("p");
  int q = p.add_state("q");
  int acc = p.add_state("acc", true);
  int a = p.add_input("a");
  int b = p.add_input("b");
  int Z = p.add_stack("Z");
  int A = p.add_stack("A");
  p.initial = st;
  p.rules.push_back({st, a, Z, st, {Z, A}});
  p.rules.push_back({st, a, A, st, {A, A}});
  p.rules.push_back({st, b, A, q, {}});
  p.rules.push_back({q, b, A, q, {}});
  p.rules.push_back({st, pda_end, Z, acc, {Z}});
  p.rules.push_back({q, pda_end, Z, acc, {Z}});
  return p;
}

}  // namespace

TEST_CASE("pda validation accepts the sample machines") {
  CHECK(validate_pda(bracket_pda()).ok());
  CHECK(validate_pda(anbn_pda()).ok());
}

TEST_CASE("pda validation flags defects") {
  PdaSpec p = bracket_pda();
  SUBCASE("bottom marker popped") {
    p.rules.push_back({0, pda_eps, 0, 0, {}});
    CHECK_FALSE(validate_pda(p).ok());
  }
  SUBCASE("bottom marker pushed above the bottom") {
    p.rules.push_back({0, 1, 1, 0, {1, 0}});
    CHECK_FALSE(validate_pda(p).ok());
  }
  SUBCASE("epsilon rule conflicts with a reading rule") {
    p.rules.push_back({0, pda_eps, 1, 0, {1}});
    CHECK_FALSE(validate_pda(p).ok());
  }
  SUBCASE("duplicate reading rule") {
    p.rules.push_back({0, 0, 1, 0, {1}});
    CHECK_FALSE(validate_pda(p).ok());
  }
  SUBCASE("rule references missing symbol") {
    p.rules.push_back({0, 7, 1, 0, {1}});
    CHECK_FALSE(validate_pda(p).ok());
  }
}

TEST_CASE("run_dpda matches the bracket oracle exhaustively") {
  PdaSpec p = bracket_pda();
  for (const std::string& w : words_up_to("()", 10)) {
    PdaRun run = run_dpda_string(p, w);
    CHECK_FALSE(run.truncated);
    CHECK_MESSAGE((run.outcome == Outcome::Accept) == balanced_brackets(w),
                  "word: ", w);
  }
}

TEST_CASE("run_dpda matches the a^n b^n oracle exhaustively") {
  PdaSpec p = anbn_pda();
  for (const std::string& w : words_up_to("ab", 10)) {
    PdaRun run = run_dpda_string(p, w);
    CHECK_FALSE(run.truncated);
    CHECK_MESSAGE((run.outcome == Outcome::Accept) == is_anbn(w),
                  "word: ", w);
  }
}

TEST_CASE("run_dpda handles trivial and looping machines") {
  SUBCASE("accepting initial state accepts only the empty word") {
    PdaSpec p;
    p.add_state("ok", true);
    p.add_input("a");
    p.add_stack("Z");
    CHECK(run_dpda_string(p, "").outcome == Outcome::Accept);
    CHECK(run_dpda_string(p, "a").outcome == Outcome::Reject);
  }
  SUBCASE("epsilon self-loop hits the step cap") {
    PdaSpec p;
    int q = p.add_state("q");
    p.add_input("a");
    int Z = p.add_stack("Z");
    p.rules.push_back({q, pda_eps, Z, q, {Z}});
    PdaRun run = run_dpda_string(p, "a", 1000);
    CHECK(run.outcome == Outcome::Inconclusive);
    CHECK(run.truncated);
    CHECK(run.steps == 1000);
  }
}

TEST_CASE("pda file format round trips") {
  PdaSpec p = anbn_pda();
  const std::string text = print_pda_string(p);
  PdaSpec q = parse_pda_string(text);
  CHECK(print_pda_string(q) == text);
  CHECK(q.rules.size() == p.rules.size());
  CHECK(q.name == "anbn");

  const std::string expectBracket =
      "machine kind=dpda name=dyck\n"
      "states s acc\n"
      "initial s\n"
      "accept acc\n"
      "input ( )\n"
      "stack Z A\n"
      "rule s ( Z -> s Z,A\n"
      "rule s ( A -> s A,A\n"
      "rule s ) A -> s -\n"
      "rule s < Z -> acc Z\n";
  CHECK(print_pda_string(bracket_pda()) == expectBracket);
  PdaSpec b = parse_pda_string(expectBracket);
  CHECK(run_dpda_string(b, "(())()").outcome == Outcome::Accept);
  CHECK(run_dpda_string(b, "(()").outcome == Outcome::Reject);
}

TEST_CASE("pda parser reports malformed input") {
  CHECK_THROWS_AS(parse_pda_string("machine kind=sda k=2\n"), ParseError);
  CHECK_THROWS_AS(parse_pda_string("states q\n"), ParseError);
  CHECK_THROWS_AS(
      parse_pda_string("machine kind=dpda\nstates q\ninitial q\nstack Z\n"
                       "rule q - Z -> q\n"),
      ParseError);
  CHECK_THROWS_AS(
      parse_pda_string("machine kind=dpda\nstates q\ninitial q\nstack Z\n"
                       "rule q - W -> q Z\n"),
      ParseError);
}

TEST_CASE("dpda_to_sda2 produces a valid deterministic relaxed machine") {
  MachineSpec m = dpda_to_sda2(bracket_pda());
  CHECK(m.kind == MachineKind::Sda);
  CHECK(m.k == 2);
  CHECK(m.relaxed);
  ValidationReport rep = validate_machine(m);
  for (const auto& issue : rep.issues) MESSAGE(issue.what);
  CHECK(rep.ok());
}

TEST_CASE("dpda_to_sda2 preserves the bracket language") {
  PdaSpec p = bracket_pda();
  MachineSpec m = dpda_to_sda2(p);
  for (const std::string& w : words_up_to("()", 10)) {
    Verdict v = run_string(m, w);
    const bool want = balanced_brackets(w);
    CHECK_MESSAGE(v.outcome == (want ? Outcome::Accept : Outcome::Reject),
                  "word: ", w);
    if (v.witness) CHECK(trace_consistent(m, word_from_string(m, w), *v.witness));
  }
}

TEST_CASE("dpda_to_sda2 preserves the a^n b^n language") {
  PdaSpec p = anbn_pda();
  MachineSpec m = dpda_to_sda2(p);
  for (const std::string& w : words_up_to("ab", 10)) {
    Verdict v = run_string(m, w);
    const bool want = is_anbn(w);
    CHECK_MESSAGE(v.outcome == (want ? Outcome::Accept : Outcome::Reject),
                  "word: ", w);
  }
}

TEST_CASE("dpda_to_sda2 output is blank-sensitive and never turns on a blank") {
  for (const PdaSpec& p : {bracket_pda(), anbn_pda()}) {
    MachineSpec m = dpda_to_sda2(p);
    std::vector<Word> inputs = all_words(m, 6);
    AggregateReport fbs = check_property(m, PropertyName::FBS, inputs);
    CHECK_MESSAGE(fbs.pass, "fbs fail on ",
                  fbs.haveCounter ? word_to_string(m, fbs.counterInput)
                                  : std::string("?"),
                  " detail: ", fbs.detail);
    AggregateReport nfbt =
        check_property(m, PropertyName::NoFrozenBlankTurn, inputs);
    CHECK_MESSAGE(nfbt.pass, "turn-on-blank fail, detail: ", nfbt.detail);
  }
}
