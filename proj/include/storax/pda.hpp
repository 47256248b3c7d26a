#pragma once

#include <optional>
#include <string>
#include <vector>

#include "storax/machine.hpp"
#include "storax/simulate.hpp"

namespace storax {

// --- Deterministic pushdown automaton (minimal, endmarker-free input) ---
//
// Input model: the automaton reads the raw word x left to right.  A rule may
// fire in one of three ways:
//   * consuming rule  (in = user symbol): fires when the next unread symbol
//     matches; consumes it.
//   * epsilon rule    (in = -1): fires regardless of the input; consumes
//     nothing.
//   * end rule        (in = pda_end): fires only when the whole word has been
//     consumed; consumes nothing (an end-of-input lookahead).
// Acceptance: the word is accepted iff at some point the whole word has been
// consumed and the control state is accepting.
//
// Stack model: each rule replaces the scanned top symbol with a sequence
// `push` (bottom first).  Empty `push` pops.  Stack symbol 0 is the bottom
// marker: it can never be popped and never appears in `push` except as the
// first element of a replacement for itself.

inline constexpr int pda_eps = -1;   // rule consumes nothing, no lookahead
inline constexpr int pda_end = -2;   // rule fires only at end of input

struct PdaRule {
  int from = 0;
  int in = pda_eps;           // user input id, pda_eps, or pda_end
  int top = 0;                // scanned stack top
  int to = 0;
  std::vector<int> push;      // replacement for `top`, bottom first
  bool operator==(const PdaRule&) const = default;
};

struct PdaSpec {
  std::string name;
  std::vector<std::string> stateNames;
  int initial = 0;
  std::vector<char> accepting;        // per state
  std::vector<std::string> inputNames;  // user symbols only
  std::vector<std::string> stackNames;  // id 0 = bottom marker
  std::vector<PdaRule> rules;

  int add_state(const std::string& name, bool acc = false);
  int add_input(const std::string& name);
  int add_stack(const std::string& name);
  int state_id(const std::string& name) const;
  int input_id(const std::string& name) const;
  int stack_id(const std::string& name) const;
};

ValidationReport validate_pda(const PdaSpec& spec);

// Word helpers for the endmarker-free input alphabet.
Word pda_word_from_string(const PdaSpec& spec, const std::string& text);

struct PdaRun {
  Outcome outcome = Outcome::Reject;
  long long steps = 0;
  bool truncated = false;   // step cap hit while still live
};

inline constexpr long long default_pda_step_cap = 1000000;

PdaRun run_dpda(const PdaSpec& spec, const Word& x,
                long long stepCap = default_pda_step_cap);
PdaRun run_dpda_string(const PdaSpec& spec, const std::string& x,
                       long long stepCap = default_pda_step_cap);

// File format (same outer framing as machine files):
//   machine kind=dpda [name=<name>]
//   states <q> ...
//   initial <q>
//   accept <q> ...
//   input <sym> ...
//   stack <sym> ...          # first symbol listed = bottom marker
//   rule <q> <in|-|<> <top> -> <q'> <push-list|->
// where <in> is a user input symbol, `-` marks an epsilon rule, `<` marks an
// end-of-input rule, and <push-list> is a comma-separated bottom-first
// replacement (`-` for an empty replacement, i.e. a pop).
PdaSpec parse_pda(std::istream& in);
PdaSpec parse_pda_string(const std::string& text);
PdaSpec parse_pda_file(const std::string& path);
void print_pda(std::ostream& out, const PdaSpec& spec);
std::string print_pda_string(const PdaSpec& spec);

// Language translations.
//
// dpda_to_sda2 builds a depth-2 storage machine that keeps the live stack
// content as depth-1 cells: a replacement freezes the old top and rewrites
// the whole replacement over fresh blanks at the right frontier, a pop
// freezes the top in place, and the control rides over frozen cells without
// changing state or moving the input head.  The result is deterministic,
// carries the relaxed write flag, and never moves a head while scanning a
// frozen blank region except to traverse it.
MachineSpec dpda_to_sda2(const PdaSpec& spec);

// sda2_to_dpda inverts the embedding for any depth-2 machine that never moves
// its input head while scanning a frozen blank.  The input machine is first
// rewritten by desensitize() so that traversals of frozen regions neither
// change state nor turn; the resulting storage evolution is stack-like and is
// folded into a deterministic pushdown automaton (frozen-region traversals
// are elided, an eager one-symbol input buffer resolves read-without-consume
// steps).
PdaSpec sda2_to_dpda(const MachineSpec& spec);

}  // namespace storax
