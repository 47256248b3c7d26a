#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "storax/machine.hpp"  // ParseError

namespace storax {

// --- Gates and circuits -----------------------------------------------------
//
// Layer numbering: the output gate sits on layer 1 and layers grow toward the
// inputs; every wire runs from a strictly smaller layer (the consumer) to a
// strictly larger one (the producer), but may skip layers.  Negations appear
// only as NegInput leaves.  CAnd/COr are the linking gates of cascading
// blocks: they behave like And/Or under evaluation and encoding.

enum class GateKind { Input, NegInput, And, AndOmega, Or, CAnd, COr };

std::string gate_kind_name(GateKind k);
GateKind gate_kind_from_name(const std::string& s);  // throws CircuitError

inline bool kind_is_leaf(GateKind k) {
    return k == GateKind::Input || k == GateKind::NegInput;
}
inline bool kind_is_and_class(GateKind k) {
    return k == GateKind::And || k == GateKind::CAnd;
}
inline bool kind_is_or_class(GateKind k) {
    return k == GateKind::Or || k == GateKind::COr;
}
inline bool kind_conjunctive(GateKind k) {
    return kind_is_and_class(k) || k == GateKind::AndOmega;
}

struct Gate {
    int id = 0;
    int layer = 1;
    int index = 1;  // 1-based left-to-right position within the layer
    GateKind kind = GateKind::Or;
    std::vector<int> inputs;  // producer gate ids, ordered
    int var = 0;              // 1-based input-variable index (leaves only)

    bool operator==(const Gate&) const = default;
};

// A cascading block is declared (never inferred): `members` lists the
// AndOmega gates of the chain together with their linking CAnd/COr gates.
// The remaining fields are derived by analyze_block.
struct CascadingBlock {
    std::vector<int> members;
    int topGate = -1;
    std::vector<int> bottomGates;
    int blockTopLayer = 0;
    int blockBottomLayer = 0;

    bool operator==(const CascadingBlock&) const = default;
};

struct Circuit {
    int nVars = 0;
    int output = -1;
    int andOmegaCap = 3;  // maximum AndOmega fan-in
    std::map<int, Gate> gates;
    std::vector<CascadingBlock> blocks;

    bool has_gate(int id) const { return gates.count(id) != 0; }
    const Gate& gate(int id) const;  // throws CircuitError when absent
    Gate& gate(int id);
    int add_gate(Gate g);  // id must be fresh

    // consumer ids per gate (one entry per wire, so duplicates possible)
    std::map<int, std::vector<int>> consumers() const;
    int max_layer() const;
    // gates per layer, sorted by index; element 0 is unused
    std::vector<std::vector<int>> layers() const;
};

struct CircuitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ArityMismatch : CircuitError {
    using CircuitError::CircuitError;
};
struct WrongKind : CircuitError {
    using CircuitError::CircuitError;
};

// --- Validation reports ------------------------------------------------------
//
// Violation codes:
//   G*          structural circuit invariants (arity, fan-out, layering,
//               per-layer index permutations, reachability)
//   B1..B7      cascading-block conditions (validate_block and the
//               per-fragment block checks)
//   S1..S10     cascading-semi-circuit conditions (per decisive fragment)
//   C1..C5      whole-circuit decomposition checks (stray link gates,
//               semi-circuit disjointness, block placement, cascading-length
//               bound, consecutive-And bound)

struct CircuitCheck {
    std::string code;
    std::string detail;
    int fragment = -1;  // fragment ordinal when fragment-scoped
};

struct CircuitReport {
    std::vector<CircuitCheck> violations;
    std::vector<std::string> flags;  // non-fatal interpretation notes
    bool complete = true;            // false when the fragment cap was hit
    std::map<int, int> blockMaxLen;  // block index -> max cascading length
                                     // over the enumerated fragments

    bool ok() const { return violations.empty(); }
    bool has(const std::string& code) const;
    std::string summary() const;
};

// Structural invariants (G codes).
CircuitReport circuit_issues(const Circuit& c);

// --- Evaluation and metrics --------------------------------------------------

// Layer-order evaluation. And/CAnd/AndOmega are true iff all inputs are true,
// Or/COr iff some input is; Input yields bits[var-1], NegInput the complement.
// Throws ArityMismatch when |bits| != nVars or a gate's arity is malformed.
bool evaluate(const Circuit& c, const std::vector<bool>& bits);

// Maximum number of kind-class switches (And-class / AndOmega / Or-class) on
// any root-to-leaf path.  With ignoreAndOmega, AndOmega gates are transparent.
int alternation(const Circuit& c, bool ignoreAndOmega = false);

// Gates plus wires.
long long circuit_size(const Circuit& c);

// Count of non-leaf direct inputs.  The public operation is specified for
// AndOmega gates and throws WrongKind otherwise.
int leafless_fanin(const Circuit& c, int gateId);

// --- Encoding ----------------------------------------------------------------
//
// encode emits, per gate g with children h_1..h_m, the records
// num(g) '$' num(h_i) '$' sigma '#', with sigma 0 for Or/COr, 1 for And/CAnd,
// 2 for AndOmega; leaves emit one record whose child field holds the variable
// index and whose sigma is 3 (Input) or 4 (NegInput).  ids render as decimal
// digit strings by default, binary behind the flag.  decode rebuilds the
// connectivity with CAnd/COr folded into And/Or, recomputed layers/indices,
// and no blocks.

enum class EncodeBase { Decimal, Binary };

std::string encode_circuit(const Circuit& c, EncodeBase base = EncodeBase::Decimal);
Circuit decode_circuit(const std::string& text, EncodeBase base = EncodeBase::Decimal);

// --- Cascading blocks ----------------------------------------------------------

// Fills the derived fields (topGate, bottomGates, layer span) of a block whose
// members all exist.  The top gate is the member AndOmega feeding no member
// CAnd; bottom gates are the member AndOmegas on the deepest member layer.
CascadingBlock analyze_block(const Circuit& c, const CascadingBlock& d);

// Static block conditions B1..B7, in relative layers (top AndOmega at
// relative layer 2; member AndOmegas on 3i+2, COr on 3i+3, CAnd on 3i+4).
CircuitReport validate_block(const Circuit& c, const CascadingBlock& d);

// Max count of member AndOmega gates on any directed path through the block.
int link_length(const Circuit& c, const CascadingBlock& d);

// 1 + sum of leafless fan-ins over the non-top member AndOmega gates.
int cascading_length(const Circuit& c, const CascadingBlock& d);

// --- Decisive fragments --------------------------------------------------------
//
// A decisive fragment fixes exactly one child per reachable Or/COr gate and
// keeps every child of the other gates.

struct Fragment {
    std::map<int, int> choice;  // Or/COr gate id -> chosen child id
    std::set<int> gates;        // retained gate ids
};

inline constexpr std::size_t default_fragment_cap = 4096;

// Enumerates fragments of the subcircuit rooted at `root`, deterministically.
// Stops at `cap` fragments; *capped reports whether enumeration was cut.
std::vector<Fragment> decisive_fragments(const Circuit& c, int root,
                                         std::size_t cap = default_fragment_cap,
                                         bool* capped = nullptr);

// Materializes a fragment as a circuit (gates restricted, Or/COr fan-in 1;
// layers and indices are inherited, so per-layer indices are generally no
// longer contiguous — fragment circuits are for inspection only).
Circuit fragment_circuit(const Circuit& c, int root, const Fragment& f);

// --- Semi-circuit and whole-circuit validation ---------------------------------

// Checks conditions S1..S10 on every decisive fragment of the subcircuit at
// `root` (see README for the exact statement of each condition), plus the
// per-fragment block shape checks (B codes).  Incomplete when the fragment
// cap is hit.
CircuitReport validate_semi_circuit(const Circuit& c, int root,
                                    std::size_t fragmentCap = default_fragment_cap);

// Full check: structural invariants, decomposition into an And/Or basis whose
// leaves root disjoint cascading semi-circuits, per-semi validation, every
// block's cascading length <= k on every fragment, and no more than ellAnd
// consecutive And/CAnd gates on any root-to-leaf path.
CircuitReport validate_cascading_circuit(const Circuit& c, int k, int ellAnd,
                                         std::size_t fragmentCap = default_fragment_cap);

// Semi-circuit roots used by the decomposition: the most common ancestor (in
// the unlinked tree) of each declared block's members, plus maximal AndOmega
// gates outside blocks, merged to maximal subtrees.
std::vector<int> semi_circuit_roots(const Circuit& c);

// --- Files ----------------------------------------------------------------------
//
// Line-oriented format:
//   circuit nvars=<n> output=<id> [cap=<c>]
//   gate <id> <layer> <index> <KIND> [var=<j>] [in=<id>,<id>,...]
//   block top=<id> members=<id>,<id>,...
// KIND is one of INPUT NEGINPUT AND ANDW OR CAND COR; '#' starts a comment.

Circuit parse_circuit(std::istream& is);
Circuit parse_circuit_string(const std::string& text);
Circuit parse_circuit_file(const std::string& path);
std::string print_circuit(const Circuit& c);

}  // namespace storax
