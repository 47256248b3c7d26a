#pragma once

#include "storax/circuit.hpp"
#include "storax/machine.hpp"
#include "storax/pda.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace storax {

// --- k-XOR -------------------------------------------------------------------
//
// An instance is rendered as e#a1#...#an where e and every block a_i are bit
// strings of length n.  It is positive iff some strictly increasing index
// series i1 < ... < ik makes e equal the chain
//     (a_{i1})^R xor a_{i2} xor (a_{i3})^R xor a_{i4} xor ...
// where the blocks at odd chain positions enter reversed (so the last block is
// reversed exactly when k is odd).

struct KxorInstance {
    std::string e;
    std::vector<std::string> blocks;  // each the same length as e
    int k = 1;
};

std::string kxor_render(const KxorInstance& inst);
bool kxor_valid(const KxorInstance& inst);

// Brute force over index combinations, folding the chain left to right.
bool kxor_oracle(const KxorInstance& inst);
// Independent enumerator: recursive index chooser that accumulates the chain
// and compares at depth k.  Used to cross-check kxor_oracle.
bool kxor_oracle_alt(const KxorInstance& inst);

// Every instance with |e| = n and the given k (all bit choices of e and the n
// blocks), in lexicographic order.
std::vector<KxorInstance> kxor_all_instances(int n, int k);

// (k+1)-sna deciding the k-XOR problem on well-formed instances: it copies e
// into cells 1..n, then repeatedly either skips a block (input runs over it
// while the storage head stays parked on a bounce cell) or folds a block into
// the e-block, bouncing between the left endmarker and the boundary cell n+1;
// odd folds run leftward (which realizes the reversal), even folds rightward,
// and the k-th fold doubles as the 0^n check.  See docs/kxor-machine.md for
// the move-by-move account.
MachineSpec make_kxor_machine(int k);

// --- Sample machines -----------------------------------------------------------

// 2-sda for { a^n b^n : n >= 0 }.
MachineSpec make_anbn_sda2();
// 4-sda for { a^n b^n c^{2n} : n >= 1 }.
MachineSpec make_labc_machine();
// 5-sda for { a, aaa, aaaaa } that makes two right turns on storage cell 1:
// a deliberate RightTurnRestricted violator used to exercise the
// right-turn-restriction transform.
MachineSpec make_rtr_demo();
// Deterministic pushdown acceptor for the bracket language.
PdaSpec make_dyck_dpda();

// aux-2-sna for { x in {a,b}* : x contains an a }; one storage excursion.
MachineSpec make_contains_a_aux();
// aux-4-sna for the palindromes over {a,b}; accepting runs exist that cross
// each interior cell twice, so its computation graph carries length-2 visit
// chains.
MachineSpec make_palindrome_aux();

// Machines whose rules never touch the frozen blank (so the desensitizing
// transform applies to them).
std::vector<MachineSpec> fbs_machines();
// Machines all of whose computation paths avoid frozen-blank turns (the
// turn-count bound is checked on exactly these).
std::vector<MachineSpec> nfbt_machines();

// Direct membership predicates for the sample languages.
bool anbn_member(const std::string& w);
bool labc_member(const std::string& w);
bool dyck_member(const std::string& w);
bool rtr_demo_member(const std::string& w);
bool contains_a_member(const std::string& w);
bool palindrome_member(const std::string& w);

// --- Reference circuits ----------------------------------------------------------

// A single cascading block of link length 3 (five bottom AndOmega gates, two
// middle ones, one top) embedded under an output Or gate.
Circuit make_fig4_block_circuit();
// A 2-cascading circuit with basis {1,2,5}, semi-circuits rooted at gates 2
// and 5, and five declared blocks; it fails validation at k = 1.
Circuit make_fig5_circuit();

// --- Random circuits and planted faults -----------------------------------------

struct CircuitGenParams {
    int nVars = 4;
    int k = 2;          // cascading-length budget the output satisfies
    int maxSemis = 2;   // semi-circuit count is drawn from 1..maxSemis
    int maxExtraLeaves = 2;
    bool chainOnly = false;  // force every semi to carry a length-2 chain
};

// Deterministic in (params, seed); the result passes
// validate_cascading_circuit(c, params.k, 2).
Circuit random_cascading_circuit(const CircuitGenParams& params, std::uint64_t seed);

struct PlantedFault {
    Circuit circuit;
    std::string code;  // violation code the validator must report
};

inline constexpr int mutation_kind_count = 17;

// Applies one structural fault to a generated circuit (kinds 0..16, each
// yielding a distinct violation code).  The base must come from
// random_cascading_circuit with chainOnly = true and maxSemis >= 2.
PlantedFault mutate_circuit(const Circuit& base, int kind);

}  // namespace storax
