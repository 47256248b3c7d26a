#pragma once

#include "storax/machine.hpp"

#include <optional>

namespace storax {

// A computation path: configs[0] is the start, rules[i] carries configs[i] to configs[i+1].
struct Trace {
    std::vector<Configuration> configs;
    std::vector<Rule> rules;

    int length() const { return (int)rules.size(); }
    const Configuration& last() const { return configs.back(); }
};

bool trace_consistent(const MachineSpec& spec, const Word& x, const Trace& t);

enum class TraceTurn { None, Left, Right, FrozenBlankTurn };

struct StepAnnotation {
    TraceTurn turn = TraceTurn::None;
    StationaryKind stat = StationaryKind::None;
    SymId scan = st_lend;
    int scanDepth = 0;
};

std::vector<StepAnnotation> annotate(const MachineSpec& spec, const Word& x, const Trace& t);
std::string dump_trace(const MachineSpec& spec, const Word& x, const Trace& t);

// Raw trace with every maximal run of storage-stationary steps merged into the preceding
// storage move. configs[0] absorbs a leading stationary run if there is one.
struct SectionTrace {
    std::vector<Configuration> configs;
    std::vector<int> rawIndex;  // index into the raw trace's configs, per section config
    bool leadingStationary = false;
};

SectionTrace sectionize(const Trace& t);

enum class Outcome { Accept, Reject, Inconclusive };

std::string outcome_name(Outcome o);

struct Verdict {
    Outcome outcome = Outcome::Reject;
    std::optional<Trace> witness;  // present on Accept
    long long exploredConfigs = 0;
};

long long default_step_bound(const MachineSpec& spec, int inputLen);

// Memoized breadth-first exploration of the computation graph. Accept iff an accepting
// configuration is reachable within stepBound steps; Reject iff the reachable graph is
// exhausted without one; Inconclusive iff the bound cut a live path. stepBound < 0 uses
// the default bound.
Verdict run(const MachineSpec& spec, const Word& x, long long stepBound = -1);
Verdict run_string(const MachineSpec& spec, const std::string& x, long long stepBound = -1);

enum class PropertyName {
    FBS,
    WeakDepthSusceptible,
    RightTurnRestricted,
    NoFrozenBlankTurn,
    TurnBound,
};

PropertyName property_from_name(const std::string& s);
std::string property_name(PropertyName p);

struct PropertyReport {
    bool pass = true;
    int failStep = -1;
    std::string detail;
};

PropertyReport check_trace(const MachineSpec& spec, const Word& x, const Trace& t,
                           PropertyName prop, int kParam = -1);

struct ExplosionGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AggregateReport {
    bool pass = true;
    bool haveCounter = false;
    Word counterInput;
    Trace counterTrace;
    int failStep = -1;
    std::string detail;
    long long pathsExplored = 0;
    bool truncated = false;  // some path was cut by the step bound
};

inline constexpr long long default_path_cap = 1000000;

// Checks the property on every computation path (within stepBound) of every input.
AggregateReport check_property(const MachineSpec& spec, PropertyName prop,
                               const std::vector<Word>& inputs, long long stepBound = -1,
                               long long pathCap = default_path_cap, int kParam = -1);

// All words over the user input alphabet, lengths 0..maxLen, in length-then-id order.
std::vector<Word> all_words(const MachineSpec& spec, int maxLen);

struct SampleEntry {
    Word word;
    Outcome outcome;
};

std::vector<SampleEntry> language_sample(const MachineSpec& spec, int maxLen,
                                         long long stepBound = -1);

// Largest per-cell statistics over every path of every input: rewrites per storage cell
// and turns per storage cell (cells >= 1). Used by resource-bound checks.
struct CellStats {
    int maxRewrites = 0;
    int maxTurns = 0;
    int maxRightTurns = 0;
    long long pathsExplored = 0;
    bool truncated = false;
};

CellStats cell_stats(const MachineSpec& spec, const std::vector<Word>& inputs,
                     long long stepBound = -1, long long pathCap = default_path_cap);

}  // namespace storax
