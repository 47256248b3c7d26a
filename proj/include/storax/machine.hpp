#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace storax {

using StateId = int;
using SymId = int;

enum class MachineKind { Sda, Sna, AuxSda, AuxSna };

bool kind_is_aux(MachineKind k);
bool kind_is_deterministic(MachineKind k);
std::string kind_name(MachineKind k);
MachineKind kind_from_name(const std::string& s);

// Reserved symbol ids.
// Input tape: 0 = left endmarker '>', 1 = right endmarker '<', user symbols from 2.
inline constexpr SymId in_lend = 0;
inline constexpr SymId in_rend = 1;
// Storage tape: 0 = left endmarker '>' (depth k), 1 = initial blank '_' (depth 0),
// 2 = frozen blank 'B' (depth k), user symbols from 3 with depths in [1, k-1].
inline constexpr SymId st_lend = 0;
inline constexpr SymId st_blank = 1;
inline constexpr SymId st_frozen = 2;
// Work tape: 0 = left endmarker '>', 1 = blank '_', user symbols from 2.
inline constexpr SymId wk_lend = 0;
inline constexpr SymId wk_blank = 1;

struct Rule {
    StateId from = 0;
    SymId in = 0;
    SymId wk = wk_lend;
    SymId st = 0;
    StateId to = 0;
    SymId wkW = wk_lend;
    SymId stW = 0;
    int d1 = 0, d2 = 0, d3 = 0;

    bool operator==(const Rule&) const = default;
};

struct MachineSpec {
    MachineKind kind = MachineKind::Sna;
    int k = 2;
    // Loosened write discipline used by transform outputs: stationary moves may keep or
    // deepen, moving rewrites may overshoot their mandate up to depth k, and all-stationary
    // steps (state-only) are permitted.
    bool relaxed = false;
    std::string name;

    std::vector<std::string> stateNames;
    StateId initial = 0;
    std::vector<char> accepting;
    std::vector<char> rejecting;

    std::vector<std::string> inputNames;  // ids 0,1 reserved
    std::vector<std::string> storNames;   // ids 0,1,2 reserved
    std::vector<int> storDepth;           // per storage symbol
    std::vector<std::string> workNames;   // ids 0,1 reserved

    std::vector<Rule> rules;

    MachineSpec();
    explicit MachineSpec(MachineKind kind, int k, std::string name = "");

    bool aux() const { return kind_is_aux(kind); }
    bool deterministic() const { return kind_is_deterministic(kind); }
    int n_states() const { return (int)stateNames.size(); }

    StateId add_state(const std::string& name, bool acc = false, bool rej = false);
    SymId add_input(const std::string& name);
    SymId add_stor(const std::string& name, int depth);
    SymId add_work(const std::string& name);

    StateId state_id(const std::string& name) const;    // -1 if absent
    SymId input_id(const std::string& name) const;      // -1 if absent
    SymId stor_id(const std::string& name) const;
    SymId work_id(const std::string& name) const;

    bool halting(StateId q) const { return accepting[q] || rejecting[q]; }
    int depth_of(SymId st) const { return storDepth[st]; }
};

// Last non-trivial fact about how the storage head reached its current cell.
enum class LastMove { Stationary, FromLeft, FromRight };

struct Configuration {
    StateId state = 0;
    int l1 = 0, l2 = 0, l3 = 0;
    std::vector<SymId> work;     // work[0] == wk_lend; trailing blanks trimmed
    std::vector<SymId> storage;  // storage[0] == st_lend; trailing blanks trimmed
    LastMove lastMove = LastMove::Stationary;

    bool operator==(const Configuration&) const = default;
};

struct ConfigurationHash {
    size_t operator()(const Configuration& c) const;
};

Configuration initial_configuration(const MachineSpec& spec);

// Word = user input symbols only (no endmarkers).
using Word = std::vector<SymId>;

Word word_from_string(const MachineSpec& spec, const std::string& s);
std::string word_to_string(const MachineSpec& spec, const Word& w);

SymId input_at(const Word& x, int l1);                      // includes endmarkers
SymId work_at(const Configuration& c, int pos);             // blank beyond end
SymId storage_at(const Configuration& c, int pos);          // blank beyond end

enum class StepErrorKind { DepthViolation, FrozenWrite, MalformedMove };

struct StepError : std::runtime_error {
    StepErrorKind kind;
    StepError(StepErrorKind k, const std::string& what);
};

enum class TurnKind { None, Left, Right };

TurnKind classify_turn(LastMove lm, int d3);

enum class StationaryKind { None, Intrinsic, Extrinsic };

StationaryKind classify_stationary(LastMove lm, int d3);

// Exact depth a strict moving write must produce over a depth-e cell (e < k).
int mandated_depth(int e, int k, TurnKind turn);

// Applies one transition. The rule must match the configuration's scanned symbols and the
// configuration must be non-halting (logic_error otherwise). Violations of the depth-k
// write discipline, frozen/endmarker rewrites, and illegal head moves throw StepError.
Configuration step(const MachineSpec& spec, const Word& x, const Configuration& cfg,
                   const Rule& rule);

// All configurations reachable by one legal transition; rules failing a dynamic check are
// simply not applicable. Deduplicated, in rule order.
std::vector<Configuration> successors(const MachineSpec& spec, const Word& x,
                                      const Configuration& cfg);

// Rules matching the scanned symbols that also pass the dynamic checks.
std::vector<int> applicable_rules(const MachineSpec& spec, const Word& x,
                                  const Configuration& cfg);

struct SurfaceConfiguration {
    StateId state = 0;
    int l1 = 0, l2 = 0, l3 = 0;
    std::vector<SymId> work;
    SymId scan = st_lend;

    bool operator==(const SurfaceConfiguration&) const = default;
    auto operator<=>(const SurfaceConfiguration&) const = default;
};

SurfaceConfiguration surface_of(const Configuration& c);
inline int head3(const SurfaceConfiguration& s) { return s.l3; }

struct ValidationIssue {
    std::string what;
    int ruleIndex = -1;  // -1 when not tied to a rule
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

ValidationReport validate_machine(const MachineSpec& spec);

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line, const std::string& what);
};

MachineSpec parse_machine(std::istream& is);
MachineSpec parse_machine_file(const std::string& path);
MachineSpec parse_machine_string(const std::string& text);
std::string print_machine(const MachineSpec& spec);

}  // namespace storax
