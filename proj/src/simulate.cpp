#include "storax/simulate.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace storax {

bool trace_consistent(const MachineSpec& spec, const Word& x, const Trace& t) {
    if (t.configs.size() != t.rules.size() + 1 || t.configs.empty()) return false;
    for (size_t i = 0; i < t.rules.size(); i++) {
        try {
            if (!(step(spec, x, t.configs[i], t.rules[i]) == t.configs[i + 1])) return false;
        } catch (const std::exception&) {
            return false;
        }
    }
    return true;
}

std::vector<StepAnnotation> annotate(const MachineSpec& spec, const Word& x, const Trace& t) {
    (void)x;
    std::vector<StepAnnotation> out;
    out.reserve(t.rules.size());
    for (size_t i = 0; i < t.rules.size(); i++) {
        const Configuration& c = t.configs[i];
        const Rule& r = t.rules[i];
        StepAnnotation a;
        a.scan = storage_at(c, c.l3);
        a.scanDepth = spec.depth_of(a.scan);
        a.stat = classify_stationary(c.lastMove, r.d3);
        TurnKind tk = classify_turn(c.lastMove, r.d3);
        if (tk == TurnKind::None)
            a.turn = TraceTurn::None;
        else if (a.scan == st_frozen)
            a.turn = TraceTurn::FrozenBlankTurn;
        else
            a.turn = tk == TurnKind::Left ? TraceTurn::Left : TraceTurn::Right;
        out.push_back(a);
    }
    return out;
}

static std::string turn_str(TraceTurn t) {
    switch (t) {
        case TraceTurn::None: return "none";
        case TraceTurn::Left: return "left";
        case TraceTurn::Right: return "right";
        case TraceTurn::FrozenBlankTurn: return "frozen-blank-turn";
    }
    return "?";
}

static std::string stat_str(StationaryKind s) {
    switch (s) {
        case StationaryKind::None: return "none";
        case StationaryKind::Intrinsic: return "intrinsic";
        case StationaryKind::Extrinsic: return "extrinsic";
    }
    return "?";
}

std::string dump_trace(const MachineSpec& spec, const Word& x, const Trace& t) {
    auto ann = annotate(spec, x, t);
    std::ostringstream os;
    for (size_t i = 0; i < t.rules.size(); i++) {
        const Configuration& c = t.configs[i];
        const Rule& r = t.rules[i];
        os << "t=" << i << " q=" << spec.stateNames[c.state] << " l1=" << c.l1
           << " l2=" << c.l2 << " l3=" << c.l3 << " scan=" << spec.storNames[ann[i].scan]
           << " move=(" << r.d1 << "," << r.d2 << "," << r.d3 << ") turn=" << turn_str(ann[i].turn)
           << " stat=" << stat_str(ann[i].stat) << "\n";
    }
    return os.str();
}

SectionTrace sectionize(const Trace& t) {
    SectionTrace s;
    std::vector<int> ns;
    for (size_t i = 0; i < t.rules.size(); i++)
        if (t.rules[i].d3 != 0) ns.push_back((int)i);
    int first = ns.empty() ? (int)t.rules.size() : ns[0];
    s.leadingStationary = first > 0;
    s.configs.push_back(t.configs[first]);
    s.rawIndex.push_back(first);
    for (size_t j = 0; j < ns.size(); j++) {
        int end = j + 1 < ns.size() ? ns[j + 1] : (int)t.rules.size();
        s.configs.push_back(t.configs[end]);
        s.rawIndex.push_back(end);
    }
    return s;
}

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Accept: return "accept";
        case Outcome::Reject: return "reject";
        case Outcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

long long default_step_bound(const MachineSpec& spec, int inputLen) {
    const long long n2 = inputLen + 2;
    const long long q = std::max(1, spec.n_states());
    if (!spec.aux()) return 8LL * spec.k * n2 * q;
    // Work-content count: all work strings over the user alphabet with length <= |x|+2.
    const long long u = (long long)spec.workNames.size() - 2;
    long long contents = 1;  // the empty (all-blank) content
    long long pw = 1;
    const long long cap = 1000000000000LL;
    for (long long len = 1; len <= n2 && u > 0; len++) {
        if (pw > cap / u) {
            contents = cap;
            break;
        }
        pw *= u;
        contents = std::min(cap, contents + pw);
    }
    long long bound = 16LL * n2 * q;
    if (bound > cap / contents) return cap;
    return bound * contents;
}

Verdict run(const MachineSpec& spec, const Word& x, long long stepBound) {
    if (stepBound < 0) stepBound = default_step_bound(spec, (int)x.size());
    Verdict v;
    using Parent = std::pair<Configuration, Rule>;
    std::unordered_map<Configuration, Parent, ConfigurationHash> parent;
    std::unordered_set<Configuration, ConfigurationHash> visited;

    Configuration init = initial_configuration(spec);
    visited.insert(init);

    auto make_witness = [&](const Configuration& acc) {
        Trace t;
        std::vector<Configuration> rev{acc};
        std::vector<Rule> revR;
        Configuration cur = acc;
        while (true) {
            auto it = parent.find(cur);
            if (it == parent.end()) break;
            revR.push_back(it->second.second);
            cur = it->second.first;
            rev.push_back(cur);
        }
        t.configs.assign(rev.rbegin(), rev.rend());
        t.rules.assign(revR.rbegin(), revR.rend());
        return t;
    };

    if (spec.accepting[init.state]) {
        v.outcome = Outcome::Accept;
        v.witness = make_witness(init);
        v.exploredConfigs = 1;
        return v;
    }

    std::vector<Configuration> frontier{init};
    long long t = 0;
    while (t < stepBound && !frontier.empty()) {
        std::vector<Configuration> next;
        for (const Configuration& c : frontier) {
            for (int ri : applicable_rules(spec, x, c)) {
                Configuration child = step(spec, x, c, spec.rules[ri]);
                if (!visited.insert(child).second) continue;
                parent.emplace(child, Parent{c, spec.rules[ri]});
                if (spec.accepting[child.state]) {
                    v.outcome = Outcome::Accept;
                    v.witness = make_witness(child);
                    v.exploredConfigs = (long long)visited.size();
                    return v;
                }
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
        t++;
    }
    v.exploredConfigs = (long long)visited.size();
    bool live = false;
    for (const Configuration& c : frontier)
        if (!spec.halting(c.state) && !applicable_rules(spec, x, c).empty()) live = true;
    v.outcome = live ? Outcome::Inconclusive : Outcome::Reject;
    return v;
}

Verdict run_string(const MachineSpec& spec, const std::string& x, long long stepBound) {
    return run(spec, word_from_string(spec, x), stepBound);
}

PropertyName property_from_name(const std::string& s) {
    if (s == "FBS") return PropertyName::FBS;
    if (s == "WeakDepthSusceptible") return PropertyName::WeakDepthSusceptible;
    if (s == "RightTurnRestricted") return PropertyName::RightTurnRestricted;
    if (s == "NoFrozenBlankTurn") return PropertyName::NoFrozenBlankTurn;
    if (s == "TurnBound") return PropertyName::TurnBound;
    throw std::invalid_argument("unknown property: " + s);
}

std::string property_name(PropertyName p) {
    switch (p) {
        case PropertyName::FBS: return "FBS";
        case PropertyName::WeakDepthSusceptible: return "WeakDepthSusceptible";
        case PropertyName::RightTurnRestricted: return "RightTurnRestricted";
        case PropertyName::NoFrozenBlankTurn: return "NoFrozenBlankTurn";
        case PropertyName::TurnBound: return "TurnBound";
    }
    return "?";
}

namespace {

// Per-path storage-cell counters with undo support.
struct CellCounters {
    std::unordered_map<int, int> rewrites, turns, rightTurns;

    int bump(std::unordered_map<int, int>& m, int cell) { return ++m[cell]; }
    void unbump(std::unordered_map<int, int>& m, int cell) { --m[cell]; }
};

struct StepFacts {
    SymId scan;
    int depth;
    TurnKind turn;
    int cell;
    bool rewrote;
};

StepFacts facts_of(const MachineSpec& spec, const Configuration& c, const Rule& r) {
    StepFacts f;
    f.scan = r.st;
    f.depth = spec.depth_of(r.st);
    f.turn = classify_turn(c.lastMove, r.d3);
    f.cell = c.l3;
    f.rewrote = r.stW != r.st;
    return f;
}

// Checks one step against a property given the counters *after* this step's bumps.
// Returns empty string when fine, a violation description otherwise.
std::string step_violation(const MachineSpec& spec, PropertyName prop, const StepFacts& f,
                           const Rule& r, int kParam, int turnsAtCell, int rightTurnsAtCell) {
    switch (prop) {
        case PropertyName::FBS:
            if (f.scan == st_frozen && (r.d1 != 0 || r.d2 != 0))
                return "input/work head moves while scanning B";
            break;
        case PropertyName::WeakDepthSusceptible:
            if (f.depth == spec.k && (r.d1 != 0 || r.d2 != 0))
                return "input/work head moves while scanning a depth-k symbol";
            if (f.scan == st_frozen && r.to != r.from) return "state changes while scanning B";
            break;
        case PropertyName::NoFrozenBlankTurn:
            if (f.turn != TurnKind::None && f.scan == st_frozen) return "turn on a frozen blank";
            break;
        case PropertyName::RightTurnRestricted:
            if (f.turn == TurnKind::Right && f.cell >= 1 && rightTurnsAtCell > 1)
                return "second right turn at cell " + std::to_string(f.cell);
            break;
        case PropertyName::TurnBound:
            if (f.turn != TurnKind::None && f.cell >= 1 && turnsAtCell > (kParam + 1) / 2)
                return "turn count at cell " + std::to_string(f.cell) + " exceeds " +
                       std::to_string((kParam + 1) / 2);
            break;
    }
    return "";
}

}  // namespace

PropertyReport check_trace(const MachineSpec& spec, const Word& x, const Trace& t,
                           PropertyName prop, int kParam) {
    (void)x;
    if (kParam < 0) kParam = spec.k;
    PropertyReport rep;
    CellCounters cc;
    for (size_t i = 0; i < t.rules.size(); i++) {
        StepFacts f = facts_of(spec, t.configs[i], t.rules[i]);
        int turns = 0, rturns = 0;
        if (f.turn != TurnKind::None) {
            turns = cc.bump(cc.turns, f.cell);
            if (f.turn == TurnKind::Right) rturns = cc.bump(cc.rightTurns, f.cell);
        }
        std::string bad = step_violation(spec, prop, f, t.rules[i], kParam, turns, rturns);
        if (!bad.empty()) {
            rep.pass = false;
            rep.failStep = (int)i;
            rep.detail = bad + " at step " + std::to_string(i);
            return rep;
        }
    }
    return rep;
}

namespace {

struct DfsFrame {
    Configuration cfg;
    Rule via;  // rule that entered this frame (unused at index 0)
    std::vector<int> kids;
    size_t next = 0;
    // undo info for counters bumped by this frame's entry step
    int bumpCell = -1;
    bool bumpedTurn = false, bumpedRight = false, bumpedRewrite = false;
};

// Depth-first walk over every computation path. onStep is called for each edge with the
// counters already bumped; returning a nonempty string aborts with that violation. The
// walk throws ExplosionGuard past pathCap completed paths.
struct PathWalk {
    const MachineSpec& spec;
    const Word& x;
    long long bound, cap;
    long long paths = 0;
    bool truncated = false;
    CellCounters cc;
    std::vector<DfsFrame> stack;

    PathWalk(const MachineSpec& s, const Word& w, long long b, long long c)
        : spec(s), x(w), bound(b), cap(c) {}

    Trace current_trace() const {
        Trace t;
        for (const auto& f : stack) t.configs.push_back(f.cfg);
        for (size_t i = 1; i < stack.size(); i++) t.rules.push_back(stack[i].via);
        return t;
    }

    template <class OnStep>
    bool walk(OnStep onStep, std::string& violation, int& failStep) {
        stack.push_back({initial_configuration(spec), Rule{}, {}, 0});
        stack.back().kids = applicable_rules(spec, x, stack.back().cfg);
        while (!stack.empty()) {
            DfsFrame& f = stack.back();
            bool leaf = spec.halting(f.cfg.state) || f.kids.empty() ||
                        (long long)stack.size() - 1 >= bound;
            if (leaf && f.kids.size() > f.next && (long long)stack.size() - 1 >= bound)
                truncated = true;
            if (leaf || f.next >= f.kids.size()) {
                if (leaf && ++paths > cap)
                    throw ExplosionGuard("path cap exceeded (" + std::to_string(cap) + ")");
                if (f.bumpCell >= 0) {
                    if (f.bumpedTurn) cc.unbump(cc.turns, f.bumpCell);
                    if (f.bumpedRight) cc.unbump(cc.rightTurns, f.bumpCell);
                    if (f.bumpedRewrite) cc.unbump(cc.rewrites, f.bumpCell);
                }
                stack.pop_back();
                continue;
            }
            const Rule& r = spec.rules[f.kids[f.next++]];
            Configuration child = step(spec, x, f.cfg, r);
            StepFacts facts = facts_of(spec, f.cfg, r);
            DfsFrame nf;
            nf.cfg = std::move(child);
            nf.via = r;
            nf.bumpCell = facts.cell;
            int turns = 0, rturns = 0, rewrites = 0;
            if (facts.turn != TurnKind::None) {
                turns = cc.bump(cc.turns, facts.cell);
                nf.bumpedTurn = true;
                if (facts.turn == TurnKind::Right) {
                    rturns = cc.bump(cc.rightTurns, facts.cell);
                    nf.bumpedRight = true;
                }
            }
            if (facts.rewrote) {
                rewrites = cc.bump(cc.rewrites, facts.cell);
                nf.bumpedRewrite = true;
            }
            int atStep = (int)stack.size() - 1;
            std::string bad = onStep(stack.back().cfg, r, facts, turns, rturns, rewrites);
            if (!bad.empty()) {
                stack.push_back(std::move(nf));  // include the violating step in the trace
                violation = bad;
                failStep = atStep;
                return false;
            }
            nf.kids = applicable_rules(spec, x, nf.cfg);
            stack.push_back(std::move(nf));
        }
        return true;
    }
};

}  // namespace

AggregateReport check_property(const MachineSpec& spec, PropertyName prop,
                               const std::vector<Word>& inputs, long long stepBound,
                               long long pathCap, int kParam) {
    if (kParam < 0) kParam = spec.k;
    AggregateReport rep;
    for (const Word& x : inputs) {
        long long bound = stepBound < 0 ? default_step_bound(spec, (int)x.size()) : stepBound;
        PathWalk w(spec, x, bound, pathCap);
        std::string violation;
        int failStep = -1;
        bool ok = w.walk(
            [&](const Configuration&, const Rule& r, const StepFacts& f, int turns, int rturns,
                int) { return step_violation(spec, prop, f, r, kParam, turns, rturns); },
            violation, failStep);
        rep.pathsExplored += w.paths;
        rep.truncated = rep.truncated || w.truncated;
        if (!ok) {
            rep.pass = false;
            rep.haveCounter = true;
            rep.counterInput = x;
            rep.counterTrace = w.current_trace();
            rep.failStep = failStep;
            rep.detail = violation;
            return rep;
        }
    }
    return rep;
}

CellStats cell_stats(const MachineSpec& spec, const std::vector<Word>& inputs,
                     long long stepBound, long long pathCap) {
    CellStats st;
    for (const Word& x : inputs) {
        long long bound = stepBound < 0 ? default_step_bound(spec, (int)x.size()) : stepBound;
        PathWalk w(spec, x, bound, pathCap);
        std::string violation;
        int failStep = -1;
        w.walk(
            [&](const Configuration&, const Rule&, const StepFacts& f, int turns, int rturns,
                int rewrites) {
                if (f.cell >= 1) {
                    st.maxTurns = std::max(st.maxTurns, turns);
                    st.maxRightTurns = std::max(st.maxRightTurns, rturns);
                }
                st.maxRewrites = std::max(st.maxRewrites, rewrites);
                return std::string{};
            },
            violation, failStep);
        st.pathsExplored += w.paths;
        st.truncated = st.truncated || w.truncated;
    }
    return st;
}

std::vector<Word> all_words(const MachineSpec& spec, int maxLen) {
    std::vector<Word> out;
    std::vector<SymId> syms;
    for (SymId s = 2; s < (int)spec.inputNames.size(); s++) syms.push_back(s);
    out.push_back({});
    std::vector<Word> layer{{}};
    for (int len = 1; len <= maxLen; len++) {
        std::vector<Word> next;
        for (const Word& w : layer)
            for (SymId s : syms) {
                Word v = w;
                v.push_back(s);
                next.push_back(std::move(v));
            }
        for (const Word& w : next) out.push_back(w);
        layer = std::move(next);
    }
    return out;
}

std::vector<SampleEntry> language_sample(const MachineSpec& spec, int maxLen,
                                         long long stepBound) {
    std::vector<SampleEntry> out;
    for (const Word& w : all_words(spec, maxLen))
        out.push_back({w, run(spec, w, stepBound).outcome});
    return out;
}

}  // namespace storax
