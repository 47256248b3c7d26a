#include "storax/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace storax {

namespace {

const GateKind all_kinds[] = {GateKind::Input, GateKind::NegInput, GateKind::And,
                              GateKind::AndOmega, GateKind::Or,    GateKind::CAnd,
                              GateKind::COr};

bool kind_is_link(GateKind k) { return k == GateKind::CAnd || k == GateKind::COr; }

int lf_any(const Circuit& c, const Gate& g) {
    int n = 0;
    for (int h : g.inputs)
        if (!kind_is_leaf(c.gate(h).kind)) ++n;
    return n;
}

std::string describe(const Circuit& c, int id) {
    const Gate& g = c.gate(id);
    std::ostringstream os;
    os << "gate " << id << " (" << gate_kind_name(g.kind) << " layer " << g.layer
       << " index " << g.index << ")";
    return os.str();
}

}  // namespace

std::string gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Input: return "INPUT";
        case GateKind::NegInput: return "NEGINPUT";
        case GateKind::And: return "AND";
        case GateKind::AndOmega: return "ANDW";
        case GateKind::Or: return "OR";
        case GateKind::CAnd: return "CAND";
        case GateKind::COr: return "COR";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string& s) {
    for (GateKind k : all_kinds)
        if (gate_kind_name(k) == s) return k;
    throw CircuitError("unknown gate kind: " + s);
}

const Gate& Circuit::gate(int id) const {
    auto it = gates.find(id);
    if (it == gates.end()) throw CircuitError("no gate with id " + std::to_string(id));
    return it->second;
}

Gate& Circuit::gate(int id) {
    auto it = gates.find(id);
    if (it == gates.end()) throw CircuitError("no gate with id " + std::to_string(id));
    return it->second;
}

int Circuit::add_gate(Gate g) {
    if (gates.count(g.id)) throw CircuitError("duplicate gate id " + std::to_string(g.id));
    int id = g.id;
    gates.emplace(id, std::move(g));
    return id;
}

std::map<int, std::vector<int>> Circuit::consumers() const {
    std::map<int, std::vector<int>> out;
    for (const auto& [id, g] : gates) {
        out.try_emplace(id);
        for (int h : g.inputs) out[h].push_back(id);
    }
    return out;
}

int Circuit::max_layer() const {
    int m = 0;
    for (const auto& [id, g] : gates) m = std::max(m, g.layer);
    return m;
}

std::vector<std::vector<int>> Circuit::layers() const {
    std::vector<std::vector<int>> out(max_layer() + 1);
    for (const auto& [id, g] : gates)
        if (g.layer >= 1 && g.layer < (int)out.size()) out[g.layer].push_back(id);
    for (auto& layer : out)
        std::sort(layer.begin(), layer.end(),
                  [&](int a, int b) { return gate(a).index < gate(b).index; });
    return out;
}

bool CircuitReport::has(const std::string& code) const {
    for (const auto& v : violations)
        if (v.code == code) return true;
    return false;
}

std::string CircuitReport::summary() const {
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.code;
        if (v.fragment >= 0) os << "[frag " << v.fragment << "]";
        os << ": " << v.detail << "\n";
    }
    for (const auto& f : flags) os << "flag: " << f << "\n";
    if (!complete) os << "(incomplete: fragment cap hit)\n";
    return os.str();
}

// --- structural validation ---------------------------------------------------

CircuitReport circuit_issues(const Circuit& c) {
    CircuitReport rep;
    auto bad = [&](const std::string& code, const std::string& detail) {
        rep.violations.push_back({code, detail, -1});
    };

    if (!c.has_gate(c.output)) {
        bad("G-output", "output gate " + std::to_string(c.output) + " does not exist");
        return rep;
    }
    if (c.gate(c.output).layer != 1)
        bad("G-output", "output gate must sit on layer 1");

    for (const auto& [id, g] : c.gates) {
        if (g.id != id) bad("G-id", "gate key/id mismatch at " + std::to_string(id));
        if (g.layer < 1) bad("G-layer", describe(c, id) + ": layer must be >= 1");
        if (g.index < 1) bad("G-index", describe(c, id) + ": index must be >= 1");
        std::set<int> seen;
        for (int h : g.inputs) {
            if (!c.has_gate(h)) {
                bad("G-wire", describe(c, id) + " consumes missing gate " + std::to_string(h));
                continue;
            }
            if (!seen.insert(h).second)
                bad("G-wire", describe(c, id) + " lists gate " + std::to_string(h) + " twice");
            if (c.gate(h).layer <= g.layer)
                bad("G-wire", describe(c, id) + " takes input from gate " + std::to_string(h) +
                                  " on a non-deeper layer");
        }
        int arity = (int)g.inputs.size();
        switch (g.kind) {
            case GateKind::Input:
            case GateKind::NegInput:
                if (arity != 0) bad("G-arity", describe(c, id) + ": leaves take no inputs");
                if (g.var < 1 || g.var > c.nVars)
                    bad("G-var", describe(c, id) + ": var " + std::to_string(g.var) +
                                     " outside 1.." + std::to_string(c.nVars));
                break;
            case GateKind::And:
            case GateKind::CAnd:
                if (arity != 2) bad("G-arity", describe(c, id) + ": fan-in must be 2");
                break;
            case GateKind::Or:
            case GateKind::COr:
                if (arity < 1) bad("G-arity", describe(c, id) + ": fan-in must be >= 1");
                break;
            case GateKind::AndOmega:
                if (arity < 1 || arity > c.andOmegaCap)
                    bad("G-arity", describe(c, id) + ": fan-in must be in 1.." +
                                       std::to_string(c.andOmegaCap));
                break;
        }
    }
    if (!rep.ok()) return rep;  // fan-out analysis needs sane wires

    auto cons = c.consumers();
    for (const auto& [id, g] : c.gates) {
        int fanout = (int)cons[id].size();
        if (id == c.output) {
            if (fanout != 0) bad("G-fanout", describe(c, id) + ": output gate must have fan-out 0");
            continue;
        }
        if (fanout == 0) bad("G-fanout", describe(c, id) + ": unreachable (fan-out 0)");
        if ((kind_is_and_class(g.kind) || kind_is_or_class(g.kind)) && fanout > 1)
            bad("G-fanout", describe(c, id) + ": fan-out must be 1");
        if (g.kind == GateKind::AndOmega) {
            int nonLink = 0;
            for (int h : cons[id])
                if (!kind_is_link(c.gate(h).kind)) ++nonLink;
            if (nonLink > 1)
                bad("G-fanout", describe(c, id) + ": more than one non-CAnd consumer");
        }
    }

    std::map<int, std::vector<int>> idxByLayer;
    for (const auto& [id, g] : c.gates) idxByLayer[g.layer].push_back(g.index);
    for (auto& [layer, idx] : idxByLayer) {
        std::sort(idx.begin(), idx.end());
        for (int i = 0; i < (int)idx.size(); ++i)
            if (idx[i] != i + 1) {
                bad("G-index", "layer " + std::to_string(layer) +
                                   ": indices are not a permutation of 1.." +
                                   std::to_string(idx.size()));
                break;
            }
    }

    std::map<int, int> memberOf;
    for (int bi = 0; bi < (int)c.blocks.size(); ++bi) {
        std::set<int> seen;
        for (int m : c.blocks[bi].members) {
            if (!c.has_gate(m)) {
                bad("G-block", "block " + std::to_string(bi) + " lists missing gate " +
                                   std::to_string(m));
                continue;
            }
            if (!seen.insert(m).second)
                bad("G-block", "block " + std::to_string(bi) + " lists gate " +
                                   std::to_string(m) + " twice");
            GateKind mk = c.gate(m).kind;
            if (mk != GateKind::AndOmega && mk != GateKind::CAnd && mk != GateKind::COr)
                bad("G-block", "block " + std::to_string(bi) + " member " + describe(c, m) +
                                   " is not an AndOmega/CAnd/COr gate");
            auto [it, fresh] = memberOf.emplace(m, bi);
            if (!fresh && it->second != bi)
                bad("G-block", "gate " + std::to_string(m) + " belongs to two blocks");
        }
    }
    return rep;
}

// --- evaluation ----------------------------------------------------------------

bool evaluate(const Circuit& c, const std::vector<bool>& bits) {
    if ((int)bits.size() != c.nVars)
        throw ArityMismatch("evaluate: got " + std::to_string(bits.size()) +
                            " bits for nVars=" + std::to_string(c.nVars));
    auto byLayer = c.layers();
    std::map<int, bool> value;
    for (int layer = (int)byLayer.size() - 1; layer >= 1; --layer) {
        for (int id : byLayer[layer]) {
            const Gate& g = c.gate(id);
            switch (g.kind) {
                case GateKind::Input:
                case GateKind::NegInput: {
                    if (g.var < 1 || g.var > c.nVars)
                        throw ArityMismatch("evaluate: leaf var out of range at gate " +
                                            std::to_string(id));
                    bool b = bits[g.var - 1];
                    value[id] = (g.kind == GateKind::Input) ? b : !b;
                    break;
                }
                case GateKind::And:
                case GateKind::CAnd:
                    if (g.inputs.size() != 2)
                        throw ArityMismatch("evaluate: And-kind gate " + std::to_string(id) +
                                            " needs fan-in 2");
                    [[fallthrough]];
                case GateKind::AndOmega: {
                    if (g.inputs.empty())
                        throw ArityMismatch("evaluate: empty conjunction at gate " +
                                            std::to_string(id));
                    bool b = true;
                    for (int h : g.inputs) b = b && value.at(h);
                    value[id] = b;
                    break;
                }
                case GateKind::Or:
                case GateKind::COr: {
                    if (g.inputs.empty())
                        throw ArityMismatch("evaluate: empty disjunction at gate " +
                                            std::to_string(id));
                    bool b = false;
                    for (int h : g.inputs) b = b || value.at(h);
                    value[id] = b;
                    break;
                }
            }
        }
    }
    return value.at(c.output);
}

int alternation(const Circuit& c, bool ignoreAndOmega) {
    // classes: 0 none, 1 And-class, 2 AndOmega, 3 Or-class
    auto cls = [&](GateKind k) -> int {
        if (kind_is_and_class(k)) return 1;
        if (k == GateKind::AndOmega) return ignoreAndOmega ? 0 : 2;
        if (kind_is_or_class(k)) return 3;
        return 0;
    };
    std::unordered_map<long long, int> memo;
    std::function<int(int, int)> rec = [&](int id, int last) -> int {
        const Gate& g = c.gate(id);
        if (kind_is_leaf(g.kind)) return 0;
        long long key = (long long)id * 4 + last;
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int myCls = cls(g.kind);
        int best = 0;
        int next = myCls == 0 ? last : myCls;
        for (int h : g.inputs) best = std::max(best, rec(h, next));
        if (myCls != 0 && last != 0 && last != myCls) best += 1;
        memo[key] = best;
        return best;
    };
    if (!c.has_gate(c.output)) return 0;
    return rec(c.output, 0);
}

long long circuit_size(const Circuit& c) {
    long long wires = 0;
    for (const auto& [id, g] : c.gates) wires += (long long)g.inputs.size();
    return (long long)c.gates.size() + wires;
}

int leafless_fanin(const Circuit& c, int gateId) {
    const Gate& g = c.gate(gateId);
    if (g.kind != GateKind::AndOmega)
        throw WrongKind("leafless_fanin: gate " + std::to_string(gateId) + " is not AndOmega");
    return lf_any(c, g);
}

// --- encoding --------------------------------------------------------------------

namespace {

std::string num_str(int v, EncodeBase base) {
    if (base == EncodeBase::Decimal) return std::to_string(v);
    if (v == 0) return "0";
    std::string s;
    for (int x = v; x > 0; x >>= 1) s.push_back(char('0' + (x & 1)));
    std::reverse(s.begin(), s.end());
    return s;
}

int num_parse(const std::string& s, EncodeBase base) {
    if (s.empty()) throw CircuitError("decode: empty number field");
    long long v = 0;
    for (char ch : s) {
        int d = ch - '0';
        int radix = base == EncodeBase::Decimal ? 10 : 2;
        if (d < 0 || d >= radix)
            throw CircuitError(std::string("decode: bad digit '") + ch + "'");
        v = v * radix + d;
        if (v > 1000000000) throw CircuitError("decode: number too large");
    }
    return (int)v;
}

char sigma_of(GateKind k) {
    switch (k) {
        case GateKind::Or:
        case GateKind::COr: return '0';
        case GateKind::And:
        case GateKind::CAnd: return '1';
        case GateKind::AndOmega: return '2';
        case GateKind::Input: return '3';
        case GateKind::NegInput: return '4';
    }
    return '?';
}

}  // namespace

std::string encode_circuit(const Circuit& c, EncodeBase base) {
    std::ostringstream os;
    for (const auto& [id, g] : c.gates) {
        char sigma = sigma_of(g.kind);
        if (kind_is_leaf(g.kind)) {
            os << num_str(id, base) << '$' << num_str(g.var, base) << '$' << sigma << '#';
            continue;
        }
        for (int h : g.inputs)
            os << num_str(id, base) << '$' << num_str(h, base) << '$' << sigma << '#';
    }
    return os.str();
}

Circuit decode_circuit(const std::string& text, EncodeBase base) {
    Circuit c;
    struct Raw {
        GateKind kind = GateKind::Or;
        bool known = false;
        std::vector<int> children;
        int var = 0;
    };
    std::map<int, Raw> raws;

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('#', pos);
        if (end == std::string::npos) throw CircuitError("decode: record without '#'");
        std::string rec = text.substr(pos, end - pos);
        pos = end + 1;
        std::size_t d1 = rec.find('$');
        std::size_t d2 = rec.rfind('$');
        if (d1 == std::string::npos || d2 == d1)
            throw CircuitError("decode: record needs two '$' separators: " + rec);
        int gid = num_parse(rec.substr(0, d1), base);
        int child = num_parse(rec.substr(d1 + 1, d2 - d1 - 1), base);
        std::string sig = rec.substr(d2 + 1);
        if (sig.size() != 1 || sig[0] < '0' || sig[0] > '4')
            throw CircuitError("decode: bad gate-type sign: " + rec);
        GateKind kind;
        switch (sig[0]) {
            case '0': kind = GateKind::Or; break;
            case '1': kind = GateKind::And; break;
            case '2': kind = GateKind::AndOmega; break;
            case '3': kind = GateKind::Input; break;
            default: kind = GateKind::NegInput; break;
        }
        Raw& r = raws[gid];
        if (r.known && r.kind != kind)
            throw CircuitError("decode: gate " + std::to_string(gid) + " has two kinds");
        if (r.known && kind_is_leaf(kind))
            throw CircuitError("decode: leaf gate " + std::to_string(gid) +
                               " has multiple records");
        r.known = true;
        r.kind = kind;
        if (kind_is_leaf(kind))
            r.var = child;
        else
            r.children.push_back(child);
    }
    if (raws.empty()) return c;

    std::set<int> consumed;
    for (const auto& [id, r] : raws)
        for (int h : r.children) {
            if (!raws.count(h))
                throw CircuitError("decode: gate " + std::to_string(id) +
                                   " references undefined gate " + std::to_string(h));
            consumed.insert(h);
        }
    std::vector<int> tops;
    for (const auto& [id, r] : raws)
        if (!consumed.count(id)) tops.push_back(id);
    if (tops.size() != 1)
        throw CircuitError("decode: expected one output gate, found " +
                           std::to_string(tops.size()));
    c.output = tops[0];

    // layers: longest path from the output; a layer beyond the gate count
    // can only come from a wiring cycle
    std::map<int, int> layer;
    std::function<void(int, int)> assign = [&](int id, int depth) {
        if (depth > (int)raws.size())
            throw CircuitError("decode: cyclic wiring at gate " + std::to_string(id));
        auto it = layer.find(id);
        if (it != layer.end() && it->second >= depth) return;
        layer[id] = depth;
        for (int h : raws[id].children) assign(h, depth + 1);
    };
    assign(c.output, 1);

    int maxVar = 0;
    int cap = 3;
    for (const auto& [id, r] : raws) {
        Gate g;
        g.id = id;
        g.kind = r.kind;
        g.inputs = r.children;
        g.var = r.var;
        g.layer = layer.at(id);
        if (kind_is_leaf(r.kind)) maxVar = std::max(maxVar, r.var);
        if (r.kind == GateKind::AndOmega) cap = std::max(cap, (int)r.children.size());
        c.gates.emplace(id, std::move(g));
    }
    c.nVars = maxVar;
    c.andOmegaCap = cap;
    for (auto& layerIds : c.layers()) {
        int idx = 0;
        std::vector<int> sorted(layerIds);
        std::sort(sorted.begin(), sorted.end());
        for (int id : sorted) c.gate(id).index = ++idx;
    }
    return c;
}

// --- blocks ------------------------------------------------------------------------

namespace {

struct BlockView {
    std::vector<int> andGates;  // sorted by (layer, index)
    std::set<int> memberSet;
    std::vector<int> cands, cors;
    int topLayer = 0, bottomLayer = 0;
    bool usable = false;
};

BlockView view_block(const Circuit& c, const CascadingBlock& d) {
    BlockView v;
    for (int m : d.members) {
        if (!c.has_gate(m)) return v;
        v.memberSet.insert(m);
        GateKind k = c.gate(m).kind;
        if (k == GateKind::AndOmega) v.andGates.push_back(m);
        else if (k == GateKind::CAnd) v.cands.push_back(m);
        else if (k == GateKind::COr) v.cors.push_back(m);
        else return v;
    }
    if (v.andGates.empty()) return v;
    std::sort(v.andGates.begin(), v.andGates.end(), [&](int a, int b) {
        const Gate& ga = c.gate(a);
        const Gate& gb = c.gate(b);
        return std::tie(ga.layer, ga.index) < std::tie(gb.layer, gb.index);
    });
    v.topLayer = c.gate(v.andGates.front()).layer;
    v.bottomLayer = c.gate(v.andGates.back()).layer;
    v.usable = true;
    return v;
}

// directed link edges inside the block: deeper AndOmega -> CAnd -> COr -> higher AndOmega
std::map<int, std::vector<int>> link_edges(const Circuit& c, const BlockView& v) {
    std::map<int, std::vector<int>> edges;  // from deeper gate to higher gate
    auto cons = c.consumers();
    for (int ca : v.cands) {
        const Gate& g = c.gate(ca);
        int src = -1;
        for (int h : g.inputs)
            if (v.memberSet.count(h) && c.gate(h).kind == GateKind::AndOmega) src = h;
        if (src < 0) continue;
        for (int co : cons[ca]) {
            if (!v.memberSet.count(co) || c.gate(co).kind != GateKind::COr) continue;
            for (int dst : cons[co])
                if (v.memberSet.count(dst) && c.gate(dst).kind == GateKind::AndOmega)
                    edges[src].push_back(dst);
        }
    }
    return edges;
}

}  // namespace

CascadingBlock analyze_block(const Circuit& c, const CascadingBlock& d) {
    CascadingBlock out = d;
    BlockView v = view_block(c, d);
    if (!v.usable) return out;
    auto cons = c.consumers();
    out.topGate = -1;
    for (int g : v.andGates) {
        bool feedsMemberCAnd = false;
        for (int h : cons[g])
            if (v.memberSet.count(h) && c.gate(h).kind == GateKind::CAnd) feedsMemberCAnd = true;
        if (!feedsMemberCAnd && out.topGate < 0) out.topGate = g;
    }
    if (out.topGate < 0) out.topGate = v.andGates.front();
    out.bottomGates.clear();
    for (int g : v.andGates)
        if (c.gate(g).layer == v.bottomLayer) out.bottomGates.push_back(g);
    out.blockTopLayer = v.topLayer;
    out.blockBottomLayer = v.bottomLayer;
    return out;
}

CircuitReport validate_block(const Circuit& c, const CascadingBlock& d) {
    CircuitReport rep;
    auto bad = [&](const std::string& code, const std::string& detail) {
        rep.violations.push_back({code, detail, -1});
    };

    if (d.members.empty()) {
        bad("B1", "block has no members");
        return rep;
    }
    std::set<int> seen;
    for (int m : d.members) {
        if (!c.has_gate(m)) {
            bad("B1", "member gate " + std::to_string(m) + " does not exist");
            return rep;
        }
        if (!seen.insert(m).second) bad("B1", "member gate listed twice");
        GateKind k = c.gate(m).kind;
        if (k != GateKind::AndOmega && k != GateKind::CAnd && k != GateKind::COr)
            bad("B1", describe(c, m) + " is not an AndOmega/CAnd/COr gate");
    }
    if (!rep.ok()) return rep;

    BlockView v = view_block(c, d);
    if (!v.usable || v.andGates.empty()) {
        bad("B1", "block has no AndOmega member");
        return rep;
    }
    auto rel = [&](int id) { return c.gate(id).layer - v.topLayer + 2; };
    int relBottom = v.bottomLayer - v.topLayer + 2;
    auto cons = c.consumers();

    // B2: unique top AndOmega with fan-out 1
    std::vector<int> tops;
    for (int g : v.andGates)
        if (rel(g) == 2) tops.push_back(g);
    if (tops.size() != 1)
        bad("B2", std::to_string(tops.size()) + " AndOmega members on the top layer");
    else if (cons[tops[0]].size() != 1)
        bad("B2", describe(c, tops[0]) + ": top gate fan-out is " +
                      std::to_string(cons[tops[0]].size()) + ", not 1");

    // B3: member layer residues
    for (int m : d.members) {
        GateKind k = c.gate(m).kind;
        int r = rel(m);
        if (k == GateKind::AndOmega && r % 3 != 2)
            bad("B3", describe(c, m) + ": AndOmega at relative layer " + std::to_string(r));
        if (k == GateKind::COr && (r % 3 != 0 || r < 3 || r > relBottom - 2))
            bad("B3", describe(c, m) + ": COr at relative layer " + std::to_string(r));
        if (k == GateKind::CAnd && (r % 3 != 1 || r < 4 || r > relBottom - 1))
            bad("B3", describe(c, m) + ": CAnd at relative layer " + std::to_string(r));
    }

    // B4: every non-top AndOmega feeds exactly one member CAnd one layer above
    for (int g : v.andGates) {
        if (rel(g) == 2) continue;
        std::vector<int> mc;
        for (int h : cons[g])
            if (v.memberSet.count(h)) {
                if (c.gate(h).kind == GateKind::CAnd) mc.push_back(h);
                else bad("B4", describe(c, g) + " feeds member " + describe(c, h));
            }
        if (mc.size() != 1)
            bad("B4", describe(c, g) + " feeds " + std::to_string(mc.size()) +
                          " member CAnd gates");
        else if (c.gate(mc[0]).layer != c.gate(g).layer - 1)
            bad("B4", describe(c, g) + ": its CAnd is not one layer above");
    }

    // B5: member-COr inputs — one per non-bottom AndOmega, none on the bottom layer
    for (int g : v.andGates) {
        std::vector<int> mcors;
        for (int h : c.gate(g).inputs)
            if (v.memberSet.count(h) && c.gate(h).kind == GateKind::COr) mcors.push_back(h);
        bool bottom = c.gate(g).layer == v.bottomLayer;
        if (bottom && !mcors.empty())
            bad("B5", describe(c, g) + ": bottom gate takes a member COr input");
        if (!bottom) {
            if (mcors.size() != 1)
                bad("B5", describe(c, g) + " takes " + std::to_string(mcors.size()) +
                              " member COr inputs");
            else if (c.gate(mcors[0]).layer != c.gate(g).layer + 1)
                bad("B5", describe(c, g) + ": its COr is not one layer below");
        }
    }

    // B6: link-gate wiring shape
    for (int co : v.cors) {
        const Gate& g = c.gate(co);
        if (g.inputs.empty()) bad("B6", describe(c, co) + " has no inputs");
        for (int h : g.inputs)
            if (!v.memberSet.count(h) || c.gate(h).kind != GateKind::CAnd ||
                c.gate(h).layer != g.layer + 1)
                bad("B6", describe(c, co) + " is fed by " + describe(c, h));
        auto& co_cons = cons[co];
        if (co_cons.size() != 1 || !v.memberSet.count(co_cons.empty() ? -1 : co_cons[0]) ||
            (co_cons.size() == 1 && (c.gate(co_cons[0]).kind != GateKind::AndOmega ||
                                     c.gate(co_cons[0]).layer != g.layer - 1)))
            bad("B6", describe(c, co) + " does not feed one member AndOmega one layer above");
    }
    for (int ca : v.cands) {
        const Gate& g = c.gate(ca);
        if (g.inputs.size() != 2) {
            bad("B6", describe(c, ca) + " must have fan-in 2");
            continue;
        }
        int memberAnd = 0, nonMember = 0;
        for (int h : g.inputs) {
            if (v.memberSet.count(h)) {
                if (c.gate(h).kind == GateKind::AndOmega && c.gate(h).layer == g.layer + 1)
                    ++memberAnd;
                else
                    bad("B6", describe(c, ca) + " takes member input " + describe(c, h));
            } else {
                ++nonMember;
            }
        }
        if (memberAnd != 1 || nonMember != 1)
            bad("B6", describe(c, ca) +
                          " must pair one member AndOmega one layer above with one outside input");
        auto& ca_cons = cons[ca];
        if (ca_cons.size() != 1 || (ca_cons.size() == 1 &&
                                    (!v.memberSet.count(ca_cons[0]) ||
                                     c.gate(ca_cons[0]).kind != GateKind::COr ||
                                     c.gate(ca_cons[0]).layer != g.layer - 1)))
            bad("B6", describe(c, ca) + " does not feed one member COr one layer above");
    }

    // B7: at most one directed path between any two member AndOmega gates
    auto edges = link_edges(c, v);
    for (int src : v.andGates) {
        std::map<int, long long> paths;
        paths[src] = 1;
        // process by descending layer (deeper first)
        std::vector<int> order(v.andGates);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return c.gate(a).layer > c.gate(b).layer; });
        for (int g : order) {
            if (!paths.count(g)) continue;
            for (int h : edges[g]) paths[h] += paths[g];
        }
        for (const auto& [dst, n] : paths)
            if (dst != src && n > 1)
                bad("B7", std::to_string(n) + " directed paths from gate " +
                              std::to_string(src) + " to gate " + std::to_string(dst));
    }
    return rep;
}

int link_length(const Circuit& c, const CascadingBlock& d) {
    BlockView v = view_block(c, d);
    if (!v.usable) throw CircuitError("link_length: malformed block");
    auto edges = link_edges(c, v);
    std::map<int, int> len;
    std::vector<int> order(v.andGates);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return c.gate(a).layer > c.gate(b).layer; });
    int best = 1;
    for (int g : order) {
        int& l = len[g];
        l = std::max(l, 1);
        for (int h : edges[g]) len[h] = std::max(len[h], l + 1);
        best = std::max(best, l);
    }
    return best;
}

int cascading_length(const Circuit& c, const CascadingBlock& d) {
    BlockView v = view_block(c, d);
    if (!v.usable) throw CircuitError("cascading_length: malformed block");
    CascadingBlock a = analyze_block(c, d);
    int sum = 1;
    for (int g : v.andGates)
        if (g != a.topGate) sum += lf_any(c, c.gate(g));
    return sum;
}

// --- decisive fragments ----------------------------------------------------------

std::vector<Fragment> decisive_fragments(const Circuit& c, int root, std::size_t cap,
                                         bool* capped) {
    if (!c.has_gate(root)) throw CircuitError("decisive_fragments: missing root");
    std::vector<Fragment> out;
    bool cut = false;

    std::function<void(std::set<int>, std::map<int, int>, std::vector<int>)> rec =
        [&](std::set<int> visited, std::map<int, int> choice, std::vector<int> todo) {
            if (cut) return;
            while (!todo.empty()) {
                int id = todo.back();
                todo.pop_back();
                if (visited.count(id)) continue;
                visited.insert(id);
                const Gate& g = c.gate(id);
                if (kind_is_or_class(g.kind)) {
                    for (int h : g.inputs) {
                        auto ch = choice;
                        ch[id] = h;
                        auto td = todo;
                        td.push_back(h);
                        rec(visited, std::move(ch), std::move(td));
                        if (cut) return;
                    }
                    return;
                }
                for (int h : g.inputs) todo.push_back(h);
            }
            if (out.size() >= cap) {
                cut = true;
                return;
            }
            out.push_back({std::move(choice), std::move(visited)});
        };
    rec({}, {}, {root});
    if (capped) *capped = cut;
    return out;
}

Circuit fragment_circuit(const Circuit& c, int root, const Fragment& f) {
    Circuit out;
    out.nVars = c.nVars;
    out.andOmegaCap = c.andOmegaCap;
    out.output = root;
    for (int id : f.gates) {
        Gate g = c.gate(id);
        if (kind_is_or_class(g.kind)) g.inputs = {f.choice.at(id)};
        out.gates.emplace(id, std::move(g));
    }
    for (const auto& d : c.blocks) {
        CascadingBlock nb;
        for (int m : d.members)
            if (f.gates.count(m)) nb.members.push_back(m);
        if (!nb.members.empty()) out.blocks.push_back(analyze_block(out, nb));
    }
    return out;
}

// --- semi-circuit validation -------------------------------------------------------

namespace {

struct FragView {
    const Circuit* c = nullptr;
    const Fragment* f = nullptr;
    std::map<int, std::vector<int>> children;   // in-fragment children
    std::map<int, std::vector<int>> consumers;  // in-fragment consumers
    // unlinked tree restricted to the fragment, reachable from the root
    std::set<int> unlinkedReach;
    std::map<int, std::vector<int>> unlinkedParents;  // non-leaf gates only
};

FragView make_frag_view(const Circuit& c, int root, const Fragment& f) {
    FragView v;
    v.c = &c;
    v.f = &f;
    for (int id : f.gates) {
        const Gate& g = c.gate(id);
        std::vector<int> ch;
        if (kind_is_or_class(g.kind)) ch = {f.choice.at(id)};
        else ch = g.inputs;
        for (int h : ch) v.consumers[h].push_back(id);
        v.children[id] = std::move(ch);
    }
    // unlinked reach: drop CAnd/COr gates entirely
    std::vector<int> todo{root};
    while (!todo.empty()) {
        int id = todo.back();
        todo.pop_back();
        if (v.unlinkedReach.count(id)) continue;
        if (kind_is_link(c.gate(id).kind)) continue;
        v.unlinkedReach.insert(id);
        for (int h : v.children[id]) {
            if (kind_is_link(c.gate(h).kind)) continue;
            todo.push_back(h);
            if (!kind_is_leaf(c.gate(h).kind)) v.unlinkedParents[h].push_back(id);
        }
    }
    return v;
}

int lf_frag(const FragView& v, int id) {
    int n = 0;
    for (int h : v.children.at(id))
        if (!kind_is_leaf(v.c->gate(h).kind)) ++n;
    return n;
}

// ancestor chain root-ward in the unlinked fragment tree (first parents on ties)
std::vector<int> unlinked_chain(const FragView& v, int id) {
    std::vector<int> chain{id};
    std::set<int> guard{id};
    int cur = id;
    while (true) {
        auto it = v.unlinkedParents.find(cur);
        if (it == v.unlinkedParents.end() || it->second.empty()) break;
        cur = it->second.front();
        if (!guard.insert(cur).second) break;
        chain.push_back(cur);
    }
    return chain;
}

bool unlinked_proper_ancestor(const FragView& v, int anc, int des) {
    if (anc == des) return false;
    auto chain = unlinked_chain(v, des);
    return std::find(chain.begin() + 1, chain.end(), anc) != chain.end();
}

int unlinked_mca(const FragView& v, int a, int b) {
    auto ca = unlinked_chain(v, a);
    std::set<int> sa(ca.begin(), ca.end());
    for (int g : unlinked_chain(v, b))
        if (sa.count(g)) return g;
    return -1;
}

// reflexive up-set in the full fragment graph (links included)
std::set<int> full_upset(const FragView& v, int id) {
    std::set<int> out;
    std::vector<int> todo{id};
    while (!todo.empty()) {
        int g = todo.back();
        todo.pop_back();
        if (!out.insert(g).second) continue;
        auto it = v.consumers.find(g);
        if (it != v.consumers.end())
            for (int h : it->second) todo.push_back(h);
    }
    return out;
}

struct FragBlock {
    int blockIndex = -1;
    std::vector<int> retainedAnd;      // member AndOmegas retained in the fragment,
                                       // sorted bottom-up (layer desc, index asc)
    std::set<int> retainedMembers;     // all retained members (incl. CAnd/COr)
    std::vector<int> unlinkedAnd;      // retained members also in the unlinked reach
    int topLayer = 0, bottomLayer = 0; // over retained AndOmegas
    int length = 0;                    // fragment cascading length
};

std::vector<FragBlock> frag_blocks(const Circuit& c, const FragView& v) {
    std::vector<FragBlock> out;
    for (int bi = 0; bi < (int)c.blocks.size(); ++bi) {
        FragBlock fb;
        fb.blockIndex = bi;
        for (int m : c.blocks[bi].members) {
            if (!v.f->gates.count(m)) continue;
            fb.retainedMembers.insert(m);
            if (c.gate(m).kind == GateKind::AndOmega) {
                fb.retainedAnd.push_back(m);
                if (v.unlinkedReach.count(m)) fb.unlinkedAnd.push_back(m);
            }
        }
        if (fb.retainedAnd.empty()) continue;
        std::sort(fb.retainedAnd.begin(), fb.retainedAnd.end(), [&](int a, int b) {
            const Gate& ga = c.gate(a);
            const Gate& gb = c.gate(b);
            if (ga.layer != gb.layer) return ga.layer > gb.layer;  // deeper first
            return ga.index < gb.index;
        });
        std::sort(fb.unlinkedAnd.begin(), fb.unlinkedAnd.end(), [&](int a, int b) {
            const Gate& ga = c.gate(a);
            const Gate& gb = c.gate(b);
            if (ga.layer != gb.layer) return ga.layer > gb.layer;
            return ga.index < gb.index;
        });
        fb.topLayer = c.gate(fb.retainedAnd.back()).layer;
        fb.bottomLayer = c.gate(fb.retainedAnd.front()).layer;
        int top = fb.retainedAnd.back();  // min layer = chain top
        fb.length = 1;
        for (int g : fb.retainedAnd)
            if (g != top) fb.length += lf_any(c, c.gate(g));
        out.push_back(std::move(fb));
    }
    return out;
}

}  // namespace

CircuitReport validate_semi_circuit(const Circuit& c, int root, std::size_t fragmentCap) {
    if (!c.has_gate(root)) throw CircuitError("validate_semi_circuit: missing root");
    CircuitReport rep;
    bool capped = false;
    auto frags = decisive_fragments(c, root, fragmentCap, &capped);
    if (capped) {
        rep.complete = false;
        rep.flags.push_back("fragment-cap-exceeded");
    }
    std::set<std::string> flagSet;
    auto flag = [&](const std::string& s) { flagSet.insert(s); };

    for (int fi = 0; fi < (int)frags.size(); ++fi) {
        const Fragment& f = frags[fi];
        FragView v = make_frag_view(c, root, f);
        auto bad = [&](const std::string& code, const std::string& detail) {
            rep.violations.push_back({code, detail, fi});
        };

        // stray link gates (every retained CAnd/COr must belong to a declared block)
        std::set<int> declaredLinks;
        for (const auto& d : c.blocks)
            for (int m : d.members)
                if (kind_is_link(c.gate(m).kind)) declaredLinks.insert(m);
        for (int id : f.gates)
            if (kind_is_link(c.gate(id).kind) && !declaredLinks.count(id))
                bad("C1", describe(c, id) + " is a link gate outside every declared block");

        auto blocks = frag_blocks(c, v);
        for (const auto& fb : blocks) {
            auto [it, fresh] = rep.blockMaxLen.emplace(fb.blockIndex, fb.length);
            if (!fresh) it->second = std::max(it->second, fb.length);
        }

        // S1: the unlinked fragment, restricted to non-leaf gates, is a tree
        for (const auto& [id, parents] : v.unlinkedParents)
            if (parents.size() > 1)
                bad("S1", describe(c, id) + " has " + std::to_string(parents.size()) +
                              " parents in the unlinked fragment");

        // S2: per layer, at most one cascading block of length >= 2, holding the
        // leftmost retained gate of that layer
        {
            std::map<int, std::vector<const FragBlock*>> byLayer;
            for (const auto& fb : blocks) {
                if (fb.length < 2) continue;
                std::set<int> layersOf;
                for (int m : fb.retainedMembers) layersOf.insert(c.gate(m).layer);
                for (int l : layersOf) byLayer[l].push_back(&fb);
            }
            for (const auto& [l, list] : byLayer) {
                if (list.size() > 1) {
                    bad("S2", std::to_string(list.size()) +
                                  " blocks of length >= 2 share layer " + std::to_string(l));
                    continue;
                }
                int leftmost = -1, leftIdx = 0;
                for (int id : f.gates) {
                    const Gate& g = c.gate(id);
                    if (g.layer != l) continue;
                    if (leftmost < 0 || g.index < leftIdx) {
                        leftmost = id;
                        leftIdx = g.index;
                    }
                }
                if (leftmost >= 0 && !list[0]->retainedMembers.count(leftmost))
                    bad("S2", "leftmost retained gate on layer " + std::to_string(l) +
                                  " (" + describe(c, leftmost) + ") is outside the block");
            }
        }

        // S3: in the unlinked leaf-free fragment, every root-to-bottom path meets a
        // declared block member AndOmega (an undeclared AndOmega passes with a flag)
        {
            std::set<int> memberAnd;
            for (const auto& fb : blocks)
                for (int g : fb.retainedAnd) memberAnd.insert(g);
            std::map<int, int> memoD, memoW;  // avoid sets: declared / any AndOmega
            std::function<bool(int, bool)> avoid = [&](int id, bool weak) -> bool {
                const Gate& g = c.gate(id);
                bool hit = weak ? (g.kind == GateKind::AndOmega) : (memberAnd.count(id) != 0);
                if (hit) return false;
                auto& memo = weak ? memoW : memoD;
                auto it = memo.find(id);
                if (it != memo.end()) return it->second;
                bool leafFreeBottom = true;
                bool any = false;
                for (int h : v.children.at(id)) {
                    if (kind_is_leaf(c.gate(h).kind)) continue;
                    if (kind_is_link(c.gate(h).kind)) continue;
                    leafFreeBottom = false;
                    if (avoid(h, weak)) any = true;
                }
                bool res = leafFreeBottom || any;
                memo[id] = res;
                return res;
            };
            bool weakViolated = avoid(root, true);
            bool strictViolated = avoid(root, false);
            if (weakViolated)
                bad("S3", "a root-to-bottom path avoids every AndOmega gate");
            else if (strictViolated)
                flag("S3-undeclared-AndOmega-used");
        }

        // S4: the root is the most common ancestor of two AndOmega gates of some block
        {
            std::vector<const FragBlock*> multi;
            for (const auto& fb : blocks)
                if (fb.unlinkedAnd.size() >= 2) multi.push_back(&fb);
            if (multi.empty()) {
                flag("S4-degenerate");
            } else {
                bool strict = false, relaxed = false;
                for (const auto* fb : multi) {
                    for (std::size_t i = 0; i < fb->unlinkedAnd.size() && !strict; ++i)
                        for (std::size_t j = i + 1; j < fb->unlinkedAnd.size() && !strict; ++j) {
                            int m = unlinked_mca(v, fb->unlinkedAnd[i], fb->unlinkedAnd[j]);
                            if (m == root) strict = true;
                            else if (m >= 0 && !relaxed) {
                                bool clean = true;
                                auto chain = unlinked_chain(v, m);
                                for (std::size_t t = 1; t < chain.size(); ++t) {
                                    GateKind k = c.gate(chain[t]).kind;
                                    if (k != GateKind::And && k != GateKind::Or) clean = false;
                                }
                                if (clean) relaxed = true;
                            }
                        }
                    if (strict) break;
                }
                if (!strict && relaxed) flag("S4-relaxed");
                if (!strict && !relaxed)
                    bad("S4", "no block pair has the root as its most common ancestor");
            }
        }

        // S5: the most common ancestor (full graph, reflexive) of any two retained
        // member AndOmegas of one block must be an And-kind or AndOmega gate
        for (const auto& fb : blocks) {
            for (std::size_t i = 0; i < fb.retainedAnd.size(); ++i)
                for (std::size_t j = i + 1; j < fb.retainedAnd.size(); ++j) {
                    auto ua = full_upset(v, fb.retainedAnd[i]);
                    auto ub = full_upset(v, fb.retainedAnd[j]);
                    std::set<int> common;
                    for (int g : ua)
                        if (ub.count(g)) common.insert(g);
                    for (int m : common) {
                        bool minimal = true;
                        for (int other : common) {
                            if (other == m) continue;
                            auto up = full_upset(v, other);
                            if (up.count(m)) {
                                minimal = false;
                                break;
                            }
                        }
                        if (!minimal) continue;
                        GateKind k = c.gate(m).kind;
                        if (!kind_conjunctive(k))
                            bad("S5", "most common ancestor of gates " +
                                          std::to_string(fb.retainedAnd[i]) + " and " +
                                          std::to_string(fb.retainedAnd[j]) + " is " +
                                          describe(c, m));
                    }
                }
        }

        // S6: member AndOmegas have leafless fan-in <= 2
        for (const auto& fb : blocks)
            for (int g : fb.retainedAnd)
                if (lf_any(c, c.gate(g)) > 2)
                    bad("S6", describe(c, g) + " has leafless fan-in " +
                                  std::to_string(lf_any(c, c.gate(g))));

        // S7: every retained AndOmega feeds at most 2 retained gates; a second
        // consumer must be a CAnd
        for (int id : f.gates) {
            if (c.gate(id).kind != GateKind::AndOmega) continue;
            auto it = v.consumers.find(id);
            int n = it == v.consumers.end() ? 0 : (int)it->second.size();
            if (n > 2) {
                bad("S7", describe(c, id) + " has " + std::to_string(n) +
                              " in-fragment consumers");
            } else if (n == 2) {
                bool hasCAnd = false;
                for (int h : it->second)
                    if (c.gate(h).kind == GateKind::CAnd) hasCAnd = true;
                if (!hasCAnd)
                    bad("S7", describe(c, id) + " has two consumers, neither a CAnd");
            }
        }

        // S8/S9: ancestor block pairs are orderly and vertically separated
        for (const auto& A : blocks) {
            for (const auto& B : blocks) {
                if (A.blockIndex == B.blockIndex) continue;
                bool anc = false;
                for (int a : A.unlinkedAnd) {
                    for (int b : B.unlinkedAnd)
                        if (unlinked_proper_ancestor(v, a, b)) {
                            anc = true;
                            break;
                        }
                    if (anc) break;
                }
                if (!anc) continue;
                std::size_t n = std::min(A.retainedAnd.size(), B.retainedAnd.size());
                for (std::size_t i = 0; i < n; ++i) {
                    int a = A.retainedAnd[i], b = B.retainedAnd[i];
                    if (!v.unlinkedReach.count(a) || !v.unlinkedReach.count(b)) continue;
                    if (unlinked_proper_ancestor(v, a, b)) continue;
                    if (unlinked_proper_ancestor(v, b, a))
                        bad("S8", "blocks " + std::to_string(A.blockIndex) + " and " +
                                      std::to_string(B.blockIndex) +
                                      " are not orderly at chain position " + std::to_string(i));
                }
                if (!(B.topLayer > A.bottomLayer))
                    bad("S9", "descendant block " + std::to_string(B.blockIndex) +
                                  " (top layer " + std::to_string(B.topLayer) +
                                  ") overlaps ancestor block " + std::to_string(A.blockIndex) +
                                  " (bottom layer " + std::to_string(A.bottomLayer) + ")");
            }
        }

        // S10: inside a block's layer span, no retained gate right of the block
        // may have leafless fan-in >= 2
        for (const auto& fb : blocks) {
            if (fb.length < 2) continue;
            for (int l = fb.topLayer; l <= fb.bottomLayer; ++l) {
                int memberIdxMax = -1;
                for (int m : fb.retainedMembers)
                    if (c.gate(m).layer == l)
                        memberIdxMax = std::max(memberIdxMax, c.gate(m).index);
                if (memberIdxMax < 0) continue;
                for (int id : f.gates) {
                    const Gate& g = c.gate(id);
                    if (g.layer != l || g.index <= memberIdxMax) continue;
                    if (kind_is_leaf(g.kind)) continue;
                    if (lf_frag(v, id) >= 2)
                        bad("S10", describe(c, id) + " sits right of block " +
                                       std::to_string(fb.blockIndex) +
                                       " with leafless fan-in >= 2");
                }
            }
        }

        // per-fragment block shape (B codes, fragment-scoped)
        for (const auto& fb : blocks) {
            if (fb.retainedAnd.size() < 2) continue;
            // unique chain top: exactly one retained member with no retained member-CAnd consumer
            int tops = 0;
            for (int g : fb.retainedAnd) {
                bool feeds = false;
                auto it = v.consumers.find(g);
                if (it != v.consumers.end())
                    for (int h : it->second)
                        if (fb.retainedMembers.count(h) && c.gate(h).kind == GateKind::CAnd)
                            feeds = true;
                if (!feeds) ++tops;
            }
            if (tops != 1)
                bad("B2", "block " + std::to_string(fb.blockIndex) + " has " +
                              std::to_string(tops) + " chain tops in the fragment");
            // layer residues: member AndOmegas three layers apart
            for (int g : fb.retainedAnd)
                if ((c.gate(g).layer - fb.topLayer) % 3 != 0)
                    bad("B3", describe(c, g) + " breaks the 3-layer chain spacing");
            // realized links: COr <- chosen CAnd <- (member one layer below, outside input)
            for (int co : fb.retainedMembers) {
                if (c.gate(co).kind != GateKind::COr) continue;
                int ca = v.children.at(co).front();
                if (c.gate(ca).kind != GateKind::CAnd ||
                    !fb.retainedMembers.count(ca)) {
                    bad("B6", describe(c, co) + " chooses non-member " + describe(c, ca));
                    continue;
                }
                int memberBelow = 0;
                for (int h : c.gate(ca).inputs)
                    if (fb.retainedMembers.count(h) &&
                        c.gate(h).kind == GateKind::AndOmega &&
                        c.gate(h).layer == c.gate(ca).layer + 1)
                        ++memberBelow;
                if (memberBelow != 1)
                    bad("B6", describe(c, ca) + " lacks its member AndOmega one layer below");
            }
            // path uniqueness over realized links
            std::map<int, std::vector<int>> edges;
            for (int co : fb.retainedMembers) {
                if (c.gate(co).kind != GateKind::COr) continue;
                int ca = v.children.at(co).front();
                if (!fb.retainedMembers.count(ca)) continue;
                int src = -1;
                for (int h : c.gate(ca).inputs)
                    if (fb.retainedMembers.count(h) && c.gate(h).kind == GateKind::AndOmega)
                        src = h;
                auto it = v.consumers.find(co);
                if (src < 0 || it == v.consumers.end()) continue;
                for (int dst : it->second)
                    if (fb.retainedMembers.count(dst) &&
                        c.gate(dst).kind == GateKind::AndOmega)
                        edges[src].push_back(dst);
            }
            for (int src : fb.retainedAnd) {
                std::map<int, long long> paths;
                paths[src] = 1;
                for (int g : fb.retainedAnd) {  // bottom-up order
                    if (!paths.count(g)) continue;
                    for (int h : edges[g]) paths[h] += paths[g];
                }
                for (const auto& [dst, nPaths] : paths)
                    if (dst != src && nPaths > 1)
                        bad("B7", std::to_string(nPaths) + " realized link paths from gate " +
                                      std::to_string(src) + " to gate " + std::to_string(dst));
            }
        }
    }
    rep.flags.insert(rep.flags.end(), flagSet.begin(), flagSet.end());
    return rep;
}

// --- whole-circuit validation ---------------------------------------------------

namespace {

// static unlinked parent (unique by the G-fanout rules); -1 at the output
int static_unlinked_parent(const Circuit& c, const std::map<int, std::vector<int>>& cons,
                           int id) {
    auto it = cons.find(id);
    if (it == cons.end()) return -1;
    for (int h : it->second)
        if (!kind_is_link(c.gate(h).kind)) return h;
    return -1;
}

std::vector<int> static_chain(const Circuit& c, const std::map<int, std::vector<int>>& cons,
                              int id) {
    std::vector<int> chain{id};
    std::set<int> guard{id};
    int cur = id;
    while (true) {
        int p = static_unlinked_parent(c, cons, cur);
        if (p < 0 || !guard.insert(p).second) break;
        chain.push_back(p);
        cur = p;
    }
    return chain;
}

int static_mca(const Circuit& c, const std::map<int, std::vector<int>>& cons, int a, int b) {
    auto ca = static_chain(c, cons, a);
    std::set<int> sa(ca.begin(), ca.end());
    for (int g : static_chain(c, cons, b))
        if (sa.count(g)) return g;
    return -1;
}

}  // namespace

std::vector<int> semi_circuit_roots(const Circuit& c) {
    auto cons = c.consumers();
    // gates reachable from the output in the unlinked graph (CAnd/COr dropped);
    // bottom block members often hang on link gates alone and are excluded here
    std::set<int> unlinkedReach;
    if (c.has_gate(c.output)) {
        std::vector<int> todo{c.output};
        while (!todo.empty()) {
            int id = todo.back();
            todo.pop_back();
            if (kind_is_link(c.gate(id).kind)) continue;
            if (!unlinkedReach.insert(id).second) continue;
            for (int h : c.gate(id).inputs)
                if (c.has_gate(h)) todo.push_back(h);
        }
    }
    std::set<int> inBlock;
    std::set<int> candidates;
    for (const auto& d : c.blocks) {
        std::vector<int> ands;
        for (int m : d.members) {
            inBlock.insert(m);
            if (c.has_gate(m) && c.gate(m).kind == GateKind::AndOmega &&
                unlinkedReach.count(m))
                ands.push_back(m);
        }
        if (ands.empty()) continue;
        int mca = ands[0];
        for (std::size_t i = 1; i < ands.size(); ++i) {
            mca = static_mca(c, cons, mca, ands[i]);
            if (mca < 0) break;
        }
        if (mca >= 0) candidates.insert(mca);
    }
    for (const auto& [id, g] : c.gates)
        if (g.kind == GateKind::AndOmega && !inBlock.count(id) && unlinkedReach.count(id))
            candidates.insert(id);

    std::vector<int> roots;
    for (int s : candidates) {
        bool below = false;
        auto chain = static_chain(c, cons, s);
        for (std::size_t i = 1; i < chain.size(); ++i)
            if (candidates.count(chain[i])) below = true;
        if (!below) roots.push_back(s);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

CircuitReport validate_cascading_circuit(const Circuit& c, int k, int ellAnd,
                                         std::size_t fragmentCap) {
    CircuitReport rep = circuit_issues(c);
    if (!rep.ok()) return rep;
    auto bad = [&](const std::string& code, const std::string& detail) {
        rep.violations.push_back({code, detail, -1});
    };

    std::set<int> declaredLinks, memberGates;
    for (const auto& d : c.blocks)
        for (int m : d.members) {
            memberGates.insert(m);
            if (kind_is_link(c.gate(m).kind)) declaredLinks.insert(m);
        }
    for (const auto& [id, g] : c.gates)
        if (kind_is_link(g.kind) && !declaredLinks.count(id))
            bad("C1", describe(c, id) + " is a link gate outside every declared block");

    auto roots = semi_circuit_roots(c);
    if (roots.empty()) rep.flags.push_back("plain-tree");

    // reachability from each semi-circuit root (full graph, links included)
    std::map<int, std::set<int>> reach;
    for (int r : roots) {
        std::set<int>& set = reach[r];
        std::vector<int> todo{r};
        while (!todo.empty()) {
            int id = todo.back();
            todo.pop_back();
            if (!set.insert(id).second) continue;
            for (int h : c.gate(id).inputs) todo.push_back(h);
        }
    }
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            for (int g : reach[roots[i]])
                if (reach[roots[j]].count(g) && !kind_is_leaf(c.gate(g).kind)) {
                    bad("C2", "semi-circuits at gates " + std::to_string(roots[i]) + " and " +
                                  std::to_string(roots[j]) + " share " + describe(c, g));
                    break;
                }

    // basis walk: from the output down, stopping at semi-circuit roots
    std::set<int> rootSet(roots.begin(), roots.end());
    std::set<int> basis;
    {
        std::vector<int> todo{c.output};
        while (!todo.empty()) {
            int id = todo.back();
            todo.pop_back();
            if (rootSet.count(id) || basis.count(id)) continue;
            basis.insert(id);
            const Gate& g = c.gate(id);
            if (kind_is_leaf(g.kind)) continue;
            if (g.kind != GateKind::And && g.kind != GateKind::Or) {
                bad("C1", describe(c, id) + " sits in the basis but is not And/Or");
                continue;
            }
            for (int h : g.inputs) todo.push_back(h);
        }
    }
    for (int bi = 0; bi < (int)c.blocks.size(); ++bi) {
        int homes = 0;
        for (int r : roots) {
            bool all = true;
            for (int m : c.blocks[bi].members)
                if (!reach[r].count(m)) all = false;
            if (all) ++homes;
        }
        bool inBasis = false;
        for (int m : c.blocks[bi].members)
            if (basis.count(m)) inBasis = true;
        if (homes != 1 || inBasis)
            bad("C3", "block " + std::to_string(bi) +
                          " is not contained in exactly one semi-circuit");
    }

    for (int r : roots) {
        CircuitReport sub = validate_semi_circuit(c, r, fragmentCap);
        for (auto viol : sub.violations) {
            viol.detail = "semi-circuit at gate " + std::to_string(r) + ": " + viol.detail;
            rep.violations.push_back(std::move(viol));
        }
        for (const auto& fl : sub.flags) {
            std::string tagged = fl + " (semi-circuit at gate " + std::to_string(r) + ")";
            if (std::find(rep.flags.begin(), rep.flags.end(), tagged) == rep.flags.end())
                rep.flags.push_back(tagged);
        }
        rep.complete = rep.complete && sub.complete;
        for (const auto& [bi, len] : sub.blockMaxLen) {
            auto [it, fresh] = rep.blockMaxLen.emplace(bi, len);
            if (!fresh) it->second = std::max(it->second, len);
        }
    }

    for (const auto& [bi, len] : rep.blockMaxLen)
        if (len > k)
            bad("C4", "block " + std::to_string(bi) + " has cascading length " +
                          std::to_string(len) + " > k = " + std::to_string(k));

    // C5: at most ellAnd consecutive And/CAnd gates on any root-to-leaf path
    {
        std::map<int, int> run;  // longest And-run ending at the gate
        auto byLayer = c.layers();
        auto cons = c.consumers();
        int worst = 0;
        for (int layer = 1; layer < (int)byLayer.size(); ++layer) {
            for (int id : byLayer[layer]) {
                const Gate& g = c.gate(id);
                int inherit = 0;
                for (int h : cons[id])
                    if (kind_is_and_class(c.gate(h).kind)) inherit = std::max(inherit, run[h]);
                run[id] = kind_is_and_class(g.kind) ? inherit + 1 : 0;
                worst = std::max(worst, run[id]);
            }
        }
        if (worst > ellAnd)
            bad("C5", std::to_string(worst) + " consecutive And-kind gates exceed " +
                          std::to_string(ellAnd));
    }
    return rep;
}

// --- files -----------------------------------------------------------------------

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<int> parse_id_list(const std::string& s, int lineNo) {
    std::vector<int> out;
    std::string cur;
    for (char ch : s + ",") {
        if (ch == ',') {
            if (cur.empty()) throw ParseError(lineNo, "empty entry in id list");
            try {
                out.push_back(std::stoi(cur));
            } catch (...) {
                throw ParseError(lineNo, "bad id '" + cur + "'");
            }
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    return out;
}

bool key_value(const std::string& tok, const std::string& key, std::string& value) {
    if (tok.size() <= key.size() + 1) return false;
    if (tok.compare(0, key.size(), key) != 0 || tok[key.size()] != '=') return false;
    value = tok.substr(key.size() + 1);
    return true;
}

int parse_int(const std::string& s, int lineNo, const std::string& what) {
    try {
        return std::stoi(s);
    } catch (...) {
        throw ParseError(lineNo, "bad " + what + " '" + s + "'");
    }
}

}  // namespace

Circuit parse_circuit(std::istream& is) {
    Circuit c;
    bool sawHeader = false;
    std::string line;
    int lineNo = 0;
    while (std::getline(is, line)) {
        ++lineNo;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = split_tokens(line);
        if (toks.empty()) continue;
        if (toks[0] == "circuit") {
            if (sawHeader) throw ParseError(lineNo, "duplicate circuit header");
            sawHeader = true;
            std::string v;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (key_value(toks[i], "nvars", v)) c.nVars = parse_int(v, lineNo, "nvars");
                else if (key_value(toks[i], "output", v)) c.output = parse_int(v, lineNo, "output");
                else if (key_value(toks[i], "cap", v)) c.andOmegaCap = parse_int(v, lineNo, "cap");
                else throw ParseError(lineNo, "unknown header field '" + toks[i] + "'");
            }
            continue;
        }
        if (!sawHeader) throw ParseError(lineNo, "expected 'circuit' header first");
        if (toks[0] == "gate") {
            if (toks.size() < 5) throw ParseError(lineNo, "gate line needs id layer index kind");
            Gate g;
            g.id = parse_int(toks[1], lineNo, "gate id");
            g.layer = parse_int(toks[2], lineNo, "layer");
            g.index = parse_int(toks[3], lineNo, "index");
            try {
                g.kind = gate_kind_from_name(toks[4]);
            } catch (const CircuitError& e) {
                throw ParseError(lineNo, e.what());
            }
            std::string v;
            for (std::size_t i = 5; i < toks.size(); ++i) {
                if (key_value(toks[i], "var", v)) g.var = parse_int(v, lineNo, "var");
                else if (key_value(toks[i], "in", v)) g.inputs = parse_id_list(v, lineNo);
                else throw ParseError(lineNo, "unknown gate field '" + toks[i] + "'");
            }
            if (c.gates.count(g.id)) throw ParseError(lineNo, "duplicate gate id");
            c.gates.emplace(g.id, std::move(g));
            continue;
        }
        if (toks[0] == "block") {
            CascadingBlock d;
            int top = -1;
            std::string v;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (key_value(toks[i], "top", v)) top = parse_int(v, lineNo, "top");
                else if (key_value(toks[i], "members", v)) d.members = parse_id_list(v, lineNo);
                else throw ParseError(lineNo, "unknown block field '" + toks[i] + "'");
            }
            if (d.members.empty()) throw ParseError(lineNo, "block needs members");
            if (top >= 0 &&
                std::find(d.members.begin(), d.members.end(), top) == d.members.end())
                throw ParseError(lineNo, "block top must be a member");
            d.topGate = top;
            c.blocks.push_back(std::move(d));
            continue;
        }
        throw ParseError(lineNo, "unknown directive '" + toks[0] + "'");
    }
    if (!sawHeader) throw ParseError(lineNo, "missing circuit header");
    for (auto& d : c.blocks) {
        try {
            d = analyze_block(c, d);
        } catch (const CircuitError&) {
            // leave derived fields unset; validators will report
        }
    }
    return c;
}

Circuit parse_circuit_string(const std::string& text) {
    std::istringstream is(text);
    return parse_circuit(is);
}

Circuit parse_circuit_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CircuitError("cannot open circuit file: " + path);
    return parse_circuit(is);
}

std::string print_circuit(const Circuit& c) {
    std::ostringstream os;
    os << "circuit nvars=" << c.nVars << " output=" << c.output;
    if (c.andOmegaCap != 3) os << " cap=" << c.andOmegaCap;
    os << "\n";
    for (const auto& [id, g] : c.gates) {
        os << "gate " << id << " " << g.layer << " " << g.index << " "
           << gate_kind_name(g.kind);
        if (kind_is_leaf(g.kind)) os << " var=" << g.var;
        if (!g.inputs.empty()) {
            os << " in=";
            for (std::size_t i = 0; i < g.inputs.size(); ++i)
                os << (i ? "," : "") << g.inputs[i];
        }
        os << "\n";
    }
    for (const auto& d : c.blocks) {
        int top = d.topGate >= 0 ? d.topGate : d.members.front();
        os << "block top=" << top << " members=";
        for (std::size_t i = 0; i < d.members.size(); ++i)
            os << (i ? "," : "") << d.members[i];
        os << "\n";
    }
    return os.str();
}

}  // namespace storax
