#include "storax/corpus.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace storax {

namespace {

// Appends a rule that never touches the work tape (work head parked on its
// left endmarker, keeping it).  All corpus machines use the storage tape only.
void rule(MachineSpec& m, StateId from, SymId in, SymId st, StateId to, SymId stW,
          int d1, int d3) {
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
}

std::string rev_str(std::string s) {
    std::reverse(s.begin(), s.end());
    return s;
}

std::string xor_str(const std::string& a, const std::string& b) {
    std::string r(a.size(), '0');
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] != b[i] ? '1' : '0';
    return r;
}

bool binary_word(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

bool xor_rec(const KxorInstance& inst, int next, int count, const std::string& acc) {
    if (count == inst.k) return acc == inst.e;
    for (int i = next; i < (int)inst.blocks.size(); ++i) {
        int term = count + 1;  // 1-based position in the chain
        std::string t = term % 2 == 1 ? rev_str(inst.blocks[i]) : inst.blocks[i];
        std::string nacc = count == 0 ? t : xor_str(acc, t);
        if (xor_rec(inst, i + 1, count + 1, nacc)) return true;
    }
    return false;
}

}  // namespace

// --- k-XOR instances -------------------------------------------------------------

std::string kxor_render(const KxorInstance& inst) {
    std::string s = inst.e;
    for (const auto& b : inst.blocks) {
        s += '#';
        s += b;
    }
    return s;
}

bool kxor_valid(const KxorInstance& inst) {
    std::size_t n = inst.e.size();
    if (n == 0 || inst.k < 1) return false;
    if (inst.blocks.size() != n) return false;
    if (!binary_word(inst.e)) return false;
    for (const auto& b : inst.blocks)
        if (b.size() != n || !binary_word(b)) return false;
    return true;
}

bool kxor_oracle(const KxorInstance& inst) {
    if (!kxor_valid(inst)) return false;
    int n = (int)inst.e.size();
    int k = inst.k;
    if (k > n) return false;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::string v = rev_str(inst.blocks[idx[0]]);
        for (int j = 1; j < k; ++j) {
            const std::string& a = inst.blocks[idx[j]];
            v = xor_str(v, j % 2 == 0 ? rev_str(a) : a);
        }
        if (v == inst.e) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return false;
}

bool kxor_oracle_alt(const KxorInstance& inst) {
    if (!kxor_valid(inst)) return false;
    if (inst.k > (int)inst.e.size()) return false;
    return xor_rec(inst, 0, 0, "");
}

std::vector<KxorInstance> kxor_all_instances(int n, int k) {
    std::vector<std::string> words;
    for (int v = 0; v < (1 << n); ++v) {
        std::string w(n, '0');
        for (int i = 0; i < n; ++i)
            if (v & (1 << (n - 1 - i))) w[i] = '1';
        words.push_back(w);
    }
    std::vector<KxorInstance> out;
    std::vector<int> slot(n, 0);
    for (const auto& e : words) {
        std::fill(slot.begin(), slot.end(), 0);
        while (true) {
            KxorInstance inst;
            inst.e = e;
            inst.k = k;
            for (int i = 0; i < n; ++i) inst.blocks.push_back(words[slot[i]]);
            out.push_back(std::move(inst));
            int i = n - 1;
            while (i >= 0 && slot[i] == (int)words.size() - 1) slot[i--] = 0;
            if (i < 0) break;
            ++slot[i];
        }
    }
    return out;
}

// --- k-XOR machine ---------------------------------------------------------------

MachineSpec make_kxor_machine(int k) {
    if (k < 1) throw std::invalid_argument("make_kxor_machine: k must be >= 1");
    const int K = k + 1;
    MachineSpec m(MachineKind::Sna, K, "kxor" + std::to_string(k));

    SymId bit[2];
    bit[0] = m.add_input("0");
    bit[1] = m.add_input("1");
    SymId hash = m.add_input("#");

    // V[j][b]: bit b of the j-th partial fold, at depth j.  M[d]: boundary
    // marker written at depth d.
    std::vector<std::array<SymId, 2>> V(k + 1);
    for (int j = 1; j <= k; ++j) {
        V[j][0] = m.add_stor("v0d" + std::to_string(j), j);
        V[j][1] = m.add_stor("v1d" + std::to_string(j), j);
    }
    std::vector<SymId> M(k + 1);
    for (int d = 1; d <= k; ++d) M[d] = m.add_stor("m" + std::to_string(d), d);
    auto msym = [&](int d) { return d >= K ? st_frozen : M[d]; };

    StateId s0 = m.add_state("s0");
    StateId cpE = m.add_state("cp");
    std::vector<StateId> skp(k), fld(k + 1);
    for (int f = 0; f < k; ++f) skp[f] = m.add_state("skp" + std::to_string(f));
    for (int j = 1; j <= k; ++j) fld[j] = m.add_state("fld" + std::to_string(j));
    StateId qacc = m.add_state("acc", true);
    m.initial = s0;

    // Copy e into cells 1..n, then stand on the boundary blank at the first '#'.
    rule(m, s0, in_lend, st_lend, cpE, st_lend, +1, +1);
    for (int b = 0; b < 2; ++b) rule(m, cpE, bit[b], st_blank, cpE, V[1][b], +1, +1);
    // First decision: skip block 1 (park on the boundary) or fold it (turn left).
    rule(m, cpE, hash, st_blank, skp[0], M[1], +1, 0);
    rule(m, cpE, hash, st_blank, fld[1], msym(2), +1, -1);

    // Skip states: storage parked (on the boundary for even fold counts, on the
    // left endmarker for odd counts) while the input head passes whole blocks.
    for (int f = 0; f < k; ++f) {
        if (f % 2 == 0) {
            for (int d = 1; d <= k; ++d) {
                for (int b = 0; b < 2; ++b)
                    rule(m, skp[f], bit[b], M[d], skp[f], M[d], +1, 0);
                rule(m, skp[f], hash, M[d], skp[f], M[d], +1, 0);
                rule(m, skp[f], hash, M[d], fld[f + 1], msym(std::min(d + 1, K)), +1, -1);
            }
        } else {
            for (int b = 0; b < 2; ++b)
                rule(m, skp[f], bit[b], st_lend, skp[f], st_lend, +1, 0);
            rule(m, skp[f], hash, st_lend, skp[f], st_lend, +1, 0);
            rule(m, skp[f], hash, st_lend, fld[f + 1], st_lend, +1, +1);
        }
    }

    // Fold states: fold j reads one block left-to-right while the storage head
    // sweeps the mirror cells (left for odd j, right for even j), xoring the
    // block into the stored word.  The final fold checks for all-zero instead.
    for (int j = 1; j <= k; ++j) {
        int dir = j % 2 == 1 ? -1 : +1;
        if (j < k) {
            for (int s = 0; s < 2; ++s)
                for (int b = 0; b < 2; ++b)
                    rule(m, fld[j], bit[s], V[j][b], fld[j], V[j + 1][s ^ b], +1, dir);
            if (j % 2 == 1) {
                rule(m, fld[j], hash, st_lend, skp[j], st_lend, +1, 0);
                rule(m, fld[j], hash, st_lend, fld[j + 1], st_lend, +1, +1);
            } else {
                for (int d = 1; d <= k; ++d) {
                    rule(m, fld[j], hash, M[d], skp[j], msym(std::min(d + 1, K)), +1, 0);
                    rule(m, fld[j], hash, M[d], fld[j + 1], msym(std::min(d + 2, K)), +1, -1);
                }
            }
        } else {
            for (int s = 0; s < 2; ++s)
                rule(m, fld[k], bit[s], V[k][s], fld[k], st_frozen, +1, dir);
            if (k % 2 == 1) {
                rule(m, fld[k], hash, st_lend, qacc, st_lend, 0, +1);
                rule(m, fld[k], in_rend, st_lend, qacc, st_lend, 0, +1);
            } else {
                for (int d = 1; d <= k; ++d) {
                    rule(m, fld[k], hash, M[d], qacc, msym(std::min(d + 2, K)), 0, -1);
                    rule(m, fld[k], in_rend, M[d], qacc, msym(std::min(d + 2, K)), 0, -1);
                }
            }
        }
    }
    return m;
}

// --- Small fixed machines ----------------------------------------------------------

MachineSpec make_anbn_sda2() {
    MachineSpec m(MachineKind::Sda, 2, "anbn");
    SymId a = m.add_input("a");
    SymId b = m.add_input("b");
    SymId P = m.add_stor("P", 1);
    SymId A = m.add_stor("A", 1);
    StateId s0 = m.add_state("s0");
    StateId s1 = m.add_state("s1");
    StateId raf = m.add_state("raf");
    StateId ra = m.add_state("ra");
    StateId mb = m.add_state("mb");
    StateId qacc = m.add_state("acc", true);
    m.initial = s0;
    // Input symbol i sits over storage cell i+1: park the input head first so
    // the head never advances while scanning a full-depth symbol.
    rule(m, s0, in_lend, st_lend, s1, st_lend, 0, +1);
    rule(m, s1, in_lend, st_blank, raf, P, +1, +1);
    rule(m, raf, in_rend, st_blank, qacc, st_frozen, 0, -1);
    rule(m, raf, a, st_blank, ra, A, +1, +1);
    rule(m, raf, b, st_blank, mb, st_frozen, 0, -1);
    rule(m, ra, a, st_blank, ra, A, +1, +1);
    rule(m, ra, b, st_blank, mb, st_frozen, 0, -1);
    rule(m, mb, b, A, mb, st_frozen, +1, -1);
    rule(m, mb, in_rend, P, qacc, st_frozen, 0, -1);
    return m;
}

MachineSpec make_labc_machine() {
    MachineSpec m(MachineKind::Sda, 4, "labc");
    SymId a = m.add_input("a");
    SymId b = m.add_input("b");
    SymId c = m.add_input("c");
    SymId P1 = m.add_stor("P1", 1);
    SymId P3 = m.add_stor("P3", 3);
    SymId A = m.add_stor("A", 1);
    SymId M = m.add_stor("M", 2);
    SymId X = m.add_stor("X", 2);
    SymId Y = m.add_stor("Y", 3);
    StateId s0 = m.add_state("s0");
    StateId s1 = m.add_state("s1");
    StateId ra1 = m.add_state("ra1");
    StateId ra = m.add_state("ra");
    StateId rb = m.add_state("rb");
    StateId rc = m.add_state("rc");
    StateId rd = m.add_state("rd");
    StateId qacc = m.add_state("acc", true);
    m.initial = s0;
    rule(m, s0, in_lend, st_lend, s1, st_lend, 0, +1);
    rule(m, s1, in_lend, st_blank, ra1, P1, +1, +1);
    rule(m, ra1, a, st_blank, ra, A, +1, +1);
    rule(m, ra, a, st_blank, ra, A, +1, +1);
    rule(m, ra, b, st_blank, rb, M, 0, -1);
    rule(m, rb, b, A, rb, X, +1, -1);
    rule(m, rb, c, P1, rc, P3, 0, +1);
    rule(m, rc, c, X, rc, Y, +1, +1);
    rule(m, rc, c, M, rd, st_frozen, 0, -1);
    rule(m, rd, c, Y, rd, st_frozen, +1, -1);
    rule(m, rd, in_rend, P3, qacc, st_frozen, 0, -1);
    return m;
}

MachineSpec make_rtr_demo() {
    MachineSpec m(MachineKind::Sda, 5, "rtrdemo");
    SymId a = m.add_input("a");
    SymId S1 = m.add_stor("S1", 1);
    SymId S2 = m.add_stor("S2", 2);
    SymId S3 = m.add_stor("S3", 3);
    SymId S4 = m.add_stor("S4", 4);
    SymId T2 = m.add_stor("T2", 2);
    SymId T4 = m.add_stor("T4", 4);
    SymId M2 = m.add_stor("M2", 2);
    StateId s0 = m.add_state("s0");
    StateId q1 = m.add_state("q1");
    StateId p1 = m.add_state("p1");
    StateId p2 = m.add_state("p2");
    StateId p3 = m.add_state("p3");
    StateId p4 = m.add_state("p4");
    StateId p5 = m.add_state("p5");
    StateId p6 = m.add_state("p6");
    StateId qacc = m.add_state("acc", true);
    m.initial = s0;
    // Bounces between cells 1 and 2; the two returns to cell 1 are right turns,
    // so paths on "aaa" and longer exhibit a second right turn at cell 1.
    rule(m, s0, in_lend, st_lend, q1, st_lend, 0, +1);
    rule(m, q1, in_lend, st_blank, p1, S1, +1, +1);
    rule(m, p1, a, st_blank, p2, T2, +1, -1);
    rule(m, p2, a, S1, p3, S3, +1, +1);
    rule(m, p2, in_rend, S1, qacc, S2, 0, -1);
    rule(m, p3, a, T2, p4, T4, +1, -1);
    rule(m, p4, a, S3, p5, st_frozen, +1, +1);
    rule(m, p4, in_rend, S3, qacc, S4, 0, -1);
    rule(m, p5, a, T4, p6, st_frozen, +1, +1);
    rule(m, p6, in_rend, st_blank, qacc, M2, 0, -1);
    return m;
}

PdaSpec make_dyck_dpda() {
    PdaSpec p;
    p.name = "dyck";
    int s = p.add_state("s");
    int acc = p.add_state("acc", true);
    int open = p.add_input("(");
    int close = p.add_input(")");
    int Z = p.add_stack("Z");
    int A = p.add_stack("A");
    p.initial = s;
    p.rules.push_back({s, open, Z, s, {Z, A}});
    p.rules.push_back({s, open, A, s, {A, A}});
    p.rules.push_back({s, close, A, s, {}});
    p.rules.push_back({s, pda_end, Z, acc, {Z}});
    return p;
}

MachineSpec make_contains_a_aux() {
    MachineSpec m(MachineKind::AuxSna, 2, "contains-a");
    SymId a = m.add_input("a");
    SymId b = m.add_input("b");
    SymId H = m.add_stor("H", 1);
    SymId C = m.add_stor("C", 1);
    StateId s0 = m.add_state("s0");
    StateId f1 = m.add_state("f1");
    StateId fn = m.add_state("fn");
    StateId fy = m.add_state("fy");
    StateId bn = m.add_state("bn");
    StateId by = m.add_state("by");
    StateId qacc = m.add_state("acc", true);
    m.initial = s0;
    // Forward sweep marks every cell once and records whether an 'a' was seen;
    // the backward sweep blanks the cells and accepts at the home position
    // only in the yes-branch.
    rule(m, s0, in_lend, st_lend, f1, st_lend, 0, +1);
    rule(m, f1, in_lend, st_blank, fn, H, +1, +1);
    rule(m, fn, a, st_blank, fy, C, +1, +1);
    rule(m, fn, b, st_blank, fn, C, +1, +1);
    rule(m, fy, a, st_blank, fy, C, +1, +1);
    rule(m, fy, b, st_blank, fy, C, +1, +1);
    rule(m, fn, in_rend, st_blank, bn, st_frozen, -1, -1);
    rule(m, fy, in_rend, st_blank, by, st_frozen, -1, -1);
    rule(m, bn, a, C, bn, st_frozen, -1, -1);
    rule(m, bn, b, C, bn, st_frozen, -1, -1);
    rule(m, by, a, C, by, st_frozen, -1, -1);
    rule(m, by, b, C, by, st_frozen, -1, -1);
    rule(m, by, in_lend, H, qacc, st_frozen, 0, -1);
    return m;
}

MachineSpec make_palindrome_aux() {
    MachineSpec m(MachineKind::AuxSna, 4, "palin");
    SymId a = m.add_input("a");
    SymId b = m.add_input("b");
    SymId H = m.add_stor("H", 1);
    SymId Ha = m.add_stor("Ha", 2);
    SymId Hb = m.add_stor("Hb", 2);
    SymId Ha3 = m.add_stor("Ha3", 3);
    SymId Hb3 = m.add_stor("Hb3", 3);
    SymId He = m.add_stor("He", 2);
    SymId M1 = m.add_stor("M1", 1);
    SymId M2 = m.add_stor("M2", 2);
    SymId Va = m.add_stor("Va", 1);
    SymId Vb = m.add_stor("Vb", 1);
    SymId Va2 = m.add_stor("Va2", 2);
    SymId Vb2 = m.add_stor("Vb2", 2);
    SymId Va3 = m.add_stor("Va3", 3);
    SymId Vb3 = m.add_stor("Vb3", 3);
    StateId s0 = m.add_state("s0");
    StateId s1 = m.add_state("s1");
    StateId cp0 = m.add_state("cp0");
    StateId cp = m.add_state("cp");
    StateId rw = m.add_state("rw");
    StateId cmp = m.add_state("cmp");
    StateId fw2 = m.add_state("fw2");
    StateId bw2 = m.add_state("bw2");
    StateId qacc = m.add_state("acc", true);
    m.initial = s0;
    // Copy the word into cells 2..n+1 (cell 1 holds the first letter), rewind
    // the input, then compare x[i] against cell n+2-i walking left.  A
    // nondeterministic right turn lets a second sweep re-cross the matched
    // suffix, so every interior cell sees two visits on accepting paths.
    rule(m, s0, in_lend, st_lend, s1, st_lend, 0, +1);
    rule(m, s1, in_lend, st_blank, cp0, H, +1, 0);
    rule(m, cp0, in_rend, H, qacc, He, -1, -1);
    rule(m, cp0, a, H, cp, Ha, +1, +1);
    rule(m, cp0, b, H, cp, Hb, +1, +1);
    rule(m, cp, a, st_blank, cp, Va, +1, +1);
    rule(m, cp, b, st_blank, cp, Vb, +1, +1);
    rule(m, cp, in_rend, st_blank, rw, M1, -1, 0);
    rule(m, rw, a, M1, rw, M1, -1, 0);
    rule(m, rw, b, M1, rw, M1, -1, 0);
    rule(m, rw, in_lend, M1, cmp, M2, +1, -1);
    rule(m, cmp, a, Va, cmp, Va2, +1, -1);
    rule(m, cmp, b, Vb, cmp, Vb2, +1, -1);
    rule(m, cmp, a, Va, fw2, Va3, +1, +1);
    rule(m, cmp, b, Vb, fw2, Vb3, +1, +1);
    rule(m, cmp, a, Ha, qacc, Ha3, -1, -1);
    rule(m, cmp, b, Hb, qacc, Hb3, -1, -1);
    for (SymId in : {a, b, (SymId)in_rend}) {
        rule(m, fw2, in, Va2, fw2, Va3, 0, +1);
        rule(m, fw2, in, Vb2, fw2, Vb3, 0, +1);
        rule(m, fw2, in, M2, bw2, st_frozen, 0, -1);
    }
    rule(m, bw2, a, Va3, bw2, st_frozen, -1, -1);
    rule(m, bw2, b, Vb3, bw2, st_frozen, -1, -1);
    rule(m, bw2, a, Ha, qacc, Ha3, -1, -1);
    rule(m, bw2, b, Hb, qacc, Hb3, -1, -1);
    return m;
}

// --- Corpus lists and reference predicates -----------------------------------------

std::vector<MachineSpec> fbs_machines() {
    std::vector<MachineSpec> v;
    v.push_back(make_anbn_sda2());
    v.push_back(make_labc_machine());
    v.push_back(make_rtr_demo());
    v.push_back(make_kxor_machine(1));
    return v;
}

std::vector<MachineSpec> nfbt_machines() {
    std::vector<MachineSpec> v;
    v.push_back(make_anbn_sda2());
    v.push_back(make_labc_machine());
    v.push_back(make_rtr_demo());
    v.push_back(make_kxor_machine(1));
    v.push_back(make_kxor_machine(2));
    v.push_back(make_contains_a_aux());
    v.push_back(make_palindrome_aux());
    return v;
}

bool anbn_member(const std::string& w) {
    std::size_t n = w.size() / 2;
    if (w.size() != 2 * n) return false;
    return w == std::string(n, 'a') + std::string(n, 'b');
}

bool labc_member(const std::string& w) {
    std::size_t n = 0;
    while (n < w.size() && w[n] == 'a') ++n;
    if (n == 0) return false;
    return w == std::string(n, 'a') + std::string(n, 'b') + std::string(2 * n, 'c');
}

bool dyck_member(const std::string& w) {
    long depth = 0;
    for (char c : w) {
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else return false;
        if (depth < 0) return false;
    }
    return depth == 0;
}

bool rtr_demo_member(const std::string& w) {
    if (!std::all_of(w.begin(), w.end(), [](char c) { return c == 'a'; })) return false;
    return w.size() == 1 || w.size() == 3 || w.size() == 5;
}

bool contains_a_member(const std::string& w) {
    return w.find('a') != std::string::npos;
}

bool palindrome_member(const std::string& w) {
    return std::equal(w.begin(), w.begin() + (long)(w.size() / 2), w.rbegin());
}

// --- Reference circuits --------------------------------------------------------------

namespace {

int addg(Circuit& c, int id, int layer, int index, GateKind kind,
         std::vector<int> inputs, int var = 0) {
    Gate g;
    g.id = id;
    g.layer = layer;
    g.index = index;
    g.kind = kind;
    g.inputs = std::move(inputs);
    g.var = var;
    c.add_gate(g);
    return id;
}

void push_block(Circuit& c, std::vector<int> members) {
    CascadingBlock d;
    d.members = std::move(members);
    try {
        d = analyze_block(c, d);
    } catch (const CircuitError&) {
        // leave derived fields unset; validators will report
    }
    c.blocks.push_back(std::move(d));
}

}  // namespace

Circuit make_fig4_block_circuit() {
    Circuit c;
    c.nVars = 4;
    c.output = 9;
    addg(c, 9, 1, 1, GateKind::Or, {1});
    addg(c, 1, 2, 1, GateKind::AndOmega, {10});
    addg(c, 10, 3, 1, GateKind::COr, {11, 12});
    addg(c, 11, 4, 1, GateKind::CAnd, {2, 30});
    addg(c, 12, 4, 2, GateKind::CAnd, {3, 31});
    addg(c, 2, 5, 1, GateKind::AndOmega, {13});
    addg(c, 3, 5, 2, GateKind::AndOmega, {14});
    addg(c, 13, 6, 1, GateKind::COr, {15, 16, 17});
    addg(c, 14, 6, 2, GateKind::COr, {18, 19});
    addg(c, 15, 7, 1, GateKind::CAnd, {4, 32});
    addg(c, 16, 7, 2, GateKind::CAnd, {5, 33});
    addg(c, 17, 7, 3, GateKind::CAnd, {6, 34});
    addg(c, 18, 7, 4, GateKind::CAnd, {7, 35});
    addg(c, 19, 7, 5, GateKind::CAnd, {8, 36});
    addg(c, 4, 8, 1, GateKind::AndOmega, {37});
    addg(c, 5, 8, 2, GateKind::AndOmega, {38});
    addg(c, 6, 8, 3, GateKind::AndOmega, {39});
    addg(c, 7, 8, 4, GateKind::AndOmega, {40});
    addg(c, 8, 8, 5, GateKind::AndOmega, {41});
    for (int i = 0; i < 12; ++i) {
        GateKind kind = i % 5 == 4 ? GateKind::NegInput : GateKind::Input;
        addg(c, 30 + i, 9, 1 + i, kind, {}, 1 + i % 4);
    }
    push_block(c, {1, 10, 11, 12, 2, 3, 13, 14, 15, 16, 17, 18, 19, 4, 5, 6, 7, 8});
    return c;
}

Circuit make_fig5_circuit() {
    Circuit c;
    c.nVars = 4;
    c.output = 1;
    addg(c, 1, 1, 1, GateKind::Or, {2, 5});
    addg(c, 2, 2, 1, GateKind::And, {28, 3});
    addg(c, 5, 2, 2, GateKind::And, {51, 6});
    addg(c, 28, 3, 1, GateKind::AndOmega, {17, 70});
    addg(c, 3, 3, 2, GateKind::Or, {12, 13, 14, 15, 16});
    addg(c, 51, 3, 3, GateKind::AndOmega, {27, 71});
    addg(c, 6, 3, 4, GateKind::Or, {25, 26});
    addg(c, 17, 4, 1, GateKind::COr, {18});
    addg(c, 12, 4, 2, GateKind::Or, {11});
    addg(c, 13, 4, 3, GateKind::Or, {22});
    addg(c, 14, 4, 4, GateKind::Or, {23});
    addg(c, 15, 4, 5, GateKind::Or, {41});
    addg(c, 27, 4, 6, GateKind::COr, {29});
    addg(c, 26, 4, 7, GateKind::Or, {61});
    addg(c, 18, 5, 1, GateKind::CAnd, {31, 72});
    addg(c, 29, 5, 2, GateKind::CAnd, {54, 73});
    addg(c, 11, 5, 3, GateKind::AndOmega, {20, 85});
    addg(c, 16, 5, 4, GateKind::Or, {31});
    addg(c, 25, 5, 5, GateKind::Or, {54});
    addg(c, 61, 5, 6, GateKind::AndOmega, {79});
    addg(c, 31, 6, 1, GateKind::AndOmega, {19, 76});
    addg(c, 20, 6, 2, GateKind::COr, {21, 24});
    addg(c, 54, 6, 3, GateKind::AndOmega, {30, 77});
    addg(c, 41, 6, 4, GateKind::AndOmega, {78});
    addg(c, 21, 7, 1, GateKind::CAnd, {22, 74});
    addg(c, 24, 7, 2, GateKind::CAnd, {23, 75});
    addg(c, 19, 7, 3, GateKind::Or, {83});
    addg(c, 30, 7, 4, GateKind::Or, {84});
    addg(c, 22, 8, 1, GateKind::AndOmega, {80, 81});
    addg(c, 23, 8, 2, GateKind::AndOmega, {82});
    for (int i = 0; i < 16; ++i) {
        GateKind kind = (70 + i == 74 || 70 + i == 75) ? GateKind::NegInput
                                                       : GateKind::Input;
        addg(c, 70 + i, 9, 1 + i, kind, {}, 1 + i % 4);
    }
    push_block(c, {11, 20, 21, 24, 22, 23});
    push_block(c, {28, 17, 18, 31});
    push_block(c, {51, 27, 29, 54});
    push_block(c, {61});
    push_block(c, {41});
    return c;
}

// --- Random cascading circuits --------------------------------------------------------

namespace {

struct GenCtx {
    Circuit c;
    std::mt19937_64 rng;
    int nVars = 2;
    int nextId = 1;
    std::vector<int> width;  // next free index per layer

    int draw(int lo, int hi) { return lo + (int)(rng() % (std::uint64_t)(hi - lo + 1)); }

    int add(int layer, GateKind kind, std::vector<int> inputs, int var = 0) {
        if ((int)width.size() <= layer) width.resize(layer + 1, 0);
        Gate g;
        g.id = nextId++;
        g.layer = layer;
        g.index = ++width[layer];
        g.kind = kind;
        g.inputs = std::move(inputs);
        g.var = var;
        c.add_gate(g);
        return g.id;
    }

    int leaf(int layer) {
        GateKind kind = draw(0, 3) == 0 ? GateKind::NegInput : GateKind::Input;
        return add(layer, kind, {}, draw(1, nVars));
    }

    void wire(int parent, int child) { c.gate(parent).inputs.push_back(child); }
};

constexpr int leaf_layer = 9;

}  // namespace

Circuit random_cascading_circuit(const CircuitGenParams& params, std::uint64_t seed) {
    if (params.nVars < 1 || params.k < 1 || params.maxSemis < 1)
        throw std::invalid_argument("random_cascading_circuit: bad parameters");
    GenCtx ctx;
    ctx.rng.seed(seed);
    ctx.nVars = params.nVars;
    ctx.c.nVars = params.nVars;

    int semis = params.chainOnly ? params.maxSemis : ctx.draw(1, params.maxSemis);
    int out = ctx.add(1, GateKind::Or, {});
    ctx.c.output = out;

    for (int s = 0; s < semis; ++s) {
        int root = ctx.add(2, GateKind::And, {});
        ctx.wire(out, root);
        bool chain = params.k >= 2 && (params.chainOnly || ctx.draw(0, 3) != 0);
        if (chain) {
            // Two-link block: AndOmega - COr - CAnd - AndOmega, plus an
            // unlinked Or path so the lower link has a second consumer.
            int gL = ctx.add(3, GateKind::Or, {});
            int gR = ctx.add(3, GateKind::Or, {});
            ctx.wire(root, gL);
            ctx.wire(root, gR);
            int m1 = ctx.add(4, GateKind::AndOmega, {});
            int q = ctx.add(4, GateKind::Or, {});
            int cc = ctx.add(5, GateKind::COr, {});
            int dd = ctx.add(6, GateKind::CAnd, {});
            int m2 = ctx.add(7, GateKind::AndOmega, {});
            int w = ctx.add(8, GateKind::Or, {});
            ctx.wire(gL, m1);
            ctx.wire(gR, q);
            ctx.wire(q, m2);
            ctx.wire(m1, cc);
            ctx.wire(cc, dd);
            ctx.wire(dd, m2);
            ctx.wire(dd, ctx.leaf(leaf_layer));
            ctx.wire(m2, w);
            if (!params.chainOnly) {
                int extra1 = std::min(params.maxExtraLeaves, ctx.c.andOmegaCap - 1);
                int extra2 = std::min(params.maxExtraLeaves, ctx.c.andOmegaCap - 1);
                for (int e = ctx.draw(0, extra1); e > 0; --e)
                    ctx.wire(m1, ctx.leaf(leaf_layer));
                for (int e = ctx.draw(0, extra2); e > 0; --e)
                    ctx.wire(m2, ctx.leaf(leaf_layer));
            }
            for (int e = ctx.draw(1, 3); e > 0; --e) ctx.wire(w, ctx.leaf(leaf_layer));
            push_block(ctx.c, {m1, cc, dd, m2});
        } else {
            // Two singleton blocks under separate Or branches.
            int gL = ctx.add(3, GateKind::Or, {});
            int gR = ctx.add(3, GateKind::Or, {});
            ctx.wire(root, gL);
            ctx.wire(root, gR);
            int a1 = ctx.add(4, GateKind::AndOmega, {});
            int a2 = ctx.add(4, GateKind::AndOmega, {});
            ctx.wire(gL, a1);
            ctx.wire(gR, a2);
            for (int e = ctx.draw(1, 3); e > 0; --e) ctx.wire(a1, ctx.leaf(leaf_layer));
            for (int e = ctx.draw(1, 3); e > 0; --e) ctx.wire(a2, ctx.leaf(leaf_layer));
            push_block(ctx.c, {a1});
            push_block(ctx.c, {a2});
        }
    }
    return ctx.c;
}

// --- Planted-fault mutants -------------------------------------------------------------

namespace {

struct ChainPieces {
    int root = -1, gL = -1, gR = -1, m1 = -1, q = -1, cc = -1, dd = -1, m2 = -1, w = -1;
};

int sole_consumer_of_kind(const Circuit& c, const std::map<int, std::vector<int>>& cons,
                          int id, GateKind kind) {
    auto it = cons.find(id);
    if (it != cons.end())
        for (int h : it->second)
            if (c.gate(h).kind == kind) return h;
    throw std::invalid_argument("mutate_circuit: base circuit has unexpected shape");
}

ChainPieces find_chain(const Circuit& c, int blockIdx) {
    if (blockIdx >= (int)c.blocks.size())
        throw std::invalid_argument("mutate_circuit: base circuit needs a chain block");
    const CascadingBlock& b = c.blocks[blockIdx];
    if (b.members.size() != 4)
        throw std::invalid_argument("mutate_circuit: base block is not a two-link chain");
    ChainPieces p;
    for (int m : b.members) {
        switch (c.gate(m).kind) {
            case GateKind::COr: p.cc = m; break;
            case GateKind::CAnd: p.dd = m; break;
            case GateKind::AndOmega:
                if (p.m1 < 0) p.m1 = m;
                else if (c.gate(m).layer > c.gate(p.m1).layer) p.m2 = m;
                else { p.m2 = p.m1; p.m1 = m; }
                break;
            default:
                throw std::invalid_argument("mutate_circuit: unexpected member kind");
        }
    }
    auto cons = c.consumers();
    p.q = sole_consumer_of_kind(c, cons, p.m2, GateKind::Or);
    p.gL = sole_consumer_of_kind(c, cons, p.m1, GateKind::Or);
    p.gR = sole_consumer_of_kind(c, cons, p.q, GateKind::Or);
    p.root = sole_consumer_of_kind(c, cons, p.gL, GateKind::And);
    for (int in : c.gate(p.m2).inputs)
        if (c.gate(in).kind == GateKind::Or) p.w = in;
    if (p.w < 0) throw std::invalid_argument("mutate_circuit: chain lacks its Or tail");
    return p;
}

struct MutCtx {
    Circuit c;
    int nextId;

    explicit MutCtx(Circuit base) : c(std::move(base)) {
        nextId = c.gates.empty() ? 1 : c.gates.rbegin()->first + 1;
    }

    int next_index(int layer) {
        int idx = 0;
        for (const auto& [id, g] : c.gates)
            if (g.layer == layer) idx = std::max(idx, g.index);
        return idx + 1;
    }

    int add(int layer, GateKind kind, std::vector<int> inputs, int var = 0) {
        Gate g;
        g.id = nextId++;
        g.layer = layer;
        g.index = next_index(layer);
        g.kind = kind;
        g.inputs = std::move(inputs);
        g.var = var;
        c.add_gate(g);
        return g.id;
    }

    int leaf(int layer) { return add(layer, GateKind::Input, {}, 1); }

    // Re-assigns per-layer indices 1..n preserving the existing order, after
    // mutations that move gates between layers.
    void reindex() {
        std::map<int, std::vector<std::pair<std::pair<int, int>, int>>> byLayer;
        for (const auto& [id, g] : c.gates)
            byLayer[g.layer].push_back({{g.index, id}, id});
        for (auto& [layer, v] : byLayer) {
            std::sort(v.begin(), v.end());
            int idx = 0;
            for (auto& e : v) c.gate(e.second).index = ++idx;
        }
    }
};

}  // namespace

PlantedFault mutate_circuit(const Circuit& base, int kind) {
    if (kind < 0 || kind >= mutation_kind_count)
        throw std::invalid_argument("mutate_circuit: kind out of range");
    MutCtx ctx(base);
    Circuit& c = ctx.c;
    ChainPieces p = find_chain(c, 0);
    PlantedFault out;
    switch (kind) {
        case 0:  // wire that does not go to a deeper layer
            c.gate(p.w).inputs.push_back(p.w);
            out.code = "G-wire";
            break;
        case 1:  // CAnd fan-in 3
            c.gate(p.dd).inputs.push_back(ctx.leaf(leaf_layer));
            out.code = "G-arity";
            break;
        case 2:  // duplicate index within a layer
            c.gate(p.gR).index = c.gate(p.gL).index;
            out.code = "G-index";
            break;
        case 3:  // inner Or with fan-out 2
            c.gate(c.output).inputs.push_back(p.w);
            out.code = "G-fanout";
            break;
        case 4:  // plain Or listed as a block member
            c.blocks[0].members.push_back(p.gL);
            out.code = "G-block";
            break;
        case 5: {  // third AndOmega member hanging off the Or tail
            int m3 = ctx.add(10, GateKind::AndOmega, {});
            int v = ctx.add(9, GateKind::Or, {m3});
            c.gate(m3).inputs.push_back(ctx.leaf(11));
            c.gate(p.w).inputs.push_back(v);
            c.blocks[0].members.push_back(m3);
            out.code = "B2";
            break;
        }
        case 6:  // lower link AndOmega one layer too deep
            c.gate(p.m2).layer = 8;
            c.gate(p.w).layer = 9;
            for (int in : c.gate(p.w).inputs) c.gate(in).layer = 10;
            ctx.reindex();
            out.code = "B3";
            break;
        case 7: {  // CAnd no longer feeds on the lower AndOmega
            for (int& in : c.gate(p.dd).inputs)
                if (in == p.m2) in = ctx.leaf(leaf_layer);
            out.code = "B6";
            break;
        }
        case 8:  // block member is not leftmost on its layer
            std::swap(c.gate(p.m1).index, c.gate(p.q).index);
            out.code = "S2";
            break;
        case 9:  // Or branching outside the blocks
            c.gate(p.gR).inputs.push_back(ctx.leaf(leaf_layer));
            out.code = "S3";
            break;
        case 10: {  // upper AndOmega with three leafless inputs
            int e2 = ctx.add(5, GateKind::Or, {ctx.leaf(leaf_layer)});
            int e3 = ctx.add(5, GateKind::Or, {ctx.leaf(leaf_layer)});
            c.gate(p.m1).inputs = {p.cc, e2, e3};
            out.code = "S6";
            break;
        }
        case 11: {  // lower AndOmega consumed by two chains
            int d2 = ctx.add(6, GateKind::CAnd, {p.m2, ctx.leaf(leaf_layer)});
            int c2 = ctx.add(5, GateKind::COr, {d2});
            c.gate(p.m1).inputs = {p.cc, c2};
            c.blocks[0].members.push_back(c2);
            c.blocks[0].members.push_back(d2);
            out.code = "S7";
            break;
        }
        case 12: {  // leafless fan-in 2 right of the block on a member layer
            int o1 = ctx.add(8, GateKind::Or, {ctx.leaf(leaf_layer)});
            int o2 = ctx.add(8, GateKind::Or, {ctx.leaf(leaf_layer)});
            int g10 = ctx.add(7, GateKind::And, {o1, o2});
            c.gate(p.m1).inputs = {p.cc, g10};
            out.code = "S10";
            break;
        }
        case 13: {  // lower AndOmega grows a second leafless input
            int e4 = ctx.add(8, GateKind::Or, {ctx.leaf(leaf_layer)});
            c.gate(p.m2).inputs.push_back(e4);
            out.code = "C4";
            break;
        }
        case 14: {  // three consecutive And gates under the lower AndOmega
            int a3 = ctx.add(10, GateKind::And, {});
            int a2 = ctx.add(9, GateKind::And, {a3, ctx.leaf(11)});
            int a1 = ctx.add(8, GateKind::And, {a2, ctx.leaf(11)});
            c.gate(p.w).layer = 11;
            for (int in : c.gate(p.w).inputs) c.gate(in).layer = 12;
            c.gate(a3).inputs = {p.w, ctx.leaf(11)};
            c.gate(p.m2).inputs = {a1};
            ctx.reindex();
            out.code = "C5";
            break;
        }
        case 15: {  // stray linked gate outside every block
            int sc = ctx.add(9, GateKind::COr, {ctx.leaf(10)});
            c.gate(p.w).inputs.push_back(sc);
            out.code = "C1";
            break;
        }
        case 16: {  // two semi-circuits sharing a gate
            ChainPieces p2 = find_chain(c, 1);
            int oldGuard = -1;
            for (int& in : c.gate(p2.dd).inputs)
                if (in != p2.m2 && oldGuard < 0) {
                    oldGuard = in;
                    in = p.m2;
                }
            c.gate(p2.w).inputs.push_back(oldGuard);
            out.code = "C2";
            break;
        }
        default:
            break;
    }
    out.circuit = std::move(c);
    return out;
}

}  // namespace storax
