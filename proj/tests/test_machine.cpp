#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "storax/machine.hpp"

using namespace storax;

namespace {

// One-way nondeterministic machine with k=3, storage X(1), Y(2), inputs a,b.
MachineSpec tiny3() {
    MachineSpec m(MachineKind::Sna, 3, "tiny3");
    m.add_state("q0");
    m.add_state("qa", true);
    m.add_input("a");
    m.add_input("b");
    m.add_stor("X", 1);
    m.add_stor("Y", 2);
    return m;
}

Configuration cfg_on(const MachineSpec& m, std::vector<SymId> storage, int l3, LastMove lm,
                     int l1 = 1) {
    Configuration c = initial_configuration(m);
    c.storage = std::move(storage);
    c.l3 = l3;
    c.lastMove = lm;
    c.l1 = l1;
    return c;
}

Rule mk(StateId from, SymId in, SymId st, StateId to, SymId stW, int d1, int d3) {
    Rule r;
    r.from = from;
    r.in = in;
    r.st = st;
    r.to = to;
    r.stW = stW;
    r.d1 = d1;
    r.d3 = d3;
    return r;
}

}  // namespace

TEST_CASE("reserved symbols and spec construction") {
    MachineSpec m = tiny3();
    CHECK(m.stor_id(">") == st_lend);
    CHECK(m.stor_id("_") == st_blank);
    CHECK(m.stor_id("B") == st_frozen);
    CHECK(m.depth_of(st_lend) == 3);
    CHECK(m.depth_of(st_blank) == 0);
    CHECK(m.depth_of(st_frozen) == 3);
    CHECK(m.input_id(">") == in_lend);
    CHECK(m.input_id("<") == in_rend);
    CHECK(m.input_id("a") == 2);
    CHECK(m.depth_of(m.stor_id("X")) == 1);
    CHECK(m.depth_of(m.stor_id("Y")) == 2);
    CHECK_THROWS_AS(m.add_stor("Z", 3), std::invalid_argument);
    CHECK_THROWS_AS(m.add_stor("Z", 0), std::invalid_argument);
}

TEST_CASE("initial configuration and tape accessors") {
    MachineSpec m = tiny3();
    Configuration c = initial_configuration(m);
    CHECK(c.state == m.initial);
    CHECK(c.l1 == 0);
    CHECK(c.l3 == 0);
    CHECK(c.lastMove == LastMove::Stationary);
    CHECK(storage_at(c, 0) == st_lend);
    CHECK(storage_at(c, 5) == st_blank);
    CHECK(work_at(c, 0) == wk_lend);
    CHECK(work_at(c, 3) == wk_blank);

    Word x = word_from_string(m, "aba");
    CHECK(input_at(x, 0) == in_lend);
    CHECK(input_at(x, 4) == in_rend);
    CHECK(input_at(x, 1) == m.input_id("a"));
    CHECK(input_at(x, 2) == m.input_id("b"));
    CHECK(word_to_string(m, x) == "aba");
    CHECK_THROWS_AS(word_from_string(m, "ax"), std::invalid_argument);
}

TEST_CASE("turn and stationary classification") {
    CHECK(classify_turn(LastMove::FromLeft, -1) == TurnKind::Left);
    CHECK(classify_turn(LastMove::FromRight, 1) == TurnKind::Right);
    CHECK(classify_turn(LastMove::FromLeft, 1) == TurnKind::None);
    CHECK(classify_turn(LastMove::Stationary, -1) == TurnKind::None);
    CHECK(classify_stationary(LastMove::Stationary, 0) == StationaryKind::Extrinsic);
    CHECK(classify_stationary(LastMove::FromRight, 0) == StationaryKind::Intrinsic);
    CHECK(classify_stationary(LastMove::FromLeft, 1) == StationaryKind::None);
    CHECK(mandated_depth(0, 3, TurnKind::None) == 1);
    CHECK(mandated_depth(1, 3, TurnKind::Left) == 3);
    CHECK(mandated_depth(2, 3, TurnKind::None) == 3);
    CHECK(mandated_depth(2, 3, TurnKind::Right) == 3);
}

TEST_CASE("strict write mandates") {
    MachineSpec m = tiny3();
    Word x = word_from_string(m, "a");
    SymId a = m.input_id("a"), X = m.stor_id("X"), Y = m.stor_id("Y");

    SUBCASE("plain pass over depth 1 writes exactly depth 2") {
        Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::FromLeft);
        Configuration d = step(m, x, c, mk(0, a, X, 0, Y, 0, 1));
        CHECK(storage_at(d, 1) == Y);
        CHECK(d.l3 == 2);
        CHECK(d.lastMove == LastMove::FromLeft);
        CHECK_THROWS_AS(step(m, x, c, mk(0, a, X, 0, X, 0, 1)), StepError);
        CHECK_THROWS_AS(step(m, x, c, mk(0, a, X, 0, st_frozen, 0, 1)), StepError);
    }
    SUBCASE("left turn over depth 1 writes exactly depth 3") {
        Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::FromLeft);
        Configuration d = step(m, x, c, mk(0, a, X, 0, st_frozen, 0, -1));
        CHECK(storage_at(d, 1) == st_frozen);
        CHECK(d.lastMove == LastMove::FromRight);
        try {
            step(m, x, c, mk(0, a, X, 0, Y, 0, -1));
            CHECK(false);
        } catch (const StepError& e) {
            CHECK(e.kind == StepErrorKind::DepthViolation);
        }
    }
    SUBCASE("a dwell breaks the turn: post-dwell departure uses the plain mandate") {
        Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::Stationary);
        Configuration d = step(m, x, c, mk(0, a, X, 0, Y, 0, -1));
        CHECK(storage_at(d, 1) == Y);
        CHECK_THROWS_AS(step(m, x, c, mk(0, a, X, 0, st_frozen, 0, -1)), StepError);
    }
    SUBCASE("intrinsic stationary write deepens by exactly one") {
        Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::FromLeft);
        Configuration d = step(m, x, c, mk(0, a, X, 0, Y, 1, 0));
        CHECK(storage_at(d, 1) == Y);
        CHECK(d.lastMove == LastMove::Stationary);
        CHECK_THROWS_AS(step(m, x, c, mk(0, a, X, 0, X, 1, 0)), StepError);
        CHECK_THROWS_AS(step(m, x, c, mk(0, a, X, 0, st_frozen, 1, 0)), StepError);
    }
    SUBCASE("extrinsic stationary keeps its symbol") {
        Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::Stationary);
        Configuration d = step(m, x, c, mk(0, a, X, 0, X, 1, 0));
        CHECK(storage_at(d, 1) == X);
        try {
            step(m, x, c, mk(0, a, X, 0, Y, 1, 0));
            CHECK(false);
        } catch (const StepError& e) {
            CHECK(e.kind == StepErrorKind::DepthViolation);
        }
    }
    SUBCASE("fresh blank cells take depth 1 on a pass") {
        Configuration c = cfg_on(m, {st_lend}, 1, LastMove::FromLeft);
        CHECK(storage_at(c, 1) == st_blank);
        Configuration d = step(m, x, c, mk(0, a, st_blank, 0, X, 0, 1));
        CHECK(storage_at(d, 1) == X);
        CHECK_THROWS_AS(step(m, x, c, mk(0, a, st_blank, 0, Y, 0, 1)), StepError);
    }
}

TEST_CASE("frozen cells and malformed moves") {
    MachineSpec m = tiny3();
    Word x = word_from_string(m, "a");
    SymId a = m.input_id("a"), X = m.stor_id("X");

    SUBCASE("depth-k cells are read-only") {
        Configuration c = cfg_on(m, {st_lend, st_frozen}, 1, LastMove::FromLeft);
        try {
            step(m, x, c, mk(0, a, st_frozen, 0, X, 0, 1));
            CHECK(false);
        } catch (const StepError& e) {
            CHECK(e.kind == StepErrorKind::FrozenWrite);
        }
        Configuration d = step(m, x, c, mk(0, a, st_frozen, 0, st_frozen, 0, 1));
        CHECK(storage_at(d, 1) == st_frozen);
    }
    SUBCASE("the storage endmarker is read-only and cannot be duplicated") {
        Configuration c = initial_configuration(m);
        c.l1 = 1;
        try {
            step(m, x, c, mk(0, a, st_lend, 0, st_frozen, 0, 1));
            CHECK(false);
        } catch (const StepError& e) {
            CHECK(e.kind == StepErrorKind::FrozenWrite);
        }
        Configuration on1 = cfg_on(m, {st_lend, X}, 1, LastMove::FromLeft);
        try {
            step(m, x, on1, mk(0, a, X, 0, st_lend, 0, 1));
            CHECK(false);
        } catch (const StepError& e) {
            CHECK(e.kind == StepErrorKind::MalformedMove);
        }
    }
    SUBCASE("head bounds") {
        Configuration c = initial_configuration(m);
        c.l1 = 1;
        try {
            step(m, x, c, mk(0, a, st_lend, 0, st_lend, 0, -1));
            CHECK(false);
        } catch (const StepError& e) {
            CHECK(e.kind == StepErrorKind::MalformedMove);
        }
        Configuration r = initial_configuration(m);
        r.l1 = 2;  // scanning right endmarker of "a"
        try {
            step(m, x, r, mk(0, in_rend, st_lend, 0, st_lend, 1, 0));
            CHECK(false);
        } catch (const StepError& e) {
            CHECK(e.kind == StepErrorKind::MalformedMove);
        }
    }
    SUBCASE("all-stationary steps need the relaxed flag") {
        Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::Stationary);
        try {
            step(m, x, c, mk(0, a, X, 1, X, 0, 0));
            CHECK(false);
        } catch (const StepError& e) {
            CHECK(e.kind == StepErrorKind::MalformedMove);
        }
        MachineSpec rx = tiny3();
        rx.relaxed = true;
        Configuration d = step(rx, x, c, mk(0, a, X, 1, X, 0, 0));
        CHECK(d.state == 1);
        CHECK(d.l3 == 1);
    }
    SUBCASE("halted configurations do not step") {
        Configuration c = initial_configuration(m);
        c.state = 1;  // accepting
        CHECK_THROWS_AS(step(m, x, c, mk(1, in_lend, st_lend, 0, st_lend, 1, 0)),
                        std::logic_error);
        CHECK(successors(m, x, c).empty());
    }
}

TEST_CASE("relaxed discipline widens writes without abandoning monotonicity") {
    MachineSpec m = tiny3();
    m.relaxed = true;
    Word x = word_from_string(m, "a");
    SymId a = m.input_id("a"), X = m.stor_id("X"), Y = m.stor_id("Y");

    Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::FromLeft);
    // Overshooting a plain pass up to depth k is allowed.
    CHECK(storage_at(step(m, x, c, mk(0, a, X, 0, st_frozen, 0, 1)), 1) == st_frozen);
    CHECK(storage_at(step(m, x, c, mk(0, a, X, 0, Y, 0, 1)), 1) == Y);
    // Undershooting is not.
    CHECK_THROWS_AS(step(m, x, c, mk(0, a, X, 0, X, 0, 1)), StepError);
    // Intrinsic stationary may keep or deepen.
    CHECK(storage_at(step(m, x, c, mk(0, a, X, 1, X, 1, 0)), 1) == X);
    CHECK(storage_at(step(m, x, c, mk(0, a, X, 1, st_frozen, 1, 0)), 1) == st_frozen);
    // Extrinsic stationary may deepen too.
    Configuration d = cfg_on(m, {st_lend, X}, 1, LastMove::Stationary);
    CHECK(storage_at(step(m, x, d, mk(0, a, X, 1, Y, 1, 0)), 1) == Y);
}

TEST_CASE("successors filter dynamically illegal rules silently") {
    MachineSpec m = tiny3();
    SymId a = m.input_id("a"), X = m.stor_id("X"), Y = m.stor_id("Y");
    m.rules.push_back(mk(0, a, X, 0, Y, 0, 1));          // legal pass
    m.rules.push_back(mk(0, a, X, 1, st_frozen, 0, 1));  // depth overshoot: filtered
    m.rules.push_back(mk(0, a, X, 1, Y, 0, -1));         // under-turn from FromLeft: filtered
    m.rules.push_back(mk(0, a, X, 1, st_frozen, 0, -1)); // legal left turn
    Word x = word_from_string(m, "a");
    Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::FromLeft);
    auto nxt = successors(m, x, c);
    REQUIRE(nxt.size() == 2);
    CHECK(nxt[0].l3 == 2);
    CHECK(nxt[1].l3 == 0);
    CHECK(nxt[1].state == 1);
    auto idx = applicable_rules(m, x, c);
    CHECK(idx == std::vector<int>{0, 3});

    Configuration dwell = cfg_on(m, {st_lend, X}, 1, LastMove::Stationary);
    auto nxt2 = successors(m, x, dwell);
    REQUIRE(nxt2.size() == 2);  // now the depth-2 leftward write is the legal one
    CHECK(nxt2[1].storage[1] == Y);
}

TEST_CASE("configurations canonicalize trailing blanks") {
    MachineSpec m = tiny3();
    Word x = word_from_string(m, "a");
    SymId a = m.input_id("a"), X = m.stor_id("X");
    Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::FromLeft);
    Configuration d = step(m, x, c, mk(0, a, X, 0, st_frozen, 0, -1));
    CHECK(d.storage == std::vector<SymId>{st_lend, st_frozen});
    Configuration e = cfg_on(m, {st_lend, X, st_blank, st_blank}, 1, LastMove::FromLeft);
    Configuration f = step(m, x, e, mk(0, a, X, 0, st_frozen, 0, -1));
    CHECK(f == d);
    CHECK(ConfigurationHash{}(f) == ConfigurationHash{}(d));
}

TEST_CASE("surface projection") {
    MachineSpec m = tiny3();
    SymId X = m.stor_id("X");
    Configuration c = cfg_on(m, {st_lend, X}, 1, LastMove::FromRight, 2);
    SurfaceConfiguration s = surface_of(c);
    CHECK(s.state == 0);
    CHECK(s.l1 == 2);
    CHECK(s.l3 == 1);
    CHECK(s.scan == X);
    Configuration c2 = c;
    c2.lastMove = LastMove::FromLeft;
    CHECK(surface_of(c2) == s);  // surfaces forget the arrival direction
    CHECK(c2 != c);
}

TEST_CASE("validator flags static rule defects") {
    MachineSpec m = tiny3();
    SymId a = m.input_id("a"), X = m.stor_id("X"), Y = m.stor_id("Y");
    CHECK(validate_machine(m).ok());

    SUBCASE("halting overlap") {
        m.rejecting[1] = 1;
        CHECK(!validate_machine(m).ok());
    }
    SUBCASE("all-stationary rule") {
        m.rules.push_back(mk(0, a, X, 0, X, 0, 0));
        CHECK(!validate_machine(m).ok());
        m.relaxed = true;
        m.rules.back().stW = X;
        CHECK(validate_machine(m).ok());
    }
    SUBCASE("non-deepening rewrite") {
        m.rules.push_back(mk(0, a, Y, 0, X, 0, 1));
        CHECK(!validate_machine(m).ok());
    }
    SUBCASE("depth-k rewrite") {
        m.rules.push_back(mk(0, a, st_frozen, 0, X, 0, 1));
        CHECK(!validate_machine(m).ok());
    }
    SUBCASE("one-way machines cannot retreat or use the work tape") {
        Rule r = mk(0, a, X, 0, Y, -1, 1);
        m.rules.push_back(r);
        CHECK(!validate_machine(m).ok());
        m.rules.back() = mk(0, a, X, 0, Y, 0, 1);
        m.rules.back().d2 = 1;
        CHECK(!validate_machine(m).ok());
    }
    SUBCASE("rules leaving halting states") {
        m.rules.push_back(mk(1, a, X, 0, Y, 0, 1));
        CHECK(!validate_machine(m).ok());
    }
    SUBCASE("input head walking off the right endmarker") {
        m.rules.push_back(mk(0, in_rend, X, 0, Y, 1, 1));
        CHECK(!validate_machine(m).ok());
    }
    SUBCASE("deterministic kinds reject duplicate branch points") {
        MachineSpec d(MachineKind::Sda, 3, "det");
        d.add_state("q0");
        d.add_state("qa", true);
        SymId da = d.add_input("a");
        SymId dX = d.add_stor("X", 1);
        SymId dY = d.add_stor("Y", 2);
        d.rules.push_back(mk(0, da, dX, 0, dY, 0, 1));
        CHECK(validate_machine(d).ok());
        d.rules.push_back(mk(0, da, dX, 1, dY, 1, 1));
        CHECK(!validate_machine(d).ok());
    }
}

TEST_CASE("machine files round-trip") {
    const std::string text =
        "# toy two-register pass\n"
        "machine kind=aux-sna k=3 relaxed=1 name=toy\n"
        "states q0 q1 qa qr\n"
        "initial q0\n"
        "accept qa\n"
        "reject qr\n"
        "input a b\n"
        "storage 1 X\n"
        "storage 2 Y\n"
        "work m\n"
        "trans q0 a _ X -> q1 _ Y 1 0 1\n"
        "trans q1 b m B -> qa m B 0 1 -1\n"
        "trans q1 > _ _ -> qr _ X 0 0 1\n";
    MachineSpec m = parse_machine_string(text);
    CHECK(m.kind == MachineKind::AuxSna);
    CHECK(m.k == 3);
    CHECK(m.relaxed);
    CHECK(m.name == "toy");
    CHECK(m.n_states() == 4);
    CHECK(m.accepting[m.state_id("qa")]);
    CHECK(m.rejecting[m.state_id("qr")]);
    CHECK(m.rules.size() == 3);
    CHECK(m.rules[1].wk == m.work_id("m"));
    CHECK(m.rules[1].st == st_frozen);
    CHECK(m.rules[1].d3 == -1);
    CHECK(m.rules[2].in == in_lend);

    std::string printed = print_machine(m);
    MachineSpec m2 = parse_machine_string(printed);
    CHECK(print_machine(m2) == printed);
    CHECK(m2.rules == m.rules);
    CHECK(m2.storDepth == m.storDepth);

    SUBCASE("machines without a work tape mark its fields with '-'") {
        MachineSpec s = tiny3();
        s.rules.push_back(mk(0, s.input_id("a"), s.stor_id("X"), 1, s.stor_id("Y"), 0, 1));
        std::string p = print_machine(s);
        CHECK(p.find("trans q0 a - X -> qa - Y 0 - 1\n") != std::string::npos);
        MachineSpec s2 = parse_machine_string(p);
        CHECK(s2.rules == s.rules);
        CHECK_THROWS_AS(
            parse_machine_string("machine kind=sda k=2\nstates q\ninitial q\n"
                                 "trans q > _ _ -> q _ _ 1 0 0\n"),
            ParseError);
    }
    SUBCASE("redundant reserved-depth storage lines are tolerated") {
        MachineSpec s = parse_machine_string(
            "machine kind=sda k=2\nstates q\ninitial q\nstorage 0 _\nstorage 2 B\n");
        CHECK(s.storNames.size() == 3);
        CHECK_THROWS_AS(parse_machine_string("machine kind=sda k=2\nstates q\ninitial q\n"
                                             "storage 0 X\n"),
                        ParseError);
    }
    SUBCASE("parse errors carry line numbers") {
        CHECK_THROWS_AS(parse_machine_string("machine kind=sda\n"), ParseError);
        CHECK_THROWS_AS(parse_machine_string("machine kind=sda k=2\nstates q0\ninitial qq\n"),
                        ParseError);
        CHECK_THROWS_AS(parse_machine_string("machine kind=sda k=2\nwork m\n"), ParseError);
        CHECK_THROWS_AS(parse_machine_string("machine kind=sda k=2\nstorage 2 X\n"), ParseError);
    }
}
