// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include <catch2/catch_amalgamated.hpp>

#include "lysa/dolev_yao.hpp"
#include "lysa/oracle.hpp"
#include "support.hpp"

using namespace lysa;
using lysa::testing::load_model;

namespace {

const char* const example2 =
    "new(K) <A, B, KA, {K}:KA [at lA dest {lB}]>.0 | (A, B; xKA, x). decrypt x as {; xK}:xKA [at lB orig {lA}] in 0";

std::vector<std::string> lines(const Trace& t) {
    std::vector<std::string> out;
    for (const auto& e : t) {
        out.push_back(e.str());
    }
    return out;
}

std::size_t count(const Trace& t, Event::Kind k) {
    return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [&](const Event& e) { return e.kind == k; }));
}

} // namespace

TEST_CASE("the running example executes to completion", "[oracle]") {
    const ProcessPtr p = parse(example2).process;
    const Trace t = run(p, 10);
    REQUIRE(t.size() == 5);
    CHECK(t[0].kind == Event::Kind::sent);
    CHECK(t[0].tuple.size() == 4);
    CHECK(t[1].str() == "bound xKA = KA");
    CHECK(t[2].kind == Event::Kind::bound);
    CHECK(t[2].value.at == point("lA"));
    CHECK(t[3].variable.str() == "xK");
    CHECK(t[3].value.name.str() == "K");
    CHECK(t[3].value.serial != 0);
    CHECK(t[4].str() == "decrypted at lB from lA");
    CHECK(covered(t, analyze(p)));
}

TEST_CASE("receivers whose pattern never matches get stuck", "[oracle]") {
    const ProcessPtr p = parse(
                             "new(K) <A, B, KA, {K}:KA [at lA dest {lB}]>.0"
                             " | (A, C; xKA, x). decrypt x as {; xK}:xKA [at lB orig {lA}] in 0")
                             .process;
    const Trace t = run(p, 10);
    CHECK(count(t, Event::Kind::bound) == 0);
    REQUIRE(count(t, Event::Kind::stuck) == 1);
    CHECK(t.back().reason.find("no matching input") != std::string::npos);
}

TEST_CASE("decryption with the wrong key gets stuck", "[oracle]") {
    const ProcessPtr p = parse("new(K) new(J) (<{M}:K [at l1 dest {l2}]>.0 | (; y). decrypt y as {; z}:J [at l2 orig {l1}] in 0)")
                             .process;
    const Trace t = run(p, 10);
    CHECK(count(t, Event::Kind::decrypted) == 0);
    REQUIRE(count(t, Event::Kind::stuck) == 1);
    CHECK(t.back().reason == "decryption at l2 with the wrong key");
}

TEST_CASE("each unfolding mints fresh names, reproducibly", "[oracle]") {
    const ProcessPtr p = parse("!new(N) <N>.0").process;
    const Trace a = run(p, 3);
    const Trace b = run(p, 3);
    REQUIRE(count(a, Event::Kind::sent) == 3);
    CHECK(a[0].tuple[0].serial != a[1].tuple[0].serial);
    CHECK(a[1].tuple[0].serial != a[2].tuple[0].serial);
    CHECK(lines(a) == lines(b));
}

TEST_CASE("annotation violations are reported", "[oracle]") {
    const ProcessPtr p = parse(
                             "new(K) (<A, {M}:K [at l1 dest {l2}]>.0"
                             " | (A; y). decrypt y as {; z}:K [at l2 orig {l3}] in 0"
                             " | <B, {N}:J [at l3 dest {l2}]>.0)")
                             .process;
    const Trace t = run(p, 10);
    REQUIRE(count(t, Event::Kind::decrypted) == 1);
    CHECK(t.back().violation);
    const AnalysisResult r = analyze(p);
    CHECK(covered(t, r));
    AnalysisResult without_psi = r;
    without_psi.psi.clear();
    CHECK_FALSE(covered(t, without_psi));
}

TEST_CASE("coverage fails when the estimate misses a value", "[oracle]") {
    const ProcessPtr p = parse(example2).process;
    const Trace t = run(p, 10);
    AnalysisResult r = analyze(p);
    r.rho["xK"] = ValueSet{};
    std::string why;
    CHECK_FALSE(covered(t, r, &why));
    CHECK(why.rfind("bound xK", 0) == 0);

    AnalysisResult no_kappa = analyze(p);
    no_kappa.kappa.clear();
    CHECK_FALSE(covered(t, no_kappa));
}

TEST_CASE("exhaustive exploration reports each event once", "[oracle]") {
    const ProcessPtr p = parse(example2).process;
    std::vector<std::string> seen;
    const auto stats = explore(p, 6, {}, [&](const Event& e) {
        seen.push_back(e.str());
        return true;
    });
    CHECK(seen.size() == 5);
    CHECK(stats.events == 5);

    // Two receivers competing for one message: either may win.
    const ProcessPtr race = parse("<A>.0 | (; x).0 | (; y).0").process;
    std::set<std::string> bound;
    explore(race, 4, {}, [&](const Event& e) {
        if (e.kind == Event::Kind::bound) {
            bound.insert(e.variable.str());
        }
        return true;
    });
    CHECK(bound == std::set<std::string>{"x", "y"});
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        CHECK(count(run(race, 4, Scheduler::seeded(seed)), Event::Kind::bound) == 1);
    }
}

TEST_CASE("random schedules of a corpus model stay within the analysis", "[oracle]") {
    const SourceModel m = load_model("case1_fixed.lysa", 2, true, {{"X", {1}}});
    const AnalysisResult r = analyze(m.process);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::string why;
        CHECK(covered(run(m.process, 40, Scheduler::seeded(seed)), r, &why));
        INFO(why);
    }
}

TEST_CASE("replayed key transport reaches the next round only in the flawed protocol", "[oracle]") {
    const std::map<std::string, std::set<int>> one{{"X", {1}}};
    for (const auto* file : {"case1_base.lysa", "case1_fixed.lysa"}) {
        INFO(file);
        const SourceModel old = load_model(file, 1, false, one);
        const SourceModel now = load_model(file, 2, false, one);
        const auto captured = capture(old.process, 64);
        CHECK_FALSE(captured.empty());
        bool stale = false;
        explore(now.process, 8, captured, [&](const Event& e) {
            stale = stale || stale_binding(e, 2);
            return !stale;
        });
        const Trace replayed = replay_run(now.process, captured, 12);
        const bool replay_stale =
            std::any_of(replayed.begin(), replayed.end(), [](const Event& e) { return stale_binding(e, 2); });
        const bool flawed = std::string(file) == "case1_base.lysa";
        CHECK(stale == flawed);
        CHECK(replay_stale == flawed);
    }
}

TEST_CASE("abstraction of runtime values", "[oracle]") {
    RuntimeValue k;
    k.name = Name{{"K", {2}}};
    k.serial = 99;
    RuntimeValue m;
    m.name = Name{{"M", {}}};
    RuntimeValue c;
    c.payload = {m};
    c.key = {k};
    c.at = point("l1");
    c.dest = points({point("l2")});
    const AbstractTree t = abstract(c, IndexPolicy{std::set<int>{1}});
    CHECK_FALSE(t.is_name());
    CHECK(t.key.front().name == "K_*");
    CHECK(t.payload.front().name == "M");
    CHECK(c.str() == "{M}:K_2#99 [at l1 dest {l2}]");
}
