// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include <algorithm>

#include <catch2/catch_amalgamated.hpp>

#include "lysa/dolev_yao.hpp"
#include "support.hpp"

using namespace lysa;

namespace {

AnalysisResult run(const std::string& text, const SolverOptions& opts = {}) {
    ConstraintSystem cs = generate(parse(text).process);
    return solve(cs, opts);
}

std::vector<std::string> rho(const AnalysisResult& r, const std::string& var) {
    auto out = r.render(r.rho_of(var));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> kappa(const AnalysisResult& r) {
    std::vector<std::string> out;
    for (const auto& t : r.kappa) {
        if (!t.wild) {
            out.push_back(r.render_tuple(t));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

using Strings = std::vector<std::string>;

} // namespace

TEST_CASE("value sets", "[cfa]") {
    ValueSet a;
    CHECK(a.empty());
    CHECK(a.insert(3));
    CHECK_FALSE(a.insert(3));
    CHECK(a.insert(130));
    CHECK(a.size() == 2);
    CHECK(a.to_vector() == std::vector<ValueId>{3, 130});

    ValueSet b;
    b.insert(3);
    CHECK(b.subset_of(a));
    CHECK_FALSE(a.subset_of(b));
    CHECK(a.intersects(b));
    CHECK(b.unite(a));
    CHECK(a == b);
    CHECK(b.erase(130));
    CHECK_FALSE(a == b);
    b.insert(400);
    b.erase(400);
    CHECK(b.size() == 1);
    CHECK(b.contains(3));
}

TEST_CASE("canonical names", "[cfa]") {
    const Name n{{"KA", {5}}};
    CHECK(canonical(n).tag == "KA_5");
    CHECK(canonical(n, IndexPolicy{std::set<int>{1, 2}}).tag == "KA_*");
    CHECK(canonical(Name{{"LK", {1, 7, 2}}}, IndexPolicy{std::set<int>{1, 2}}).tag == "LK_{1,*,2}");
}

TEST_CASE("the running example without attacker", "[cfa]") {
    const AnalysisResult r =
        run("new(K) <A, B, KA, {K}:KA [at lA dest {lB}]>.0 | (A, B; xKA, x). decrypt x as {; xK}:xKA [at lB orig "
            "{lA}] in 0");
    CHECK(kappa(r) == Strings{"<A, B, KA, {K}:KA [at lA dest {lB}]>"});
    CHECK(rho(r, "x") == Strings{"{K}:KA [at lA dest {lB}]"});
    CHECK(rho(r, "xK") == Strings{"K"});
    CHECK(rho(r, "xKA") == Strings{"KA"});
    CHECK(r.rho.size() == 3);
    CHECK(r.psi.empty());
    CHECK(check(parse("new(K) <A, B, KA, {K}:KA [at lA dest {lB}]>.0 | (A, B; xKA, x). decrypt x as {; xK}:xKA "
                      "[at lB orig {lA}] in 0")
                    .process,
                r));
}

TEST_CASE("inputs only accept tuples whose prefix matches", "[cfa]") {
    const AnalysisResult r = run("<A, B>.0 | (A, C; x).<x>.0 | (A; y).<y>.0");
    CHECK(rho(r, "x").empty());
    CHECK(rho(r, "y") == Strings{"B"});
    CHECK(kappa(r) == Strings{"<A, B>", "<B>"});
}

TEST_CASE("decryption needs the right key and arity", "[cfa]") {
    const AnalysisResult r = run(
        "new(K) new(J) (<{M, N}:K [at l1 dest {l2, l3, l4}]>.0"
        " | (; y). decrypt y as {; z1, z2}:J [at l2 orig {l1}] in 0"
        " | (; y2). decrypt y2 as {; w}:K [at l3 orig {l1}] in 0"
        " | (; y3). decrypt y3 as {M; v}:K [at l4 orig {l1}] in 0)");
    CHECK(rho(r, "z1").empty());
    CHECK(rho(r, "w").empty());
    CHECK(rho(r, "v") == Strings{"N"});
    CHECK(r.psi.empty());
}

TEST_CASE("annotation mismatches populate psi", "[cfa]") {
    const AnalysisResult r = run(
        "new(K) (<{M}:K [at l1 dest {l2}]>.0"
        " | (; y). decrypt y as {; z}:K [at l2 orig {l1}] in 0"
        " | (; y2). decrypt y2 as {; w}:K [at l3 orig {l1}] in 0"
        " | <{N}:K [at l4 dest {l2}]>.0)");
    // l3 is outside the dest of l1, l2 does not accept l4.
    CHECK(r.psi == std::set<PsiPair>{{point("l1"), point("l3")}, {point("l4"), point("l2")}, {point("l4"), point("l3")}});
    CHECK(rho(r, "z") == Strings{"M", "N"});
}

TEST_CASE("nested encryptions are opened layer by layer", "[cfa]") {
    const AnalysisResult r = run(
        "new(K1) new(K2) (<{{M}:K1 [at l1 dest {l3}]}:K2 [at l2 dest {l4}]>.0"
        " | (; y). decrypt y as {; z}:K2 [at l4 orig {l2}] in decrypt z as {; w}:K1 [at l3 orig {l1}] in <w>.0)");
    CHECK(rho(r, "z") == Strings{"{M}:K1 [at l1 dest {l3}]"});
    CHECK(rho(r, "w") == Strings{"M"});
    CHECK(kappa(r) == Strings{"<M>", "<{{M}:K1 [at l1 dest {l3}]}:K2 [at l2 dest {l4}]>"});
}

TEST_CASE("matching ignores crypto-point annotations", "[cfa]") {
    const AnalysisResult r = run(
        "<{M}:K [at l1 dest C]>.0 | <{M}:K [at l2 dest C], N>.0"
        " | (; y). (y; z).<z>.0");
    CHECK(rho(r, "z") == Strings{"N"});
    CHECK(kappa(r).size() == 3);
}

TEST_CASE("replication does not change the estimate", "[cfa]") {
    const std::string body = "(<A, {B}:K [at l1 dest {l2}]>.0 | (A; y). decrypt y as {; z}:K [at l2 orig {l1}] in <z>.0)";
    const AnalysisResult once = run(body);
    const AnalysisResult many = run("!" + body);
    CHECK(kappa(once) == kappa(many));
    CHECK(rho(once, "z") == rho(many, "z"));
}

TEST_CASE("a variable matched after binding restricts later inputs", "[cfa]") {
    const AnalysisResult r = run("<A, B>.<B, C>.<A, C>.0 | (A; x). (x; w).<w>.0");
    CHECK(rho(r, "x") == Strings{"B", "C"});
    CHECK(rho(r, "w") == Strings{"C"});
}

TEST_CASE("worklist orders agree", "[cfa]") {
    const SourceModel m = lysa::testing::load_model("case1_base.lysa", 2, true);
    AttackerConfig cfg = AttackerConfig::for_process(m.process);
    cfg.extra_seeds.insert(Name{{"LK", {1, 1, 1}}});
    auto solve_with = [&](const SolverOptions& o) {
        ConstraintSystem cs = generate(m.process);
        attacker_constraints(cs, cfg, m.process);
        return solve(cs, o);
    };
    const AnalysisResult fifo = solve_with({});
    SolverOptions lifo;
    lifo.lifo = true;
    SolverOptions shuffled;
    shuffled.shuffle_seed = 7;
    for (const auto& other : {solve_with(lifo), solve_with(shuffled)}) {
        CHECK(other.psi == fifo.psi);
        CHECK(kappa(other) == kappa(fifo));
        REQUIRE(other.rho.size() == fifo.rho.size());
        for (const auto& [var, values] : fifo.rho) {
            CHECK(other.rho_of(var) == values);
        }
    }
    CHECK_FALSE(fifo.psi.empty());
}

TEST_CASE("the validator accepts solver output and rejects weakened results", "[cfa]") {
    const ProcessPtr p = parse(
                             "new(K) (<A, {M}:K [at l1 dest {l2}]>.0"
                             " | (A; y). decrypt y as {; z}:K [at l2 orig {l1}] in <z>.0"
                             " | (A; y2). decrypt y2 as {; w}:K [at l3 orig {l1}] in 0)")
                             .process;
    const AnalysisResult r = solve(generate(p));
    REQUIRE(check(p, r));
    REQUIRE(check_report(p, r).required_psi == r.psi);

    AnalysisResult no_rho = r;
    no_rho.rho["z"] = ValueSet{};
    CHECK_FALSE(check(p, no_rho));

    AnalysisResult no_kappa = r;
    for (auto& t : no_kappa.kappa) {
        if (t.comps.size() == 1) {
            t.comps[0] = ValueSet{};
        }
    }
    CHECK_FALSE(check(p, no_kappa));

    AnalysisResult no_psi = r;
    REQUIRE(no_psi.psi.size() == 1);
    no_psi.psi.clear();
    const CheckReport rep = check_report(p, no_psi);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("the universe cap aborts runaway analyses", "[cfa]") {
    const ProcessPtr p = lysa::testing::load_model("case1_table.lysa").process;
    SolverOptions o;
    o.max_universe = 10;
    CHECK_THROWS_AS(solve(generate(p), o), ResourceLimit);
    o.max_universe = SolverOptions{}.max_universe;
    o.max_firings = 5;
    CHECK_THROWS_AS(solve(generate(p), o), ResourceLimit);
}

TEST_CASE("every corpus model validates without attacker", "[cfa]") {
    for (const auto& file : lysa::testing::model_files()) {
        INFO(file);
        const ProcessPtr p = lysa::testing::load_model(file, 2).process;
        const AnalysisResult r = solve(generate(p));
        const CheckReport rep = check_report(p, r);
        CHECK(rep.ok);
        // Honest runs with round indicators never cross rounds or misroute a ciphertext.
        CHECK(r.psi.empty());
    }
}
