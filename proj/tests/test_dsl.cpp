// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace lysa;
using lysa::testing::load_model;

namespace {

const char* const example2 =
    "new(K) <A, B, KA, {K}:KA [at lA dest {lB}]>.0\n"
    "| (A, B; xKA, x). decrypt x as {; xK}:xKA [at lB orig {lA}] in 0\n";

std::size_t count_sites(const ProcessPtr& p, const std::string& base);

std::size_t count_sites(const Term& t, const std::string& base) {
    if (const auto* e = std::get_if<Encryption>(&t.node)) {
        std::size_t n = e->at.label.base == base ? 1 : 0;
        for (const auto& c : e->payload) {
            n += count_sites(c, base);
        }
        return n + count_sites(*e->key, base);
    }
    return 0;
}

std::size_t count_sites(const ProcessPtr& p, const std::string& base) {
    return std::visit(overloaded{
                          [&](const Nil&) -> std::size_t { return 0; },
                          [&](const Parallel& n) { return count_sites(n.left, base) + count_sites(n.right, base); },
                          [&](const Replication& n) { return count_sites(n.body, base); },
                          [&](const Restriction& n) { return count_sites(n.body, base); },
                          [&](const Output& n) {
                              std::size_t k = 0;
                              for (const auto& t : n.terms) {
                                  k += count_sites(t, base);
                              }
                              return k + count_sites(n.cont, base);
                          },
                          [&](const Input& n) { return count_sites(n.cont, base); },
                          [&](const Decryption& n) {
                              return (n.at.label.base == base ? 1U : 0U) + count_sites(n.cont, base);
                          },
                      },
                      p->node);
}

} // namespace

TEST_CASE("the running example parses to the expected process", "[dsl]") {
    const SourceModel m = parse(example2);
    const ProcessPtr expected = par(
        restrict_name(Name{{"K", {}}},
                      output({name_term("A"), name_term("B"), name_term("KA"),
                              enc_term({name_term("K")}, name_term("KA"), point("lA"), points({point("lB")}))},
                             nil())),
        input({name_term("A"), name_term("B")}, {Variable{{"xKA", {}}}, Variable{{"x", {}}}},
              decryption(var_term("x"), {}, {Variable{{"xK", {}}}}, var_term("xKA"), point("lB"),
                         points({point("lA")}), nil())));
    CHECK(equal(m.process, expected));
    CHECK(m.points.size() == 2);
}

TEST_CASE("pretty printing round-trips through the parser", "[dsl]") {
    for (const auto& file : lysa::testing::model_files()) {
        for (const bool legitimate : {false, true}) {
            INFO(file << " legitimate=" << legitimate);
            const SourceModel m = load_model(file, 2, legitimate, {{"X", {1, 2}}});
            const std::string text = pretty(m.process);
            const SourceModel again = parse(text);
            CHECK(equal(m.process, again.process));
            CHECK(pretty(again.process) == text);
        }
    }
}

TEST_CASE("indexed composition expands over the declared sets", "[dsl]") {
    const SourceModel table = load_model("case1_table.lysa");
    CHECK(count_sites(table.process, "a1") == 12);  // i in {1,2,3}, j in {0,1,2,3}
    CHECK(count_sites(table.process, "b3") == 12);
    CHECK(count_sites(table.process, "tc2") == 16);

    const SourceModel honest = load_model("case1_table.lysa", 1, false);
    CHECK(count_sites(honest.process, "a1") == 9);
    CHECK(count_sites(honest.process, "tc2") == 9);

    const SourceModel small = load_model("case1_table.lysa", 1, true, {{"X", {1}}});
    CHECK(count_sites(small.process, "a1") == 2);
}

TEST_CASE("rounds bind the round index set", "[dsl]") {
    const SourceModel one = load_model("case1_base.lysa", 1, false, {{"X", {1}}});
    const SourceModel two = load_model("case1_base.lysa", 2, false, {{"X", {1}}});
    CHECK(count_sites(one.process, "a1") == 1);
    CHECK(count_sites(two.process, "a1") == 2);
    // The earlier round stops after key transport.
    CHECK(count_sites(one.process, "b4") == 1);
    CHECK(count_sites(two.process, "b4") == 1);
    CHECK(two.points.contains(point("a1", {1, 1, 2})));
}

TEST_CASE("arity profiles", "[dsl]") {
    const ArityProfile ex = arity_profile(parse(example2).process);
    CHECK(ex.max_tuple == 4);
    CHECK(ex.tuple_arities == std::set<std::size_t>{4});
    CHECK(ex.enc_arities == std::set<std::size_t>{1});

    const ArityProfile table = arity_profile(load_model("case1_table.lysa").process);
    CHECK(table.max_tuple == 3);
    CHECK(table.enc_arities == std::set<std::size_t>{1, 3, 5});
}

TEST_CASE("free names", "[dsl]") {
    const auto names = free_names(parse(example2).process);
    CHECK(names == std::set<Name>{Name{{"A", {}}}, Name{{"B", {}}}, Name{{"KA", {}}}});

    const auto table = free_names(load_model("case1_table.lysa", 1, true, {{"X", {1}}}).process);
    CHECK(table.contains(Name{{"TC", {}}}));
    CHECK(table.contains(Name{{"A", {1}}}));
    CHECK_FALSE(table.contains(Name{{"KA", {1}}}));
}

TEST_CASE("syntax errors report the position and what was expected", "[dsl]") {
    try {
        parse("new(K) <A, B\n  .0");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.where().line == 2);
        CHECK_FALSE(e.expected().empty());
    }
    CHECK_THROWS_AS(parse("<A, {A}:K [at l1 dest {l2}]>.0 | <B, {B}:K [at l1 dest {l2}]>.0"), ModelError);
    CHECK_THROWS_AS(parse("<A, {A}:K [at l1 dest {nowhere}]>.0"), ModelError);
}
