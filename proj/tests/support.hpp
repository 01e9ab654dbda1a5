// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lysa/dsl.hpp"
#include "lysa/model.hpp"

namespace lysa::testing {

inline std::filesystem::path corpus_file(const std::string& name) {
    return std::filesystem::path(LYSA_CORPUS_DIR) / name;
}

inline SourceModel load_model(const std::string& file, int rounds = 1, bool legitimate = true,
                              std::map<std::string, std::set<int>> overrides = {}) {
    ParseOptions po;
    po.rounds = rounds;
    po.legitimate_attacker = legitimate;
    po.overrides = std::move(overrides);
    return parse_file(corpus_file(file), po);
}

inline const std::vector<std::string>& model_files() {
    static const std::vector<std::string> files{"example2.lysa",   "case1_table.lysa", "case1_base.lysa",
                                                "case1_fixed.lysa", "case2_base.lysa",  "case2_fixed.lysa"};
    return files;
}

/// Closed random processes over a handful of names, with fresh crypto-points
/// for every encryption and decryption.
class RandomProcess {
  public:
    explicit RandomProcess(std::uint64_t seed) : rng_(seed) {}

    /// A process of at most `max_nodes` AST nodes.
    ProcessPtr next(std::size_t max_nodes) {
        for (;;) {
            sites_ = 0;
            vars_ = 0;
            ProcessPtr p = process(static_cast<int>(max_nodes), {});
            const std::size_t n = ast_size(p);
            if (n <= max_nodes && n >= 3) {
                return p;
            }
        }
    }

  private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    Term term(const std::vector<Variable>& scope, int depth) {
        const int k = pick(depth > 0 ? 6 : 5);
        if (k < 3 || (k < 5 && scope.empty())) {
            static const char* names[] = {"a", "b", "k"};
            return name_term(names[pick(3)]);
        }
        if (k < 5) {
            return var_term(scope[static_cast<std::size_t>(pick(static_cast<int>(scope.size())))]);
        }
        std::vector<Term> payload{term(scope, depth - 1)};
        if (pick(2) == 0) {
            payload.push_back(term(scope, depth - 1));
        }
        const int at = ++sites_;
        return enc_term(std::move(payload), pick(2) == 0 ? name_term("k") : term(scope, 0),
                        point("l", {at}), points_around("d", at));
    }

    PointSet points_around(const std::string& label, int at) {
        if (pick(4) == 0) {
            return PointSet::everything();
        }
        PointSet s;
        for (int l = 1; l <= at + 1; ++l) {
            if (pick(2) == 0) {
                s.points.insert(point(label, {l}));
            }
        }
        return s;
    }

    Variable fresh() { return Variable{Ident{"x", {++vars_}}}; }

    ProcessPtr process(int budget, std::vector<Variable> scope) {
        if (budget <= 1) {
            return nil();
        }
        switch (pick(7)) {
        case 0:
            return nil();
        case 1:
            return par(process(budget / 2, scope), process(budget / 2, scope));
        case 2:
            return repl(process(budget - 1, scope));
        case 3: {
            static const char* fresh_names[] = {"n", "m"};
            return restrict_name(Name{Ident{fresh_names[pick(2)], {}}}, process(budget - 1, scope));
        }
        case 4: {
            std::vector<Term> terms{term(scope, 1)};
            if (pick(2) == 0) {
                terms.push_back(term(scope, 1));
            }
            return output(std::move(terms), process(budget - 3, scope));
        }
        case 5: {
            std::vector<Term> match;
            if (pick(2) == 0) {
                match.push_back(term(scope, 0));
            }
            std::vector<Variable> bind{fresh()};
            scope.push_back(bind.back());
            return input(std::move(match), std::move(bind), process(budget - 3, scope));
        }
        default: {
            Term subject = term(scope, 0);
            Term key = pick(2) == 0 ? name_term("k") : term(scope, 0);
            std::vector<Term> match;
            if (pick(3) == 0) {
                match.push_back(term(scope, 0));
            }
            std::vector<Variable> bind{fresh()};
            scope.push_back(bind.back());
            const int at = ++sites_;
            return decryption(std::move(subject), std::move(match), std::move(bind), std::move(key), point("d", {at}),
                              points_around("l", at), process(budget - 4, scope));
        }
        }
    }

    std::mt19937_64 rng_;
    int sites_ = 0;
    int vars_ = 0;
};

} // namespace lysa::testing
