// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include "lysa/dolev_yao.hpp"

namespace lysa {

AttackerConfig AttackerConfig::for_process(const ProcessPtr& p) {
    const ArityProfile profile = arity_profile(p);
    AttackerConfig cfg;
    cfg.tuple_arities = profile.tuple_arities;
    cfg.enc_arities = profile.enc_arities;
    return cfg;
}

void attacker_constraints(ConstraintSystem& cs, const AttackerConfig& cfg, const ProcessPtr& p) {
    AttackerSummary summary{cfg.tuple_arities, cfg.enc_arities, {}};
    const std::uint32_t z = cs.variable(attacker_variable);
    const TermRef zref{TermRef::Kind::variable, z};

    auto seed = [&](const std::string& tag) {
        summary.seeds.insert(tag);
        cs.add({Constraint::Kind::seed, cs.name(tag), z, {}});
    };
    seed(CanonicalName::attacker().tag);
    if (cfg.include_free_names) {
        for (const auto& n : free_names(p)) {
            seed(canonical(n, cs.policy()).tag);
        }
    }
    for (const auto& n : cfg.extra_seeds) {
        seed(canonical(n, cs.policy()).tag);
    }

    // Eavesdropping covers the process outputs present so far; the attacker's
    // own outputs only carry what it already knows.
    const auto process_outputs = static_cast<std::uint32_t>(cs.outputs().size());
    for (std::uint32_t o = 0; o < process_outputs; ++o) {
        cs.add({Constraint::Kind::eavesdrop, o, z, {}});
    }

    cs.add({Constraint::Kind::attacker_open, 0, z, {}});

    for (auto k : cfg.enc_arities) {
        SiteDecl site{CryptoPoint::attacker(), PointSet::everything(), std::vector<TermRef>(k + 1, zref), true};
        const std::uint32_t s = cs.add_site(std::move(site));
        cs.add({Constraint::Kind::include, 0, z, TermRef{TermRef::Kind::site, s}});
    }

    for (auto k : cfg.tuple_arities) {
        cs.add_output(OutputDecl{std::vector<TermRef>(k, zref), true});
    }
    cs.attacker = std::move(summary);
}

AnalysisResult analyze(const ProcessPtr& p, const AnalyzeOptions& options) {
    ConstraintSystem cs = generate(p, options.policy);
    if (options.attacker) {
        attacker_constraints(cs, *options.attacker, p);
    }
    return solve(cs, options.solver);
}

bool confidential(const AnalysisResult& result, const Name& secret) {
    auto id = result.universe.find_name(canonical(secret, result.policy).tag);
    return !id || !result.attacker_knowledge().contains(*id);
}

const std::set<PsiPair>& authentic(const AnalysisResult& result) { return result.psi; }

} // namespace lysa
