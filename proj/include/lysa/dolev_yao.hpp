// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

// Dolev-Yao attacker: initial knowledge, eavesdropping, decryption and
// encryption with known keys, and injection of composed messages.

#include <optional>
#include <set>
#include <string>

#include "lysa/cfa.hpp"

namespace lysa {

struct AttackerConfig {
    std::set<std::size_t> tuple_arities;
    std::set<std::size_t> enc_arities;
    /// Names the attacker knows in addition to n• and the free names.
    std::set<Name> extra_seeds;
    bool include_free_names = true;

    /// Arities taken from the process, no extra seeds.
    static AttackerConfig for_process(const ProcessPtr& p);
};

/// Adds the attacker's constraints for `p` to `cs`.
void attacker_constraints(ConstraintSystem& cs, const AttackerConfig& cfg, const ProcessPtr& p);

struct AnalyzeOptions {
    std::optional<AttackerConfig> attacker;
    IndexPolicy policy;
    SolverOptions solver;
};

/// Generates, composes with the attacker when configured, and solves.
AnalysisResult analyze(const ProcessPtr& p, const AnalyzeOptions& options = {});

/// Whether the canonical class of `secret` stays out of the attacker's knowledge.
bool confidential(const AnalysisResult& result, const Name& secret);

/// The error component; empty means origin and destination authentication hold.
const std::set<PsiPair>& authentic(const AnalysisResult& result);

} // namespace lysa
