// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

// Scenario files and the parse, expand, attacker, solve and verdict pipeline
// behind `lysa analyze` and `lysa corpus run`.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lysa/dolev_yao.hpp"
#include "lysa/dsl.hpp"

namespace lysa {

inline constexpr int report_schema_version = 1;

struct Scenario {
    std::string name;
    std::string description;
    std::filesystem::path model;
    /// Replaces index sets declared in the model.
    std::map<std::string, std::set<int>> index_sets;
    bool legitimate_attacker = true;
    int rounds = 1;
    bool attacker = true;
    /// Name patterns such as `LK_{*,*,1}` given to the attacker up front.
    std::vector<std::string> leaks;
    /// Name patterns whose confidentiality is reported. Names with an index 0
    /// belong to sessions with the attacker and are never counted as secrets.
    std::vector<std::string> secrets;
    std::optional<bool> expect_psi_empty;
    std::optional<bool> expect_secrets_safe;
    std::size_t max_universe = SolverOptions{}.max_universe;
};

/// Reads `scenarios` from a JSON corpus file; model paths are resolved against its directory.
std::vector<Scenario> load_corpus(const std::filesystem::path& file);

/// Names of `p` matched by `pattern`. A pattern is `BASE` (any indices) or
/// `BASE_{i,j,...}` where each index is an integer or `*`.
std::vector<Name> match_names(const std::string& pattern, const ProcessPtr& p);

struct SecretVerdict {
    std::string name;
    bool confidential = true;
};

struct Report {
    std::string scenario;
    std::string model;
    std::vector<std::string> leaked;
    std::vector<std::string> psi;
    std::vector<std::string> attacker_knowledge;
    std::size_t kappa_size = 0;
    std::map<std::string, std::size_t> rho_summary;
    bool authentic = true;
    std::vector<SecretVerdict> secrets;
    bool validated = false;
    std::vector<std::string> mismatches;
    SolverStats stats;
    double parse_ms = 0;
    double analyze_ms = 0;
    double check_ms = 0;

    SourceModel source;
    AnalysisResult result;

    [[nodiscard]] bool secrets_safe() const;
    [[nodiscard]] bool expectations_met() const { return mismatches.empty(); }

    /// Without `volatile_fields` the timings and solver counters are left out,
    /// so equal analyses give byte-identical documents.
    [[nodiscard]] nlohmann::json to_json(bool volatile_fields = true) const;
    [[nodiscard]] std::string to_text() const;
};

Report run_scenario(const Scenario& s, const SolverOptions& solver = {});

/// 0 when every report met its expectations, 2 otherwise.
int exit_status(const std::vector<Report>& reports);

} // namespace lysa
