// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

// Textual front-end: `.lysa` files with `let` headers, indexed parallel
// composition and indexed restriction, expanded to plain processes.

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lysa/model.hpp"

namespace lysa {

struct SourceLocation {
    int line = 0;
    int column = 0;

    [[nodiscard]] std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
    auto operator<=>(const SourceLocation&) const = default;
};

class ParseError : public Error {
  public:
    ParseError(SourceLocation where, std::vector<std::string> expected, std::string found);

    [[nodiscard]] const SourceLocation& where() const { return where_; }
    [[nodiscard]] const std::vector<std::string>& expected() const { return expected_; }

  private:
    SourceLocation where_;
    std::vector<std::string> expected_;
};

/// Well-formedness violations detected after parsing (unknown points, bad indices, ...).
class ModelError : public Error {
  public:
    ModelError(SourceLocation where, const std::string& what);

    [[nodiscard]] const SourceLocation& where() const { return where_; }

  private:
    SourceLocation where_;
};

struct ParseOptions {
    /// Binds sets declared as `let R = rounds` to {1..rounds}.
    int rounds = 1;
    /// When false, index 0 is removed from every index set before expansion.
    bool legitimate_attacker = true;
    /// Replaces declared index sets by name.
    std::map<std::string, std::set<int>> overrides;
};

struct Template;

struct SourceModel {
    std::string text;
    std::map<std::string, std::set<int>> index_sets;
    ProcessPtr process;
    std::map<CryptoPoint, SourceLocation> points;
    std::vector<std::string> warnings;
    std::shared_ptr<const Template> templ;
    bool legitimate_attacker = true;
};

SourceModel parse(std::string_view text, const ParseOptions& options = {});
SourceModel parse_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Re-expands the indexed template of `model` over its current `index_sets`.
ProcessPtr expand(const SourceModel& model);

std::string pretty(const ProcessPtr& p);
std::string pretty(const Term& t);

} // namespace lysa
