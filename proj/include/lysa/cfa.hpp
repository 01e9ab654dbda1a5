// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

// Control flow analysis: constraint generation for terms and processes, a
// worklist solver computing the least (rho, kappa, psi), and an independent
// validator for candidate results.
//
// Encryption values are kept per syntactic encryption site: the value of a
// site stands for every ciphertext {V1..Vk}:V0 built at that site whose
// components range over the site's component estimates. Because the term and
// output rules close estimates under products, this representation is exact
// and keeps the universe finite even when ciphertexts are re-encrypted.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lysa/model.hpp"
#include "lysa/value_set.hpp"

namespace lysa {

class ResourceLimit : public Error {
  public:
    using Error::Error;
};

struct SiteInfo {
    CryptoPoint at;
    PointSet dest;
    /// comps[0] is the key estimate, comps[1..k] the payload estimates.
    std::vector<ValueSet> comps;
    bool attacker = false;

    [[nodiscard]] std::size_t arity() const { return comps.empty() ? 0 : comps.size() - 1; }
};

/// Value ids: canonical names first, then encryption sites.
class Universe {
  public:
    ValueId add_name(const std::string& tag);
    ValueId add_site(SiteInfo site);

    [[nodiscard]] std::size_t size() const { return names_.size() + sites_.size(); }
    [[nodiscard]] std::size_t name_count() const { return names_.size(); }
    [[nodiscard]] bool is_name(ValueId v) const { return v < names_.size(); }
    [[nodiscard]] const std::string& name(ValueId v) const { return names_[v]; }
    [[nodiscard]] const SiteInfo& site(ValueId v) const { return sites_[v - names_.size()]; }
    SiteInfo& site(ValueId v) { return sites_[v - names_.size()]; }
    [[nodiscard]] ValueId site_id(std::size_t index) const { return static_cast<ValueId>(names_.size() + index); }
    [[nodiscard]] std::size_t site_count() const { return sites_.size(); }

    [[nodiscard]] std::optional<ValueId> find_name(const std::string& tag) const;
    [[nodiscard]] std::optional<ValueId> find_site(const CryptoPoint& at) const;
    [[nodiscard]] std::optional<ValueId> attacker_site(std::size_t arity) const;

  private:
    std::vector<std::string> names_;
    std::vector<SiteInfo> sites_;
    std::map<std::string, ValueId> name_index_;
    std::map<CryptoPoint, std::size_t> site_index_;
    std::map<std::size_t, std::size_t> attacker_index_;
};

/// One family of network tuples: the product of its component sets.
struct TupleSet {
    std::vector<ValueSet> comps;
    bool wild = false;
};

struct AttackerSummary {
    std::set<std::size_t> tuple_arities;
    std::set<std::size_t> enc_arities;
    /// Canonical tags of the initial knowledge (n•, free names, extra seeds).
    std::set<std::string> seeds;
};

struct SolverStats {
    std::size_t universe = 0;
    std::size_t constraints = 0;
    std::size_t firings = 0;
    std::size_t match_rounds = 0;
};

using PsiPair = std::pair<CryptoPoint, CryptoPoint>;

struct AnalysisResult {
    Universe universe;
    IndexPolicy policy;
    std::map<std::string, ValueSet> rho;
    std::vector<TupleSet> kappa;
    std::set<PsiPair> psi;
    std::optional<AttackerSummary> attacker;
    SolverStats stats;

    [[nodiscard]] const ValueSet& rho_of(const std::string& var) const;
    [[nodiscard]] const ValueSet& attacker_knowledge() const { return rho_of(attacker_variable); }

    /// Textual form of a value, e.g. `{K}:KA [at lA dest {lB}]`.
    [[nodiscard]] std::string render(ValueId v) const;
    [[nodiscard]] std::vector<std::string> render(const ValueSet& s) const;
    [[nodiscard]] std::string render_tuple(const TupleSet& t) const;
};

std::string render_psi(const PsiPair& p);

// Constraint representation.

struct TermRef {
    enum class Kind : std::uint8_t { value, variable, site };
    Kind kind = Kind::value;
    std::uint32_t id = 0;

    auto operator<=>(const TermRef&) const = default;
};

struct SiteDecl {
    CryptoPoint at;
    PointSet dest;
    std::vector<TermRef> comps;
    bool attacker = false;
};

struct OutputDecl {
    std::vector<TermRef> comps;
    bool wild = false;
};

struct InputDecl {
    std::vector<TermRef> match;
    std::vector<std::uint32_t> bind;
};

struct DecryptDecl {
    TermRef subject;
    TermRef key;
    std::vector<TermRef> match;
    std::vector<std::uint32_t> bind;
    CryptoPoint at;
    PointSet orig;
};

struct Constraint {
    enum class Kind : std::uint8_t {
        /// value `a` belongs to variable `b`
        seed,
        /// estimate of term `term` flows into variable `b`
        include,
        /// input `a` may receive the tuples of output `b` (generated by the solver)
        receive,
        /// decryption `a`
        open,
        /// the attacker decrypts what it knows; variable `b` is its knowledge
        attacker_open,
        /// every component of output `a` flows into variable `b`
        eavesdrop,
    };
    Kind kind = Kind::seed;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    TermRef term;
};

class ConstraintSystem {
  public:
    explicit ConstraintSystem(IndexPolicy policy = {}) : policy_(std::move(policy)) {}

    std::uint32_t name(const std::string& tag);
    std::uint32_t variable(const std::string& canonical_name);
    std::uint32_t add_site(SiteDecl site);
    std::uint32_t add_output(OutputDecl out);
    std::uint32_t add_input(InputDecl in);
    std::uint32_t add_decrypt(DecryptDecl dec);
    void add(Constraint c) { constraints_.push_back(c); }

    [[nodiscard]] const IndexPolicy& policy() const { return policy_; }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    [[nodiscard]] const std::vector<std::string>& variables() const { return variables_; }
    [[nodiscard]] const std::vector<SiteDecl>& sites() const { return sites_; }
    [[nodiscard]] const std::vector<OutputDecl>& outputs() const { return outputs_; }
    [[nodiscard]] const std::vector<InputDecl>& inputs() const { return inputs_; }
    [[nodiscard]] const std::vector<DecryptDecl>& decrypts() const { return decrypts_; }
    [[nodiscard]] const std::vector<Constraint>& constraints() const { return constraints_; }
    [[nodiscard]] std::optional<std::uint32_t> find_site(const CryptoPoint& at) const;

    std::optional<AttackerSummary> attacker;

  private:
    IndexPolicy policy_;
    std::vector<std::string> names_;
    std::map<std::string, std::uint32_t> name_index_;
    std::vector<std::string> variables_;
    std::map<std::string, std::uint32_t> variable_index_;
    std::vector<SiteDecl> sites_;
    std::map<CryptoPoint, std::uint32_t> site_index_;
    std::vector<OutputDecl> outputs_;
    std::vector<InputDecl> inputs_;
    std::vector<DecryptDecl> decrypts_;
    std::vector<Constraint> constraints_;
};

/// Constraints for a term: returns the reference whose estimate is the term's.
TermRef gen_term(ConstraintSystem& cs, const Term& e);

/// Constraints for every node of a process.
void gen_process(ConstraintSystem& cs, const ProcessPtr& p);

ConstraintSystem generate(const ProcessPtr& p, const IndexPolicy& policy = {});

struct SolverOptions {
    /// When set, constraints are taken from the worklist in a seeded random order.
    std::optional<std::uint64_t> shuffle_seed;
    bool lifo = false;
    std::size_t max_universe = 1'000'000;
    std::size_t max_firings = 10'000'000;
};

AnalysisResult solve(const ConstraintSystem& cs, const SolverOptions& options = {});

struct CheckReport {
    bool ok = true;
    std::vector<std::string> violations;
    /// Every psi pair the rules demand of the candidate result.
    std::set<PsiPair> required_psi;
};

/// Validates `result` against the analysis rules for `p` by walking the
/// process directly; independent of the constraint generator and solver.
CheckReport check_report(const ProcessPtr& p, const AnalysisResult& result);
bool check(const ProcessPtr& p, const AnalysisResult& result);

/// Abstract value tree, used to test membership of concrete values.
struct AbstractTree {
    std::string name;  // canonical tag when a name
    std::vector<AbstractTree> payload;
    std::vector<AbstractTree> key;  // empty for names, one element for encryptions
    CryptoPoint at;
    PointSet dest;

    [[nodiscard]] bool is_name() const { return key.empty(); }
};

bool member(const AnalysisResult& r, const AbstractTree& v, const ValueSet& s);
bool member(const AnalysisResult& r, const AbstractTree& v, ValueId id);
bool kappa_contains(const AnalysisResult& r, const std::vector<AbstractTree>& tuple);

} // namespace lysa
