// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT
#pragma once

// Abstract syntax of the symmetric fragment of LySa: terms, processes,
// crypto-points and canonical names.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lysa {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Identifier with optional concrete indices; printed as `base` or `base_{i,j}`.
struct Ident {
    std::string base;
    std::vector<int> indices;

    [[nodiscard]] std::string str() const;
    auto operator<=>(const Ident&) const = default;
};

struct Name {
    Ident id;

    [[nodiscard]] std::string str() const { return id.str(); }
    auto operator<=>(const Name&) const = default;
};

struct Variable {
    Ident id;

    [[nodiscard]] std::string str() const { return id.str(); }
    auto operator<=>(const Variable&) const = default;
};

enum class PointOwner : std::uint8_t { process, attacker };

struct CryptoPoint {
    Ident label;
    PointOwner owner = PointOwner::process;

    /// The unique attacker point, printed `l•`.
    static CryptoPoint attacker() { return {{}, PointOwner::attacker}; }
    [[nodiscard]] bool is_attacker() const { return owner == PointOwner::attacker; }
    [[nodiscard]] std::string str() const;
    auto operator<=>(const CryptoPoint&) const = default;
};

/// A dest/orig annotation set. `all` is the distinguished marker C.
struct PointSet {
    bool all = false;
    std::set<CryptoPoint> points;

    static PointSet everything() { return {true, {}}; }
    [[nodiscard]] bool contains(const CryptoPoint& p) const { return all || points.contains(p); }
    [[nodiscard]] std::string str() const;
    auto operator<=>(const PointSet&) const = default;
};

struct Term;

struct Encryption {
    std::vector<Term> payload;
    std::shared_ptr<const Term> key;
    CryptoPoint at;
    PointSet dest;

    bool operator==(const Encryption& other) const;
};

struct Term {
    std::variant<Name, Variable, Encryption> node;

    bool operator==(const Term& other) const = default;
};

struct Process;
using ProcessPtr = std::shared_ptr<const Process>;

struct Nil {
    bool operator==(const Nil&) const = default;
};
struct Parallel {
    ProcessPtr left;
    ProcessPtr right;
    bool operator==(const Parallel& other) const;
};
struct Replication {
    ProcessPtr body;
    bool operator==(const Replication& other) const;
};
struct Restriction {
    Name name;
    ProcessPtr body;
    bool operator==(const Restriction& other) const;
};
struct Output {
    std::vector<Term> terms;
    ProcessPtr cont;
    bool operator==(const Output& other) const;
};
/// `(E1..Ej; x_{j+1}..x_k).P`: the first j positions are matched, the rest bound.
struct Input {
    std::vector<Term> match;
    std::vector<Variable> bind;
    ProcessPtr cont;
    bool operator==(const Input& other) const;
};
/// `decrypt E as {E1..Ej; x_{j+1}..x_k}:E0 [at l orig L] in P`.
struct Decryption {
    Term subject;
    std::vector<Term> match;
    std::vector<Variable> bind;
    Term key;
    CryptoPoint at;
    PointSet orig;
    ProcessPtr cont;
    bool operator==(const Decryption& other) const;
};

struct Process {
    std::variant<Nil, Parallel, Replication, Restriction, Output, Input, Decryption> node;

    bool operator==(const Process& other) const = default;
};

bool equal(const ProcessPtr& a, const ProcessPtr& b);

// Construction helpers.
Term name_term(Name n);
Term name_term(std::string base, std::vector<int> indices = {});
Term var_term(Variable v);
Term var_term(std::string base, std::vector<int> indices = {});
Term enc_term(std::vector<Term> payload, Term key, CryptoPoint at, PointSet dest);

ProcessPtr nil();
ProcessPtr par(ProcessPtr left, ProcessPtr right);
ProcessPtr repl(ProcessPtr body);
ProcessPtr restrict_name(Name n, ProcessPtr body);
ProcessPtr output(std::vector<Term> terms, ProcessPtr cont);
ProcessPtr input(std::vector<Term> match, std::vector<Variable> bind, ProcessPtr cont);
ProcessPtr decryption(Term subject, std::vector<Term> match, std::vector<Variable> bind, Term key,
                      CryptoPoint at, PointSet orig, ProcessPtr cont);

CryptoPoint point(std::string base, std::vector<int> indices = {});
PointSet points(std::initializer_list<CryptoPoint> ps);

/// Equivalence class representative ⌊n⌋ of a name.
struct CanonicalName {
    std::string tag;

    static CanonicalName attacker() { return {"n•"}; }
    auto operator<=>(const CanonicalName&) const = default;
};

/// Indices outside `instantiated` collapse into one class (printed `*`).
/// Without a set every index stays distinct.
struct IndexPolicy {
    std::optional<std::set<int>> instantiated;
};

CanonicalName canonical(const Name& name, const IndexPolicy& policy = {});

/// Canonical variable name used as the key of ρ.
std::string canonical(const Variable& v);
inline const std::string attacker_variable = "z•";

std::set<Name> free_names(const ProcessPtr& p);

struct ArityProfile {
    std::size_t max_tuple = 0;
    std::set<std::size_t> tuple_arities;
    std::set<std::size_t> enc_arities;
};

ArityProfile arity_profile(const ProcessPtr& p);

/// Number of process and term nodes.
std::size_t ast_size(const ProcessPtr& p);

// Small visitors shared by several modules.
template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

} // namespace lysa
