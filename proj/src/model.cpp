// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include "lysa/model.hpp"

#include <algorithm>
#include <functional>

namespace lysa {

std::string Ident::str() const {
    if (indices.empty()) {
        return base;
    }
    if (indices.size() == 1) {
        return base + "_" + std::to_string(indices.front());
    }
    std::string out = base + "_{";
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        out += std::to_string(indices[i]);
    }
    return out + "}";
}

std::string CryptoPoint::str() const {
    if (is_attacker()) {
        return "l•";
    }
    return label.str();
}

std::string PointSet::str() const {
    if (all) {
        return "C";
    }
    std::string out = "{";
    bool first = true;
    for (const auto& p : points) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += p.str();
    }
    return out + "}";
}

bool equal(const ProcessPtr& a, const ProcessPtr& b) {
    if (a == b) {
        return true;
    }
    if (!a || !b) {
        return false;
    }
    return *a == *b;
}

namespace {
bool equal_term(const std::shared_ptr<const Term>& a, const std::shared_ptr<const Term>& b) {
    if (a == b) {
        return true;
    }
    if (!a || !b) {
        return false;
    }
    return *a == *b;
}
} // namespace

bool Encryption::operator==(const Encryption& other) const {
    return payload == other.payload && equal_term(key, other.key) && at == other.at && dest == other.dest;
}
bool Parallel::operator==(const Parallel& other) const {
    return equal(left, other.left) && equal(right, other.right);
}
bool Replication::operator==(const Replication& other) const { return equal(body, other.body); }
bool Restriction::operator==(const Restriction& other) const {
    return name == other.name && equal(body, other.body);
}
bool Output::operator==(const Output& other) const { return terms == other.terms && equal(cont, other.cont); }
bool Input::operator==(const Input& other) const {
    return match == other.match && bind == other.bind && equal(cont, other.cont);
}
bool Decryption::operator==(const Decryption& other) const {
    return subject == other.subject && match == other.match && bind == other.bind && key == other.key &&
           at == other.at && orig == other.orig && equal(cont, other.cont);
}

Term name_term(Name n) { return Term{std::move(n)}; }
Term name_term(std::string base, std::vector<int> indices) {
    return Term{Name{Ident{std::move(base), std::move(indices)}}};
}
Term var_term(Variable v) { return Term{std::move(v)}; }
Term var_term(std::string base, std::vector<int> indices) {
    return Term{Variable{Ident{std::move(base), std::move(indices)}}};
}
Term enc_term(std::vector<Term> payload, Term key, CryptoPoint at, PointSet dest) {
    return Term{Encryption{std::move(payload), std::make_shared<const Term>(std::move(key)), std::move(at),
                           std::move(dest)}};
}

ProcessPtr nil() {
    static const ProcessPtr the_nil = std::make_shared<const Process>(Process{Nil{}});
    return the_nil;
}
ProcessPtr par(ProcessPtr left, ProcessPtr right) {
    return std::make_shared<const Process>(Process{Parallel{std::move(left), std::move(right)}});
}
ProcessPtr repl(ProcessPtr body) { return std::make_shared<const Process>(Process{Replication{std::move(body)}}); }
ProcessPtr restrict_name(Name n, ProcessPtr body) {
    return std::make_shared<const Process>(Process{Restriction{std::move(n), std::move(body)}});
}
ProcessPtr output(std::vector<Term> terms, ProcessPtr cont) {
    return std::make_shared<const Process>(Process{Output{std::move(terms), std::move(cont)}});
}
ProcessPtr input(std::vector<Term> match, std::vector<Variable> bind, ProcessPtr cont) {
    return std::make_shared<const Process>(Process{Input{std::move(match), std::move(bind), std::move(cont)}});
}
ProcessPtr decryption(Term subject, std::vector<Term> match, std::vector<Variable> bind, Term key, CryptoPoint at,
                      PointSet orig, ProcessPtr cont) {
    return std::make_shared<const Process>(Process{Decryption{std::move(subject), std::move(match), std::move(bind),
                                                              std::move(key), std::move(at), std::move(orig),
                                                              std::move(cont)}});
}

CryptoPoint point(std::string base, std::vector<int> indices) {
    return CryptoPoint{Ident{std::move(base), std::move(indices)}, PointOwner::process};
}

PointSet points(std::initializer_list<CryptoPoint> ps) { return PointSet{false, std::set<CryptoPoint>(ps)}; }

CanonicalName canonical(const Name& name, const IndexPolicy& policy) {
    if (!policy.instantiated || name.id.indices.empty()) {
        return {name.id.str()};
    }
    const auto& keep = *policy.instantiated;
    std::string out = name.id.base;
    const auto& idx = name.id.indices;
    out += idx.size() == 1 ? "_" : "_{";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        out += keep.contains(idx[i]) ? std::to_string(idx[i]) : "*";
    }
    if (idx.size() != 1) {
        out += "}";
    }
    return {out};
}

std::string canonical(const Variable& v) { return v.id.str(); }

namespace {

void term_names(const Term& t, const std::set<Name>& bound, std::set<Name>& out) {
    std::visit(overloaded{
                   [&](const Name& n) {
                       if (!bound.contains(n)) {
                           out.insert(n);
                       }
                   },
                   [](const Variable&) {},
                   [&](const Encryption& e) {
                       for (const auto& p : e.payload) {
                           term_names(p, bound, out);
                       }
                       term_names(*e.key, bound, out);
                   },
               },
               t.node);
}

void process_names(const ProcessPtr& p, std::set<Name>& bound, std::set<Name>& out) {
    std::visit(overloaded{
                   [](const Nil&) {},
                   [&](const Parallel& n) {
                       process_names(n.left, bound, out);
                       process_names(n.right, bound, out);
                   },
                   [&](const Replication& n) { process_names(n.body, bound, out); },
                   [&](const Restriction& n) {
                       const bool fresh = bound.insert(n.name).second;
                       process_names(n.body, bound, out);
                       if (fresh) {
                           bound.erase(n.name);
                       }
                   },
                   [&](const Output& n) {
                       for (const auto& t : n.terms) {
                           term_names(t, bound, out);
                       }
                       process_names(n.cont, bound, out);
                   },
                   [&](const Input& n) {
                       for (const auto& t : n.match) {
                           term_names(t, bound, out);
                       }
                       process_names(n.cont, bound, out);
                   },
                   [&](const Decryption& n) {
                       term_names(n.subject, bound, out);
                       for (const auto& t : n.match) {
                           term_names(t, bound, out);
                       }
                       term_names(n.key, bound, out);
                       process_names(n.cont, bound, out);
                   },
               },
               p->node);
}

void term_profile(const Term& t, ArityProfile& prof) {
    if (const auto* e = std::get_if<Encryption>(&t.node)) {
        prof.enc_arities.insert(e->payload.size());
        for (const auto& p : e->payload) {
            term_profile(p, prof);
        }
        term_profile(*e->key, prof);
    }
}

void tuple_seen(std::size_t k, ArityProfile& prof) {
    prof.tuple_arities.insert(k);
    prof.max_tuple = std::max(prof.max_tuple, k);
}

} // namespace

std::set<Name> free_names(const ProcessPtr& p) {
    std::set<Name> bound;
    std::set<Name> out;
    process_names(p, bound, out);
    return out;
}

ArityProfile arity_profile(const ProcessPtr& root) {
    ArityProfile prof;
    std::function<void(const ProcessPtr&)> walk = [&](const ProcessPtr& p) {
        std::visit(overloaded{
                       [](const Nil&) {},
                       [&](const Parallel& n) {
                           walk(n.left);
                           walk(n.right);
                       },
                       [&](const Replication& n) { walk(n.body); },
                       [&](const Restriction& n) { walk(n.body); },
                       [&](const Output& n) {
                           tuple_seen(n.terms.size(), prof);
                           for (const auto& t : n.terms) {
                               term_profile(t, prof);
                           }
                           walk(n.cont);
                       },
                       [&](const Input& n) {
                           tuple_seen(n.match.size() + n.bind.size(), prof);
                           for (const auto& t : n.match) {
                               term_profile(t, prof);
                           }
                           walk(n.cont);
                       },
                       [&](const Decryption& n) {
                           prof.enc_arities.insert(n.match.size() + n.bind.size());
                           term_profile(n.subject, prof);
                           for (const auto& t : n.match) {
                               term_profile(t, prof);
                           }
                           term_profile(n.key, prof);
                           walk(n.cont);
                       },
                   },
                   p->node);
    };
    walk(root);
    return prof;
}

namespace {
std::size_t term_size(const Term& t) {
    if (const auto* e = std::get_if<Encryption>(&t.node)) {
        std::size_t n = 1 + term_size(*e->key);
        for (const auto& p : e->payload) {
            n += term_size(p);
        }
        return n;
    }
    return 1;
}
} // namespace

std::size_t ast_size(const ProcessPtr& p) {
    return std::visit(overloaded{
                          [](const Nil&) -> std::size_t { return 1; },
                          [](const Parallel& n) { return 1 + ast_size(n.left) + ast_size(n.right); },
                          [](const Replication& n) { return 1 + ast_size(n.body); },
                          [](const Restriction& n) { return 1 + ast_size(n.body); },
                          [](const Output& n) {
                              std::size_t s = 1 + ast_size(n.cont);
                              for (const auto& t : n.terms) {
                                  s += term_size(t);
                              }
                              return s;
                          },
                          [](const Input& n) {
                              std::size_t s = 1 + n.bind.size() + ast_size(n.cont);
                              for (const auto& t : n.match) {
                                  s += term_size(t);
                              }
                              return s;
                          },
                          [](const Decryption& n) {
                              std::size_t s = 1 + n.bind.size() + term_size(n.subject) + term_size(n.key) +
                                              ast_size(n.cont);
                              for (const auto& t : n.match) {
                                  s += term_size(t);
                              }
                              return s;
                          },
                      },
                      p->node);
}

} // namespace lysa
