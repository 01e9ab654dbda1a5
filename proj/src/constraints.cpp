// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include "lysa/cfa.hpp"

namespace lysa {

std::uint32_t ConstraintSystem::name(const std::string& tag) {
    auto [it, fresh] = name_index_.emplace(tag, static_cast<std::uint32_t>(names_.size()));
    if (fresh) {
        names_.push_back(tag);
    }
    return it->second;
}

std::uint32_t ConstraintSystem::variable(const std::string& canonical_name) {
    auto [it, fresh] = variable_index_.emplace(canonical_name, static_cast<std::uint32_t>(variables_.size()));
    if (fresh) {
        variables_.push_back(canonical_name);
    }
    return it->second;
}

std::uint32_t ConstraintSystem::add_site(SiteDecl site) {
    const auto id = static_cast<std::uint32_t>(sites_.size());
    if (!site.attacker) {
        if (!site_index_.emplace(site.at, id).second) {
            throw Error("crypto-point '" + site.at.str() + "' labels more than one encryption");
        }
    }
    sites_.push_back(std::move(site));
    return id;
}

std::uint32_t ConstraintSystem::add_output(OutputDecl out) {
    outputs_.push_back(std::move(out));
    return static_cast<std::uint32_t>(outputs_.size() - 1);
}

std::uint32_t ConstraintSystem::add_input(InputDecl in) {
    inputs_.push_back(std::move(in));
    return static_cast<std::uint32_t>(inputs_.size() - 1);
}

std::uint32_t ConstraintSystem::add_decrypt(DecryptDecl dec) {
    decrypts_.push_back(std::move(dec));
    return static_cast<std::uint32_t>(decrypts_.size() - 1);
}

std::optional<std::uint32_t> ConstraintSystem::find_site(const CryptoPoint& at) const {
    if (auto it = site_index_.find(at); it != site_index_.end()) {
        return it->second;
    }
    return std::nullopt;
}

TermRef gen_term(ConstraintSystem& cs, const Term& e) {
    return std::visit(
        overloaded{
            [&](const Name& n) {
                return TermRef{TermRef::Kind::value, cs.name(canonical(n, cs.policy()).tag)};
            },
            [&](const Variable& v) { return TermRef{TermRef::Kind::variable, cs.variable(canonical(v))}; },
            [&](const Encryption& enc) {
                SiteDecl site{enc.at, enc.dest, {}, false};
                site.comps.push_back(gen_term(cs, *enc.key));
                for (const auto& t : enc.payload) {
                    site.comps.push_back(gen_term(cs, t));
                }
                return TermRef{TermRef::Kind::site, cs.add_site(std::move(site))};
            },
        },
        e.node);
}

namespace {

std::vector<TermRef> gen_terms(ConstraintSystem& cs, const std::vector<Term>& ts) {
    std::vector<TermRef> out;
    out.reserve(ts.size());
    for (const auto& t : ts) {
        out.push_back(gen_term(cs, t));
    }
    return out;
}

std::vector<std::uint32_t> gen_binders(ConstraintSystem& cs, const std::vector<Variable>& vs) {
    std::vector<std::uint32_t> out;
    out.reserve(vs.size());
    for (const auto& v : vs) {
        out.push_back(cs.variable(canonical(v)));
    }
    return out;
}

} // namespace

void gen_process(ConstraintSystem& cs, const ProcessPtr& p) {
    std::visit(overloaded{
                   [&](const Nil&) {},
                   [&](const Parallel& n) {
                       gen_process(cs, n.left);
                       gen_process(cs, n.right);
                   },
                   [&](const Replication& n) { gen_process(cs, n.body); },
                   [&](const Restriction& n) { gen_process(cs, n.body); },
                   [&](const Output& n) {
                       cs.add_output(OutputDecl{gen_terms(cs, n.terms), false});
                       gen_process(cs, n.cont);
                   },
                   [&](const Input& n) {
                       InputDecl in{gen_terms(cs, n.match), gen_binders(cs, n.bind)};
                       cs.add_input(std::move(in));
                       gen_process(cs, n.cont);
                   },
                   [&](const Decryption& n) {
                       DecryptDecl dec;
                       dec.subject = gen_term(cs, n.subject);
                       dec.key = gen_term(cs, n.key);
                       dec.match = gen_terms(cs, n.match);
                       dec.bind = gen_binders(cs, n.bind);
                       dec.at = n.at;
                       dec.orig = n.orig;
                       cs.add_decrypt(std::move(dec));
                       gen_process(cs, n.cont);
                   },
               },
               p->node);
}

ConstraintSystem generate(const ProcessPtr& p, const IndexPolicy& policy) {
    ConstraintSystem cs(policy);
    gen_process(cs, p);
    return cs;
}

} // namespace lysa
