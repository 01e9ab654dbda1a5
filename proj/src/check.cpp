// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

// Independent validator: walks the process and tests every clause of the
// term and process rules (and the attacker conditions, when the result
// carries an attacker) against a candidate result. It shares no code with
// the generator or the solver.

#include "lysa/cfa.hpp"

namespace lysa {

namespace {

class Checker {
  public:
    explicit Checker(const AnalysisResult& r) : r_(r), u_(r.universe) { compute_match(); }

    CheckReport report;

    void process(const ProcessPtr& p) {
        std::visit(overloaded{
                       [&](const Nil&) {},
                       [&](const Parallel& n) {
                           process(n.left);
                           process(n.right);
                       },
                       [&](const Replication& n) { process(n.body); },
                       [&](const Restriction& n) { process(n.body); },
                       [&](const Output& n) {
                           check_output(n);
                           process(n.cont);
                       },
                       [&](const Input& n) {
                           check_input(n);
                           process(n.cont);
                       },
                       [&](const Decryption& n) {
                           check_decryption(n);
                           process(n.cont);
                       },
                   },
                   p->node);
    }

    void attacker(const AttackerSummary& a) {
        const ValueSet& z = r_.attacker_knowledge();
        for (const auto& tag : a.seeds) {
            auto id = u_.find_name(tag);
            if (!id || !z.contains(*id)) {
                fail("initial attacker knowledge lacks " + tag);
            }
        }
        for (std::size_t i = 0; i < r_.kappa.size(); ++i) {
            for (const auto& c : r_.kappa[i].comps) {
                if (!c.subset_of(z)) {
                    fail("a component of network tuple " + std::to_string(i) + " is not known to the attacker");
                }
            }
        }
        z.for_each(
            [&](ValueId v) {
                const SiteInfo& s = u_.site(v);
                if (s.attacker || !has_value(s) || !matches(s.comps[0], z)) {
                    return;
                }
                for (std::size_t i = 1; i < s.comps.size(); ++i) {
                    if (!s.comps[i].subset_of(z)) {
                        fail("attacker decryption of " + r_.render(v) + " is not closed");
                    }
                }
                if (!s.dest.contains(CryptoPoint::attacker())) {
                    require_psi({s.at, CryptoPoint::attacker()});
                }
            },
            static_cast<ValueId>(u_.name_count()));
        if (z.empty()) {
            return;
        }
        for (auto k : a.enc_arities) {
            auto site = u_.attacker_site(k);
            if (!site) {
                fail("no attacker encryption of arity " + std::to_string(k));
                continue;
            }
            const SiteInfo& s = u_.site(*site);
            for (const auto& c : s.comps) {
                if (!z.subset_of(c)) {
                    fail("attacker encryption of arity " + std::to_string(k) + " does not range over z•");
                }
            }
            if (!z.contains(*site)) {
                fail("attacker does not know its own encryptions of arity " + std::to_string(k));
            }
        }
        for (auto k : a.tuple_arities) {
            bool found = false;
            for (const auto& t : r_.kappa) {
                found = found || (t.comps.size() == k && covers(t, std::vector<ValueSet>(k, z)));
            }
            if (!found) {
                fail("attacker cannot send tuples of arity " + std::to_string(k));
            }
        }
    }

  private:
    void fail(const std::string& why) {
        report.ok = false;
        report.violations.push_back(why);
    }

    void require_psi(const PsiPair& p) {
        report.required_psi.insert(p);
        if (!r_.psi.contains(p)) {
            fail("psi lacks (" + p.first.str() + ", " + p.second.str() + ")");
        }
    }

    static bool has_value(const SiteInfo& s) {
        for (const auto& c : s.comps) {
            if (c.empty()) {
                return false;
            }
        }
        return true;
    }

    ValueSet theta(const Term& t) {
        ValueSet out;
        std::visit(overloaded{
                       [&](const Name& n) {
                           const std::string tag = canonical(n, r_.policy).tag;
                           if (auto id = u_.find_name(tag)) {
                               out.insert(*id);
                           } else {
                               fail("name " + tag + " is missing from the universe");
                           }
                       },
                       [&](const Variable& v) { out = r_.rho_of(canonical(v)); },
                       [&](const Encryption& e) {
                           std::vector<ValueSet> comps{theta(*e.key)};
                           for (const auto& p : e.payload) {
                               comps.push_back(theta(p));
                           }
                           auto id = u_.find_site(e.at);
                           if (!id) {
                               fail("encryption site " + e.at.str() + " is missing from the universe");
                               return;
                           }
                           const SiteInfo& s = u_.site(*id);
                           if (s.comps.size() != comps.size() || !(s.dest == e.dest)) {
                               fail("encryption site " + e.at.str() + " has the wrong shape");
                               return;
                           }
                           bool inhabited = true;
                           for (std::size_t i = 0; i < comps.size(); ++i) {
                               inhabited = inhabited && !comps[i].empty();
                               if (!comps[i].subset_of(s.comps[i])) {
                                   fail("encryption site " + e.at.str() + " misses values of component " +
                                        std::to_string(i));
                               }
                           }
                           if (inhabited) {
                               out.insert(*id);
                           }
                       },
                   },
                   t.node);
        return out;
    }

    std::vector<ValueSet> thetas(const std::vector<Term>& ts) {
        std::vector<ValueSet> out;
        for (const auto& t : ts) {
            out.push_back(theta(t));
        }
        return out;
    }

    static bool covers(const TupleSet& t, const std::vector<ValueSet>& comps) {
        for (std::size_t i = 0; i < comps.size(); ++i) {
            if (!comps[i].subset_of(t.comps[i])) {
                return false;
            }
        }
        return true;
    }

    void check_output(const Output& n) {
        auto comps = thetas(n.terms);
        for (const auto& c : comps) {
            if (c.empty()) {
                return;
            }
        }
        for (const auto& t : r_.kappa) {
            if (t.comps.size() == comps.size() && covers(t, comps)) {
                return;
            }
        }
        fail("network lacks the tuples of output <" + std::to_string(comps.size()) + ">");
    }

    void check_input(const Input& n) {
        auto pattern = thetas(n.match);
        const std::size_t arity = n.match.size() + n.bind.size();
        for (const auto& t : r_.kappa) {
            if (t.comps.size() != arity) {
                continue;
            }
            bool ok = true;
            for (std::size_t i = 0; ok && i < pattern.size(); ++i) {
                ok = matches(pattern[i], t.comps[i]);
            }
            for (std::size_t i = 0; ok && i < n.bind.size(); ++i) {
                if (!t.comps[pattern.size() + i].subset_of(r_.rho_of(canonical(n.bind[i])))) {
                    fail("rho(" + canonical(n.bind[i]) + ") misses received values");
                }
            }
        }
    }

    void check_decryption(const Decryption& n) {
        const ValueSet subject = theta(n.subject);
        const ValueSet key = theta(n.key);
        auto pattern = thetas(n.match);
        const std::size_t arity = n.match.size() + n.bind.size();
        subject.for_each(
            [&](ValueId v) {
                const SiteInfo& s = u_.site(v);
                if (s.arity() != arity || !has_value(s) || !matches(s.comps[0], key)) {
                    return;
                }
                for (std::size_t i = 0; i < pattern.size(); ++i) {
                    if (!matches(pattern[i], s.comps[i + 1])) {
                        return;
                    }
                }
                for (std::size_t i = 0; i < n.bind.size(); ++i) {
                    if (!s.comps[pattern.size() + i + 1].subset_of(r_.rho_of(canonical(n.bind[i])))) {
                        fail("rho(" + canonical(n.bind[i]) + ") misses decrypted values");
                    }
                }
                if (!n.orig.contains(s.at) || !s.dest.contains(n.at)) {
                    require_psi({s.at, n.at});
                }
            },
            static_cast<ValueId>(u_.name_count()));
    }

    bool matches(const ValueSet& a, const ValueSet& b) const {
        bool found = false;
        a.for_each([&](ValueId x) {
            if (found) {
                return;
            }
            found = u_.is_name(x) ? b.contains(x) : match_[x - u_.name_count()].intersects(b);
        });
        return found;
    }

    // Naive least fixpoint of "some value of site s equals some value of
    // site t up to annotations".
    void compute_match() {
        match_.resize(u_.site_count());
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < u_.site_count(); ++i) {
                const SiteInfo& a = u_.site(u_.site_id(i));
                if (!has_value(a)) {
                    continue;
                }
                for (std::size_t j = 0; j < u_.site_count(); ++j) {
                    const ValueId t = u_.site_id(j);
                    const SiteInfo& b = u_.site(t);
                    if (match_[i].contains(t) || a.comps.size() != b.comps.size()) {
                        continue;
                    }
                    bool ok = true;
                    for (std::size_t k = 0; ok && k < a.comps.size(); ++k) {
                        ok = matches(a.comps[k], b.comps[k]);
                    }
                    if (ok) {
                        match_[i].insert(t);
                        changed = true;
                    }
                }
            }
        }
    }

    const AnalysisResult& r_;
    const Universe& u_;
    std::vector<ValueSet> match_;
};

} // namespace

CheckReport check_report(const ProcessPtr& p, const AnalysisResult& result) {
    Checker c(result);
    c.process(p);
    if (result.attacker) {
        c.attacker(*result.attacker);
    }
    return c.report;
}

bool check(const ProcessPtr& p, const AnalysisResult& result) { return check_report(p, result).ok; }

bool member(const AnalysisResult& r, const AbstractTree& v, ValueId id) {
    const Universe& u = r.universe;
    if (v.is_name()) {
        return u.is_name(id) && u.name(id) == v.name;
    }
    if (u.is_name(id)) {
        return false;
    }
    const SiteInfo& s = u.site(id);
    if (s.arity() != v.payload.size()) {
        return false;
    }
    if (!s.attacker && (!(s.at == v.at) || !(s.dest == v.dest))) {
        return false;
    }
    if (s.attacker && !v.at.is_attacker()) {
        return false;
    }
    if (!member(r, v.key.front(), s.comps[0])) {
        return false;
    }
    for (std::size_t i = 0; i < v.payload.size(); ++i) {
        if (!member(r, v.payload[i], s.comps[i + 1])) {
            return false;
        }
    }
    return true;
}

bool member(const AnalysisResult& r, const AbstractTree& v, const ValueSet& s) {
    const Universe& u = r.universe;
    if (v.is_name()) {
        auto id = u.find_name(v.name);
        return id && s.contains(*id);
    }
    auto id = v.at.is_attacker() ? u.attacker_site(v.payload.size()) : u.find_site(v.at);
    return id && s.contains(*id) && member(r, v, *id);
}

bool kappa_contains(const AnalysisResult& r, const std::vector<AbstractTree>& tuple) {
    for (const auto& t : r.kappa) {
        if (t.comps.size() != tuple.size()) {
            continue;
        }
        bool ok = true;
        for (std::size_t i = 0; ok && i < tuple.size(); ++i) {
            ok = member(r, tuple[i], t.comps[i]);
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

} // namespace lysa
