// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include <set>

#include "lysa/cfa.hpp"

namespace lysa {

const ValueSet& AnalysisResult::rho_of(const std::string& var) const {
    static const ValueSet none;
    auto it = rho.find(var);
    return it == rho.end() ? none : it->second;
}

std::string render_psi(const PsiPair& p) { return "(" + p.first.str() + ", " + p.second.str() + ")"; }

namespace {

class Renderer {
  public:
    explicit Renderer(const AnalysisResult& r) : r_(r), u_(r.universe) {}

    std::string value(ValueId v) {
        if (u_.is_name(v)) {
            return u_.name(v);
        }
        const SiteInfo& s = u_.site(v);
        if (s.attacker) {
            return "AttackerEnc(" + std::to_string(s.arity()) + ")";
        }
        if (open_.contains(v)) {
            return "@" + s.at.str();
        }
        open_.insert(v);
        std::string out = "{";
        for (std::size_t i = 1; i < s.comps.size(); ++i) {
            if (i > 1) {
                out += ", ";
            }
            out += component(s.comps[i]);
        }
        out += "}:";
        const bool nested = s.comps[0].size() == 1 && !u_.is_name(s.comps[0].to_vector().front());
        const std::string key = component(s.comps[0]);
        out += nested ? "(" + key + ")" : key;
        out += " [at " + s.at.str() + " dest " + s.dest.str() + "]";
        open_.erase(v);
        return out;
    }

    std::string component(const ValueSet& set) {
        const std::size_t n = set.size();
        if (n == 0) {
            return "()";
        }
        if (n == 1) {
            return value(set.to_vector().front());
        }
        const ValueSet& z = r_.attacker_knowledge();
        if (r_.attacker && !z.empty() && z.subset_of(set)) {
            if (set == z) {
                return "z•";
            }
            std::vector<ValueId> extra;
            set.for_each([&](ValueId v) {
                if (!z.contains(v)) {
                    extra.push_back(v);
                }
            });
            if (extra.size() > 4) {
                return "(z• | … " + std::to_string(extra.size()) + " more values)";
            }
            std::string out = "(z•";
            for (auto v : extra) {
                out += " | " + value(v);
            }
            return out + ")";
        }
        if (n > 4) {
            return "(… " + std::to_string(n) + " values)";
        }
        std::string out = "(";
        bool first = true;
        set.for_each([&](ValueId v) {
            out += first ? "" : " | ";
            first = false;
            out += value(v);
        });
        return out + ")";
    }

  private:
    const AnalysisResult& r_;
    const Universe& u_;
    std::set<ValueId> open_;
};

} // namespace

std::string AnalysisResult::render(ValueId v) const { return Renderer(*this).value(v); }

std::vector<std::string> AnalysisResult::render(const ValueSet& s) const {
    Renderer r(*this);
    std::vector<std::string> out;
    s.for_each([&](ValueId v) { out.push_back(r.value(v)); });
    return out;
}

std::string AnalysisResult::render_tuple(const TupleSet& t) const {
    Renderer r(*this);
    std::string out = "<";
    for (std::size_t i = 0; i < t.comps.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += r.component(t.comps[i]);
    }
    return out + ">";
}

} // namespace lysa
