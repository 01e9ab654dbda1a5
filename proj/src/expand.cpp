// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

// Index expansion: turns the surface template into a closed core process,
// resolving names against binders and checking crypto-point declarations.

#include <algorithm>
#include <map>
#include <optional>

#include "lysa/dsl.hpp"
#include "surface.hpp"

namespace lysa {

namespace {

class Expander {
  public:
    Expander(const std::map<std::string, std::set<int>>& sets, bool legitimate) : sets_(sets), legitimate_(legitimate) {}

    ProcessPtr run(const SProcPtr& body) {
        ProcessPtr p = process(body);
        return resolve(p);
    }

    std::map<CryptoPoint, SourceLocation> points;
    std::vector<std::string> warnings;

    std::set<int> eval_set(const SetExpr& s) const {
        std::set<int> out;
        for (const auto& atom : s.atoms) {
            if (atom.literal) {
                out.insert(atom.values.begin(), atom.values.end());
                continue;
            }
            auto it = sets_.find(atom.name);
            if (it == sets_.end()) {
                throw ModelError(atom.loc, "unknown index set '" + atom.name + "'");
            }
            out.insert(it->second.begin(), it->second.end());
        }
        if (!legitimate_) {
            out.erase(0);
        }
        return out;
    }

  private:
    using Scope = std::map<Ident, Variable>;

    int eval_index(const IndexExpr& e) const {
        switch (e.kind) {
        case IndexExpr::Kind::literal:
            return e.value;
        case IndexExpr::Kind::var: {
            auto it = env_.find(e.name);
            if (it == env_.end()) {
                throw ModelError(e.loc, "unbound index '" + e.name + "'");
            }
            return it->second;
        }
        case IndexExpr::Kind::max:
        case IndexExpr::Kind::min: {
            const auto s = eval_set(e.set);
            if (s.empty()) {
                throw ModelError(e.loc, "max/min of an empty index set");
            }
            return e.kind == IndexExpr::Kind::max ? *s.rbegin() : *s.begin();
        }
        }
        return 0;
    }

    Ident ident(const SIdent& s) const {
        Ident id{s.base, {}};
        for (const auto& e : s.indices) {
            id.indices.push_back(eval_index(e));
        }
        return id;
    }

    CryptoPoint point_ref(const SIdent& s) const {
        if (s.attacker) {
            return CryptoPoint::attacker();
        }
        return CryptoPoint{ident(s), PointOwner::process};
    }

    CryptoPoint declare(const SIdent& s) {
        if (s.attacker) {
            throw ModelError(s.loc, "the attacker crypto-point cannot label a process site");
        }
        CryptoPoint p = point_ref(s);
        if (!points.emplace(p, s.loc).second) {
            throw ModelError(s.loc, "duplicate crypto-point '" + p.str() + "'");
        }
        return p;
    }

    PointSet point_set(const SPointSet& s, const char* kind) {
        if (s.all) {
            return PointSet::everything();
        }
        if (s.points.empty() && warned_.insert(s.loc).second) {
            warnings.push_back(s.loc.str() + ": empty " + std::string(kind) + " set");
        }
        PointSet out;
        for (const auto& p : s.points) {
            out.points.insert(point_ref(p));
            references_.emplace(point_ref(p), p.loc);
        }
        return out;
    }

    Term term(const STerm& t, const Scope& scope) {
        if (!t.enc) {
            Ident id = ident(t.id);
            if (auto it = scope.find(id); it != scope.end()) {
                return Term{it->second};
            }
            return Term{Name{std::move(id)}};
        }
        if (t.payload.empty()) {
            throw ModelError(t.loc, "encryption with an empty payload");
        }
        std::vector<Term> payload;
        payload.reserve(t.payload.size());
        for (const auto& p : t.payload) {
            payload.push_back(term(p, scope));
        }
        Term key = term(*t.key, scope);
        CryptoPoint at = declare(t.at);
        PointSet dest = point_set(t.dest, "dest");
        return enc_term(std::move(payload), std::move(key), std::move(at), std::move(dest));
    }

    std::vector<Term> terms(const std::vector<STerm>& ts, const Scope& scope) {
        std::vector<Term> out;
        out.reserve(ts.size());
        for (const auto& t : ts) {
            out.push_back(term(t, scope));
        }
        return out;
    }

    std::vector<Variable> bind(const std::vector<SIdent>& binders, Scope& scope) {
        std::vector<Variable> out;
        std::set<Ident> here;
        for (const auto& b : binders) {
            Ident id = ident(b);
            if (!here.insert(id).second) {
                throw ModelError(b.loc, "duplicate bound variable '" + id.str() + "'");
            }
            Ident fresh = id;
            while (used_.contains(fresh)) {
                fresh.base += "'";
            }
            used_.insert(fresh);
            Variable v{fresh};
            scope[id] = v;
            out.push_back(std::move(v));
        }
        return out;
    }

    ProcessPtr process(const SProcPtr& p, const Scope& scope = {}) {
        switch (p->kind) {
        case SProc::Kind::nil:
            return nil();
        case SProc::Kind::par: {
            ProcessPtr l = process(p->left, scope);
            return par(std::move(l), process(p->right, scope));
        }
        case SProc::Kind::repl:
            return repl(process(p->left, scope));
        case SProc::Kind::restrict: {
            Name n{ident(p->name)};
            return restrict_name(std::move(n), process(p->left, scope));
        }
        case SProc::Kind::out: {
            auto ts = terms(p->terms, scope);
            return output(std::move(ts), process(p->left, scope));
        }
        case SProc::Kind::in: {
            auto ts = terms(p->terms, scope);
            Scope inner = scope;
            auto vs = bind(p->bind, inner);
            return input(std::move(ts), std::move(vs), process(p->left, inner));
        }
        case SProc::Kind::dec: {
            const std::size_t arity = p->terms.size() + p->bind.size();
            if (arity == 0) {
                throw ModelError(p->loc, "arity mismatch: a decryption pattern needs at least one component");
            }
            if (p->subject.enc && p->subject.payload.size() != arity) {
                throw ModelError(p->loc, "arity mismatch: pattern has " + std::to_string(arity) +
                                             " components but the ciphertext has " +
                                             std::to_string(p->subject.payload.size()));
            }
            Term subject = term(p->subject, scope);
            auto ts = terms(p->terms, scope);
            Term key = term(p->key, scope);
            CryptoPoint at = declare(p->at);
            PointSet orig = point_set(p->orig, "orig");
            Scope inner = scope;
            auto vs = bind(p->bind, inner);
            return decryption(std::move(subject), std::move(ts), std::move(vs), std::move(key), std::move(at),
                              std::move(orig), process(p->left, inner));
        }
        case SProc::Kind::ipar: {
            const auto range = eval_set(p->range);
            std::vector<ProcessPtr> branches;
            for (int v : range) {
                with_index(p->index, v, [&] { branches.push_back(process(p->left, scope)); });
            }
            if (branches.empty()) {
                return nil();
            }
            ProcessPtr acc = branches.back();
            for (auto it = branches.rbegin() + 1; it != branches.rend(); ++it) {
                acc = par(*it, acc);
            }
            return acc;
        }
        case SProc::Kind::inew: {
            const auto range = eval_set(p->range);
            std::vector<Name> names;
            for (int v : range) {
                with_index(p->index, v, [&] { names.push_back(Name{ident(p->name)}); });
            }
            ProcessPtr body = process(p->left, scope);
            for (auto it = names.rbegin(); it != names.rend(); ++it) {
                body = restrict_name(*it, body);
            }
            return body;
        }
        case SProc::Kind::guard:
            return eval_index(p->lhs) == eval_index(p->rhs) ? process(p->left, scope) : process(p->right, scope);
        }
        return nil();
    }

    template <class F>
    void with_index(const std::string& name, int value, F&& f) {
        auto saved = env_.find(name) != env_.end() ? std::optional<int>(env_[name]) : std::nullopt;
        env_[name] = value;
        f();
        if (saved) {
            env_[name] = *saved;
        } else {
            env_.erase(name);
        }
    }

    // Points named in dest/orig sets must be declared somewhere. Undeclared
    // points that carry index 0 belong to principals played by the attacker.
    PointSet fix_set(const PointSet& s) const {
        if (s.all) {
            return s;
        }
        PointSet out;
        for (const auto& p : s.points) {
            if (p.is_attacker() || points.contains(p)) {
                out.points.insert(p);
                continue;
            }
            const auto& idx = p.label.indices;
            if (std::find(idx.begin(), idx.end(), 0) != idx.end()) {
                out.points.insert(CryptoPoint::attacker());
                continue;
            }
            auto it = references_.find(p);
            throw ModelError(it != references_.end() ? it->second : SourceLocation{},
                             "unknown crypto-point '" + p.str() + "'");
        }
        return out;
    }

    Term resolve(const Term& t) const {
        const auto* e = std::get_if<Encryption>(&t.node);
        if (e == nullptr) {
            return t;
        }
        std::vector<Term> payload;
        for (const auto& p : e->payload) {
            payload.push_back(resolve(p));
        }
        return enc_term(std::move(payload), resolve(*e->key), e->at, fix_set(e->dest));
    }

    std::vector<Term> resolve(const std::vector<Term>& ts) const {
        std::vector<Term> out;
        for (const auto& t : ts) {
            out.push_back(resolve(t));
        }
        return out;
    }

    ProcessPtr resolve(const ProcessPtr& p) const {
        return std::visit(
            overloaded{
                [&](const Nil&) { return p; },
                [&](const Parallel& n) { return par(resolve(n.left), resolve(n.right)); },
                [&](const Replication& n) { return repl(resolve(n.body)); },
                [&](const Restriction& n) { return restrict_name(n.name, resolve(n.body)); },
                [&](const Output& n) { return output(resolve(n.terms), resolve(n.cont)); },
                [&](const Input& n) { return input(resolve(n.match), n.bind, resolve(n.cont)); },
                [&](const Decryption& n) {
                    return decryption(resolve(n.subject), resolve(n.match), n.bind, resolve(n.key), n.at,
                                      fix_set(n.orig), resolve(n.cont));
                },
            },
            p->node);
    }

    const std::map<std::string, std::set<int>>& sets_;
    bool legitimate_;
    std::map<std::string, int> env_;
    std::set<Ident> used_;
    std::set<SourceLocation> warned_;
    std::multimap<CryptoPoint, SourceLocation> references_;
};

} // namespace

SourceModel expand_template(std::shared_ptr<const Template> templ, std::string text, const ParseOptions& options) {
    SourceModel model;
    model.text = std::move(text);
    model.legitimate_attacker = options.legitimate_attacker;
    model.templ = std::move(templ);
    for (const auto& decl : model.templ->sets) {
        std::set<int> value;
        if (auto it = options.overrides.find(decl.name); it != options.overrides.end()) {
            value = it->second;
        } else if (decl.rounds) {
            for (int r = 1; r <= options.rounds; ++r) {
                value.insert(r);
            }
        } else {
            Expander ev(model.index_sets, true);
            value = ev.eval_set(decl.value);
        }
        if (!options.legitimate_attacker) {
            value.erase(0);
        }
        model.index_sets[decl.name] = std::move(value);
    }
    Expander ex(model.index_sets, options.legitimate_attacker);
    model.process = ex.run(model.templ->body);
    model.points = std::move(ex.points);
    model.warnings = std::move(ex.warnings);
    return model;
}

ProcessPtr expand(const SourceModel& model) {
    if (!model.templ) {
        return model.process;
    }
    Expander ex(model.index_sets, model.legitimate_attacker);
    return ex.run(model.templ->body);
}

} // namespace lysa
