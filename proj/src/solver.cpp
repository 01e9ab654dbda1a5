// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

// Worklist solver. Cells are the rho variables followed by one inhabitation
// flag per encryption site; each constraint is indexed by the cells it reads
// and re-fired when one of them grows. Matching of values is modulo
// annotations and uses a site-level relation that is extended, as a least
// fixpoint, whenever the worklist runs dry.

#include <deque>
#include <random>

#include "lysa/cfa.hpp"

namespace lysa {

ValueId Universe::add_name(const std::string& tag) {
    if (!sites_.empty()) {
        throw Error("names must be added to a universe before sites");
    }
    auto [it, fresh] = name_index_.emplace(tag, static_cast<ValueId>(names_.size()));
    if (fresh) {
        names_.push_back(tag);
    }
    return it->second;
}

ValueId Universe::add_site(SiteInfo site) {
    const std::size_t index = sites_.size();
    if (site.attacker) {
        attacker_index_.emplace(site.arity(), index);
    } else {
        site_index_.emplace(site.at, index);
    }
    sites_.push_back(std::move(site));
    return site_id(index);
}

std::optional<ValueId> Universe::find_name(const std::string& tag) const {
    if (auto it = name_index_.find(tag); it != name_index_.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::optional<ValueId> Universe::find_site(const CryptoPoint& at) const {
    if (auto it = site_index_.find(at); it != site_index_.end()) {
        return site_id(it->second);
    }
    return std::nullopt;
}

std::optional<ValueId> Universe::attacker_site(std::size_t arity) const {
    if (auto it = attacker_index_.find(arity); it != attacker_index_.end()) {
        return site_id(it->second);
    }
    return std::nullopt;
}

namespace {

enum class Rule : std::uint8_t { seed, include, eavesdrop, inhabit, receive, open, attacker_open };

struct Firing {
    Rule rule;
    std::uint32_t a;
    std::uint32_t b;
    TermRef term;
};

class Worklist {
  public:
    explicit Worklist(const SolverOptions& o) : lifo_(o.lifo) {
        if (o.shuffle_seed) {
            rng_.emplace(*o.shuffle_seed);
        }
    }

    void resize(std::size_t n) { queued_.resize(n, 0); }

    void push(std::uint32_t c) {
        if (queued_[c] != 0) {
            return;
        }
        queued_[c] = 1;
        items_.push_back(c);
    }

    [[nodiscard]] bool empty() const { return items_.empty(); }

    std::uint32_t pop() {
        std::uint32_t c = 0;
        if (rng_) {
            std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
            const std::size_t i = pick(*rng_);
            std::swap(items_[i], items_.back());
            c = items_.back();
            items_.pop_back();
        } else if (lifo_) {
            c = items_.back();
            items_.pop_back();
        } else {
            c = items_.front();
            items_.pop_front();
        }
        queued_[c] = 0;
        return c;
    }

  private:
    bool lifo_;
    std::optional<std::mt19937_64> rng_;
    std::deque<std::uint32_t> items_;
    std::vector<char> queued_;
};

class Solver {
  public:
    Solver(const ConstraintSystem& cs, const SolverOptions& options)
        : cs_(cs), options_(options), names_(static_cast<ValueId>(cs.names().size())),
          vars_(cs.variables().size()), sites_(cs.sites().size()), work_(options) {
        if (names_ + sites_ > options.max_universe) {
            throw ResourceLimit("value universe of " + std::to_string(names_ + sites_) + " exceeds the limit of " +
                                std::to_string(options.max_universe));
        }
        rho_.resize(vars_);
        inhabited_.resize(sites_, 0);
        singletons_.resize(names_ + sites_);
        match_.resize(sites_);
        deps_.resize(vars_ + sites_);
        build();
    }

    AnalysisResult run() {
        std::size_t rounds = 0;
        for (;;) {
            drain();
            ++rounds;
            if (!extend_match()) {
                break;
            }
            for (auto c : match_users_) {
                work_.push(c);
            }
        }
        return result(rounds);
    }

  private:
    [[nodiscard]] std::uint32_t cell_of_site(std::uint32_t s) const { return static_cast<std::uint32_t>(vars_ + s); }

    const ValueSet& singleton(ValueId v) {
        auto& s = singletons_[v];
        if (s.empty()) {
            s.insert(v);
        }
        return s;
    }

    const ValueSet& theta(const TermRef& t) {
        switch (t.kind) {
        case TermRef::Kind::value:
            return singleton(t.id);
        case TermRef::Kind::variable:
            return rho_[t.id];
        case TermRef::Kind::site:
            return inhabited_[t.id] != 0 ? singleton(names_ + t.id) : empty_;
        }
        return empty_;
    }

    void depend(const TermRef& t, std::uint32_t c) {
        if (t.kind == TermRef::Kind::variable) {
            deps_[t.id].push_back(c);
        } else if (t.kind == TermRef::Kind::site) {
            deps_[cell_of_site(t.id)].push_back(c);
        }
    }

    std::uint32_t add(Firing f) {
        firings_.push_back(f);
        return static_cast<std::uint32_t>(firings_.size() - 1);
    }

    // The matched prefix of input `in` can never agree with output `out`.
    [[nodiscard]] bool clashes(const InputDecl& in, const OutputDecl& out) const {
        for (std::size_t i = 0; i < in.match.size(); ++i) {
            const TermRef& p = in.match[i];
            const TermRef& q = out.comps[i];
            if (p.kind == TermRef::Kind::value && q.kind == TermRef::Kind::value && p.id != q.id) {
                return true;
            }
            if ((p.kind == TermRef::Kind::value && q.kind == TermRef::Kind::site) ||
                (p.kind == TermRef::Kind::site && q.kind == TermRef::Kind::value)) {
                return true;
            }
        }
        return false;
    }

    void build() {
        for (const auto& c : cs_.constraints()) {
            switch (c.kind) {
            case Constraint::Kind::seed:
                add({Rule::seed, c.a, c.b, {}});
                break;
            case Constraint::Kind::include: {
                auto id = add({Rule::include, c.a, c.b, c.term});
                depend(c.term, id);
                break;
            }
            case Constraint::Kind::eavesdrop: {
                auto id = add({Rule::eavesdrop, c.a, c.b, {}});
                for (const auto& t : cs_.outputs()[c.a].comps) {
                    depend(t, id);
                }
                break;
            }
            case Constraint::Kind::attacker_open: {
                auto id = add({Rule::attacker_open, c.a, c.b, {}});
                deps_[c.b].push_back(id);
                match_users_.push_back(id);
                break;
            }
            case Constraint::Kind::receive:
                add_receive(c.a, c.b);
                break;
            case Constraint::Kind::open:
                add_open(c.a);
                break;
            }
        }
        for (std::uint32_t s = 0; s < sites_; ++s) {
            auto id = add({Rule::inhabit, s, 0, {}});
            for (const auto& t : cs_.sites()[s].comps) {
                depend(t, id);
            }
        }
        for (std::uint32_t d = 0; d < cs_.decrypts().size(); ++d) {
            add_open(d);
        }
        for (std::uint32_t i = 0; i < cs_.inputs().size(); ++i) {
            const auto& in = cs_.inputs()[i];
            const std::size_t arity = in.match.size() + in.bind.size();
            for (std::uint32_t o = 0; o < cs_.outputs().size(); ++o) {
                const auto& out = cs_.outputs()[o];
                if (out.comps.size() == arity && !clashes(in, out)) {
                    add_receive(i, o);
                }
            }
        }
        opened_.resize(firings_.size());
        work_.resize(firings_.size());
        for (std::uint32_t c = 0; c < firings_.size(); ++c) {
            work_.push(c);
        }
    }

    void add_receive(std::uint32_t in, std::uint32_t out) {
        auto id = add({Rule::receive, in, out, {}});
        for (const auto& t : cs_.inputs()[in].match) {
            depend(t, id);
        }
        for (const auto& t : cs_.outputs()[out].comps) {
            depend(t, id);
        }
        match_users_.push_back(id);
    }

    void add_open(std::uint32_t d) {
        auto id = add({Rule::open, d, 0, {}});
        const auto& dec = cs_.decrypts()[d];
        depend(dec.subject, id);
        depend(dec.key, id);
        for (const auto& t : dec.match) {
            depend(t, id);
        }
        match_users_.push_back(id);
    }

    void grow(std::uint32_t var, const ValueSet& values) {
        if (rho_[var].unite(values)) {
            for (auto c : deps_[var]) {
                work_.push(c);
            }
        }
    }

    void grow(std::uint32_t var, ValueId v) {
        if (rho_[var].insert(v)) {
            for (auto c : deps_[var]) {
                work_.push(c);
            }
        }
    }

    /// Some value of `a` equals some value of `b`, ignoring annotations.
    [[nodiscard]] bool matches(const ValueSet& a, const ValueSet& b) const {
        if (a.intersects_below(b, names_)) {
            return true;
        }
        bool found = false;
        a.for_each(
            [&](ValueId s) {
                if (!found && match_[s - names_].intersects(b)) {
                    found = true;
                }
            },
            names_);
        return found;
    }

    bool all_inhabited(const std::vector<TermRef>& ts) {
        for (const auto& t : ts) {
            if (theta(t).empty()) {
                return false;
            }
        }
        return true;
    }

    // Once a site shows up in a subject, the opening constraint also reads
    // that site's components.
    void watch_site(std::uint32_t c, ValueId v) {
        if (opened_[c].insert(v)) {
            for (const auto& t : cs_.sites()[v - names_].comps) {
                depend(t, c);
            }
        }
    }

    void fire(std::uint32_t c) {
        const Firing f = firings_[c];
        switch (f.rule) {
        case Rule::seed:
            grow(f.b, f.a);
            break;
        case Rule::include:
            grow(f.b, theta(f.term));
            break;
        case Rule::eavesdrop: {
            const auto& out = cs_.outputs()[f.a];
            if (all_inhabited(out.comps)) {
                for (const auto& t : out.comps) {
                    grow(f.b, theta(t));
                }
            }
            break;
        }
        case Rule::inhabit:
            if (inhabited_[f.a] == 0 && all_inhabited(cs_.sites()[f.a].comps)) {
                inhabited_[f.a] = 1;
                for (auto d : deps_[cell_of_site(f.a)]) {
                    work_.push(d);
                }
            }
            break;
        case Rule::receive: {
            const auto& in = cs_.inputs()[f.a];
            const auto& out = cs_.outputs()[f.b];
            if (!all_inhabited(out.comps)) {
                break;
            }
            for (std::size_t i = 0; i < in.match.size(); ++i) {
                if (!matches(theta(in.match[i]), theta(out.comps[i]))) {
                    return;
                }
            }
            for (std::size_t i = 0; i < in.bind.size(); ++i) {
                grow(in.bind[i], theta(out.comps[in.match.size() + i]));
            }
            break;
        }
        case Rule::open:
            open(c, cs_.decrypts()[f.a]);
            break;
        case Rule::attacker_open:
            attacker_open(c, f.b);
            break;
        }
    }

    void open(std::uint32_t c, const DecryptDecl& dec) {
        const std::size_t arity = dec.match.size() + dec.bind.size();
        for (ValueId v : theta(dec.subject).to_vector()) {
            if (v < names_) {
                continue;
            }
            watch_site(c, v);
            const SiteDecl& site = cs_.sites()[v - names_];
            if (site.comps.size() != arity + 1 || !matches(theta(site.comps[0]), theta(dec.key))) {
                continue;
            }
            bool ok = true;
            for (std::size_t i = 0; ok && i < dec.match.size(); ++i) {
                ok = matches(theta(dec.match[i]), theta(site.comps[i + 1]));
            }
            if (!ok) {
                continue;
            }
            for (std::size_t i = 0; i < dec.bind.size(); ++i) {
                grow(dec.bind[i], theta(site.comps[dec.match.size() + i + 1]));
            }
            if (!dec.orig.contains(site.at) || !site.dest.contains(dec.at)) {
                psi_.emplace(site.at, dec.at);
            }
        }
    }

    void attacker_open(std::uint32_t c, std::uint32_t z) {
        for (ValueId v : rho_[z].to_vector()) {
            if (v < names_) {
                continue;
            }
            const SiteDecl& site = cs_.sites()[v - names_];
            if (site.attacker) {
                continue;
            }
            watch_site(c, v);
            if (!matches(theta(site.comps[0]), rho_[z])) {
                continue;
            }
            for (std::size_t i = 1; i < site.comps.size(); ++i) {
                const ValueSet payload = theta(site.comps[i]);
                grow(z, payload);
            }
            if (!site.dest.contains(CryptoPoint::attacker())) {
                psi_.emplace(site.at, CryptoPoint::attacker());
            }
        }
    }

    void drain() {
        while (!work_.empty()) {
            const std::uint32_t c = work_.pop();
            if (++fired_ > options_.max_firings) {
                throw ResourceLimit("constraint firings exceed the limit of " + std::to_string(options_.max_firings));
            }
            fire(c);
        }
    }

    /// Extends the site match relation to its least fixpoint for the current
    /// estimates; returns whether it grew.
    bool extend_match() {
        std::map<std::size_t, std::vector<std::uint32_t>> by_arity;
        for (std::uint32_t s = 0; s < sites_; ++s) {
            if (inhabited_[s] != 0) {
                by_arity[cs_.sites()[s].comps.size()].push_back(s);
            }
        }
        bool grew = false;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [arity, group] : by_arity) {
                for (std::size_t x = 0; x < group.size(); ++x) {
                    for (std::size_t y = x; y < group.size(); ++y) {
                        const std::uint32_t s = group[x];
                        const std::uint32_t t = group[y];
                        if (match_[s].contains(names_ + t) || !sites_match(s, t)) {
                            continue;
                        }
                        match_[s].insert(names_ + t);
                        match_[t].insert(names_ + s);
                        changed = true;
                        grew = true;
                    }
                }
            }
        }
        return grew;
    }

    bool sites_match(std::uint32_t s, std::uint32_t t) {
        const auto& a = cs_.sites()[s].comps;
        const auto& b = cs_.sites()[t].comps;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!matches(theta(a[i]), theta(b[i]))) {
                return false;
            }
        }
        return true;
    }

    AnalysisResult result(std::size_t rounds) {
        AnalysisResult r;
        r.policy = cs_.policy();
        for (const auto& n : cs_.names()) {
            r.universe.add_name(n);
        }
        for (std::uint32_t s = 0; s < sites_; ++s) {
            const auto& decl = cs_.sites()[s];
            SiteInfo info{decl.at, decl.dest, {}, decl.attacker};
            for (const auto& t : decl.comps) {
                info.comps.push_back(theta(t));
            }
            r.universe.add_site(std::move(info));
        }
        for (std::uint32_t v = 0; v < vars_; ++v) {
            r.rho[cs_.variables()[v]] = rho_[v];
        }
        for (const auto& out : cs_.outputs()) {
            if (!all_inhabited(out.comps)) {
                continue;
            }
            TupleSet t;
            t.wild = out.wild;
            for (const auto& c : out.comps) {
                t.comps.push_back(theta(c));
            }
            r.kappa.push_back(std::move(t));
        }
        r.psi = psi_;
        r.attacker = cs_.attacker;
        r.stats.universe = names_ + sites_;
        r.stats.constraints = firings_.size();
        r.stats.firings = fired_;
        r.stats.match_rounds = rounds;
        return r;
    }

    const ConstraintSystem& cs_;
    const SolverOptions& options_;
    ValueId names_;
    std::size_t vars_;
    std::size_t sites_;
    std::vector<ValueSet> rho_;
    std::vector<char> inhabited_;
    std::vector<ValueSet> singletons_;
    ValueSet empty_;
    std::vector<ValueSet> match_;
    std::vector<Firing> firings_;
    std::vector<std::vector<std::uint32_t>> deps_;
    std::vector<ValueSet> opened_;
    std::vector<std::uint32_t> match_users_;
    std::set<PsiPair> psi_;
    Worklist work_;
    std::size_t fired_ = 0;
};

} // namespace

AnalysisResult solve(const ConstraintSystem& cs, const SolverOptions& options) {
    Solver solver(cs, options);
    return solver.run();
}

} // namespace lysa
