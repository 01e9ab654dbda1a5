// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "lysa/corpus.hpp"
#include "lysa/oracle.hpp"
#include "support.hpp"

using namespace lysa;
using lysa::testing::load_model;

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point since) {
    return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string fixed(double v, int digits = 3) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << v;
    return out.str();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

const char* const example2 =
    "new(K) <A, B, KA, {K}:KA [at lA dest {lB}]>.0 | (A, B; xKA, x). decrypt x as {; xK}:xKA [at lB orig {lA}] in 0";

const std::vector<Scenario>& corpus() {
    static const std::vector<Scenario> all = load_corpus(lysa::testing::corpus_file("scenarios.json"));
    return all;
}

const Scenario* find_scenario(const std::string& name) {
    for (const auto& s : corpus()) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

Outcome exact_example() {
    Outcome o;
    const auto start = Clock::now();
    const ProcessPtr p = parse(example2).process;
    const AnalysisResult r = analyze(p);
    const double t = seconds(start);
    std::vector<std::string> kappa;
    for (const auto& ts : r.kappa) {
        kappa.push_back(r.render_tuple(ts));
    }
    o.require(kappa == std::vector<std::string>{"<A, B, KA, {K}:KA [at lA dest {lB}]>"}, "kappa differs");
    o.require(r.rho.size() == 3, "rho has " + std::to_string(r.rho.size()) + " variables");
    o.require(r.render(r.rho_of("xKA")) == std::vector<std::string>{"KA"}, "rho(xKA) differs");
    o.require(r.render(r.rho_of("x")) == std::vector<std::string>{"{K}:KA [at lA dest {lB}]"}, "rho(x) differs");
    o.require(r.render(r.rho_of("xK")) == std::vector<std::string>{"K"}, "rho(xK) differs");
    o.require(r.psi.empty(), "psi not empty");
    o.require(check(p, r), "validation failed");
    o.require(t < 1.0, "took " + fixed(t) + " s");
    o.detail = o.pass ? "exact estimate in " + fixed(t * 1000) + " ms" : o.detail;
    return o;
}

Outcome attacked_example() {
    Outcome o;
    const auto start = Clock::now();
    const ProcessPtr p = parse(example2).process;
    AnalyzeOptions opts;
    opts.attacker = AttackerConfig::for_process(p);
    const AnalysisResult r = analyze(p, opts);
    const double t = seconds(start);
    const auto known = r.render(r.attacker_knowledge());
    for (const char* v : {"KA", "K", "{K}:KA [at lA dest {lB}]"}) {
        o.require(std::find(known.begin(), known.end(), v) != known.end(), std::string("attacker misses ") + v);
    }
    o.require(r.psi.contains({point("lA"), CryptoPoint::attacker()}), "(lA, l•) not in psi");
    o.require(!confidential(r, Name{{"K", {}}}), "K reported confidential");
    o.require(check(p, r), "validation failed");
    o.require(t < 1.0, "took " + fixed(t) + " s");
    if (o.pass) {
        o.detail = "attacker learns K, psi has " + std::to_string(r.psi.size()) + " pairs, " + fixed(t * 1000) + " ms";
    }
    return o;
}

Outcome protocol_verdicts() {
    Outcome o;
    double worst = 0;
    std::size_t n = 0;
    for (const char* name :
         {"case1-base-2r-leak", "case1-fixed-2r-leak", "case2-base-2r-leak", "case2-fixed-2r-leak",
          "case1-base-2r-leak-legit", "case1-fixed-2r-leak-legit", "case2-base-2r-leak-legit", "case2-fixed-2r-leak-legit"}) {
        const Scenario* s = find_scenario(name);
        if (s == nullptr) {
            o.require(false, std::string("missing scenario ") + name);
            continue;
        }
        const auto start = Clock::now();
        const Report r = run_scenario(*s);
        const double t = seconds(start);
        worst = std::max(worst, t);
        ++n;
        const bool flawed = s->name.find("base") != std::string::npos;
        o.require(r.expectations_met(), s->name + ": " + (r.mismatches.empty() ? "" : r.mismatches.front()));
        o.require(r.psi.empty() != flawed, s->name + ": authentication verdict");
        o.require(r.secrets_safe() != flawed, s->name + ": confidentiality verdict");
        o.require(r.validated, s->name + ": not validated");
        o.require(t < 10.0, s->name + " took " + fixed(t) + " s");
    }
    if (o.pass) {
        o.detail = std::to_string(n) + " scenarios, flawed variants break and fixed ones hold, slowest " +
                   fixed(worst) + " s";
    }
    return o;
}

Outcome honest_coverage() {
    Outcome o;
    const auto start = Clock::now();
    std::size_t events = 0;
    std::size_t states = 0;
    std::size_t uncovered = 0;
    auto cover = [&](const ProcessPtr& p, int depth, const std::string& label) {
        const AnalysisResult r = analyze(p);
        const auto stats = explore(p, depth, {}, [&](const Event& e) {
            if (!covered(e, r)) {
                ++uncovered;
                o.require(false, label + ": " + e.str());
            }
            return uncovered < 5;
        });
        events += stats.events;
        states += stats.states;
    };
    for (const auto& file : lysa::testing::model_files()) {
        for (const bool legitimate : {false, true}) {
            cover(load_model(file, 2, legitimate, {{"X", {1}}}).process, 6, file);
        }
    }
    lysa::testing::RandomProcess gen(2024);
    for (int i = 0; i < 200; ++i) {
        const ProcessPtr p = gen.next(12);
        cover(p, 6, "random #" + std::to_string(i) + " " + pretty(p));
    }
    if (o.pass) {
        o.detail = std::to_string(events) + " distinct events over " + std::to_string(states) +
                   " states covered (12 model configurations, 200 random processes, " + fixed(seconds(start), 1) +
                   " s)";
    }
    return o;
}

Outcome replay_witnesses() {
    Outcome o;
    const std::map<std::string, std::set<int>> one{{"X", {1}}};
    std::vector<std::string> found;
    for (const auto* family : {"case1", "case2"}) {
        for (const auto* variant : {"base", "fixed"}) {
            const std::string file = std::string(family) + "_" + variant + ".lysa";
            const auto captured = capture(load_model(file, 1, false, one).process, 256);
            const ProcessPtr now = load_model(file, 2, false, one).process;
            std::optional<Event> witness;
            const auto stats = explore(now, 12, captured, [&](const Event& e) {
                if (stale_binding(e, 2)) {
                    witness = e;
                    return false;
                }
                return true;
            });
            const bool flawed = std::string(variant) == "base";
            if (witness.has_value() != flawed) {
                o.require(false, file + (flawed ? ": no stale binding found" : ": stale binding " + witness->str()));
            }
            if (witness) {
                found.push_back(file + " " + witness->str());
            }
            // The static verdict of the matching scenario has to agree.
            const Scenario* s = find_scenario(std::string(family) + "-" + variant + "-2r-leak");
            if (s != nullptr) {
                const Report r = run_scenario(*s);
                o.require(r.psi.empty() != witness.has_value(), file + ": analysis disagrees with the execution");
            }
            if (!flawed) {
                found.push_back(file + " clean in " + std::to_string(stats.states) + " states");
            }
        }
    }
    if (o.pass) {
        std::string d;
        for (const auto& f : found) {
            d += (d.empty() ? "" : ", ") + f;
        }
        o.detail = d;
    }
    return o;
}

// Removes one element from rho, kappa or psi. Returns a description, or an
// empty string when the removed kappa slice is still present in another
// tuple set, so the set of tuples denoted did not change.
std::string delete_one(AnalysisResult& r, std::mt19937_64& rng) {
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    for (;;) {
        const std::size_t kind = pick(3);
        if (kind == 0) {
            std::vector<std::string> vars;
            for (const auto& [v, s] : r.rho) {
                if (!s.empty()) {
                    vars.push_back(v);
                }
            }
            if (vars.empty()) {
                continue;
            }
            const std::string var = vars[pick(vars.size())];
            const auto values = r.rho[var].to_vector();
            const ValueId v = values[pick(values.size())];
            r.rho[var].erase(v);
            return "rho(" + var + ") - " + r.render(v);
        }
        if (kind == 1) {
            if (r.kappa.empty()) {
                continue;
            }
            const std::size_t ti = pick(r.kappa.size());
            TupleSet& t = r.kappa[ti];
            if (t.comps.empty()) {
                continue;
            }
            const std::size_t ci = pick(t.comps.size());
            const auto values = t.comps[ci].to_vector();
            const ValueId v = values[pick(values.size())];
            std::vector<ValueSet> slice = t.comps;
            slice[ci] = ValueSet{};
            slice[ci].insert(v);
            t.comps[ci].erase(v);
            for (std::size_t other = 0; other < r.kappa.size(); ++other) {
                const TupleSet& u = r.kappa[other];
                if (other == ti || u.comps.size() != slice.size()) {
                    continue;
                }
                bool inside = true;
                for (std::size_t j = 0; inside && j < slice.size(); ++j) {
                    inside = slice[j].subset_of(u.comps[j]);
                }
                if (inside) {
                    return {};
                }
            }
            return "kappa[" + std::to_string(ti) + "][" + std::to_string(ci) + "] - " + r.render(v);
        }
        if (r.psi.empty()) {
            continue;
        }
        auto it = r.psi.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(pick(r.psi.size())));
        const std::string what = "psi - " + render_psi(*it);
        r.psi.erase(it);
        return what;
    }
}

Outcome minimality() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::size_t tried = 0;
    std::size_t redundant_slices = 0;
    for (const auto& s : corpus()) {
        const Report rep = run_scenario(s);
        int done = 0;
        int attempts = 0;
        while (done < 20 && attempts < 200) {
            ++attempts;
            AnalysisResult weakened = rep.result;
            const std::string what = delete_one(weakened, rng);
            if (what.empty()) {
                ++redundant_slices;
                continue;
            }
            ++done;
            ++tried;
            if (check(rep.source.process, weakened)) {
                o.require(false, s.name + ": still valid after " + what);
            }
        }
        o.require(done == 20, s.name + ": only " + std::to_string(done) + " effective deletions");

        SolverOptions a;
        a.shuffle_seed = 1;
        SolverOptions b;
        b.shuffle_seed = 99;
        o.require(run_scenario(s, a).to_json(false).dump() == run_scenario(s, b).to_json(false).dump(),
                  s.name + ": shuffled solver orders disagree");
    }
    if (o.pass) {
        o.detail = std::to_string(tried) + " deletions all rejected by the validator, " +
                   std::to_string(redundant_slices) + " kappa deletions skipped as covered by another tuple set, " +
                   "shuffled solves identical";
    }
    return o;
}

Outcome scaling() {
    Outcome o;
    auto timed = [&](std::set<int> x) {
        Scenario s;
        s.name = "scaling";
        s.model = lysa::testing::corpus_file("case1_base.lysa");
        s.index_sets = {{"X", std::move(x)}};
        s.rounds = 2;
        s.legitimate_attacker = true;
        s.leaks = {"LK_{*,*,1}"};
        s.secrets = {"MSG_{*,*,2}"};
        std::vector<double> times;
        for (int i = 0; i < 5; ++i) {
            const auto start = Clock::now();
            const Report r = run_scenario(s);
            times.push_back(seconds(start));
            o.require(r.validated, "not validated");
        }
        std::sort(times.begin(), times.end());
        return times[times.size() / 2];
    };
    const double small = timed({1, 2, 3});
    const double large = timed({1, 2, 3, 4, 5, 6});
    const double ratio = large / small;
    o.require(ratio < 50.0, "ratio " + fixed(ratio, 1));
    o.detail = "|X| = 3: " + fixed(small * 1000, 1) + " ms, |X| = 6: " + fixed(large * 1000, 1) + " ms, ratio " +
               fixed(ratio, 1) + (o.pass ? "" : "; " + o.detail);
    return o;
}

} // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{exact_example,   attacked_example, protocol_verdicts,
                                                         honest_coverage, replay_witnesses, minimality,
                                                         scaling};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
