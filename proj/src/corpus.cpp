// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include "lysa/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lysa {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void names_of(const Term& t, std::set<Name>& out) {
    std::visit(overloaded{
                   [&](const Name& n) { out.insert(n); },
                   [&](const Variable&) {},
                   [&](const Encryption& e) {
                       for (const auto& p : e.payload) {
                           names_of(p, out);
                       }
                       names_of(*e.key, out);
                   },
               },
               t.node);
}

void names_of(const ProcessPtr& p, std::set<Name>& out) {
    std::visit(overloaded{
                   [&](const Nil&) {},
                   [&](const Parallel& n) {
                       names_of(n.left, out);
                       names_of(n.right, out);
                   },
                   [&](const Replication& n) { names_of(n.body, out); },
                   [&](const Restriction& n) {
                       out.insert(n.name);
                       names_of(n.body, out);
                   },
                   [&](const Output& n) {
                       for (const auto& t : n.terms) {
                           names_of(t, out);
                       }
                       names_of(n.cont, out);
                   },
                   [&](const Input& n) {
                       for (const auto& t : n.match) {
                           names_of(t, out);
                       }
                       names_of(n.cont, out);
                   },
                   [&](const Decryption& n) {
                       names_of(n.subject, out);
                       names_of(n.key, out);
                       for (const auto& t : n.match) {
                           names_of(t, out);
                       }
                       names_of(n.cont, out);
                   },
               },
               p->node);
}

struct Pattern {
    std::string base;
    std::optional<std::vector<std::optional<int>>> indices;

    [[nodiscard]] bool matches(const Name& n) const {
        if (n.id.base != base) {
            return false;
        }
        if (!indices) {
            return true;
        }
        if (indices->size() != n.id.indices.size()) {
            return false;
        }
        for (std::size_t i = 0; i < indices->size(); ++i) {
            if ((*indices)[i] && *(*indices)[i] != n.id.indices[i]) {
                return false;
            }
        }
        return true;
    }
};

Pattern parse_pattern(const std::string& text) {
    Pattern p;
    const auto brace = text.find("_{");
    if (brace == std::string::npos) {
        p.base = text;
        return p;
    }
    if (text.back() != '}') {
        throw Error("malformed name pattern '" + text + "'");
    }
    p.base = text.substr(0, brace);
    p.indices.emplace();
    std::stringstream items(text.substr(brace + 2, text.size() - brace - 3));
    std::string item;
    while (std::getline(items, item, ',')) {
        item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
        if (item == "*") {
            p.indices->push_back(std::nullopt);
            continue;
        }
        try {
            std::size_t used = 0;
            p.indices->push_back(std::stoi(item, &used));
            if (used != item.size()) {
                throw Error("");
            }
        } catch (const std::exception&) {
            throw Error("malformed index '" + item + "' in name pattern '" + text + "'");
        }
    }
    return p;
}

bool has_zero_index(const Name& n) {
    return std::find(n.id.indices.begin(), n.id.indices.end(), 0) != n.id.indices.end();
}

template <class T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<T>();
}

Scenario scenario_from_json(const nlohmann::json& j, const std::filesystem::path& dir) {
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.description = j.value("description", "");
    s.model = dir / j.at("model").get<std::string>();
    if (j.contains("index_sets")) {
        for (const auto& [k, v] : j.at("index_sets").items()) {
            s.index_sets[k] = v.get<std::set<int>>();
        }
    }
    s.legitimate_attacker = j.value("legitimate_attacker", true);
    s.rounds = j.value("rounds", 1);
    s.attacker = j.value("attacker", true);
    s.leaks = j.value("leaks", std::vector<std::string>{});
    s.secrets = j.value("secrets", std::vector<std::string>{});
    if (j.contains("expect")) {
        const auto& e = j.at("expect");
        s.expect_psi_empty = optional_field<bool>(e, "psi_empty");
        s.expect_secrets_safe = optional_field<bool>(e, "secrets_safe");
    }
    if (s.rounds < 1) {
        throw Error("scenario " + s.name + ": rounds must be positive");
    }
    return s;
}

} // namespace

std::vector<Scenario> load_corpus(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error("cannot open corpus file " + file.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(file.string() + ": " + e.what());
    }
    std::vector<Scenario> out;
    std::set<std::string> seen;
    for (const auto& j : doc.at("scenarios")) {
        out.push_back(scenario_from_json(j, file.parent_path()));
        if (!seen.insert(out.back().name).second) {
            throw Error("duplicate scenario name " + out.back().name);
        }
    }
    return out;
}

std::vector<Name> match_names(const std::string& pattern, const ProcessPtr& p) {
    const Pattern pat = parse_pattern(pattern);
    std::set<Name> all;
    names_of(p, all);
    std::vector<Name> out;
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), [&](const Name& n) { return pat.matches(n); });
    return out;
}

bool Report::secrets_safe() const {
    return std::all_of(secrets.begin(), secrets.end(), [](const SecretVerdict& v) { return v.confidential; });
}

Report run_scenario(const Scenario& s, const SolverOptions& solver) {
    Report rep;
    rep.scenario = s.name;
    rep.model = s.model.filename().string();

    auto start = Clock::now();
    ParseOptions po;
    po.rounds = s.rounds;
    po.legitimate_attacker = s.legitimate_attacker;
    po.overrides = s.index_sets;
    rep.source = parse_file(s.model, po);
    rep.parse_ms = ms_since(start);
    const ProcessPtr& p = rep.source.process;

    AnalyzeOptions options;
    options.solver = solver;
    options.solver.max_universe = s.max_universe;
    if (s.attacker) {
        options.attacker = AttackerConfig::for_process(p);
        for (const auto& pattern : s.leaks) {
            const auto names = match_names(pattern, p);
            if (names.empty()) {
                throw Error("scenario " + s.name + ": leak pattern '" + pattern + "' matches no name");
            }
            for (const auto& n : names) {
                options.attacker->extra_seeds.insert(n);
                rep.leaked.push_back(n.str());
            }
        }
    } else if (!s.leaks.empty()) {
        throw Error("scenario " + s.name + ": leaks need the attacker");
    }

    start = Clock::now();
    rep.result = analyze(p, options);
    rep.analyze_ms = ms_since(start);

    start = Clock::now();
    const CheckReport check = check_report(p, rep.result);
    rep.check_ms = ms_since(start);
    rep.validated = check.ok;
    if (!check.ok) {
        throw Error("scenario " + s.name + ": the analysis result failed validation: " + check.violations.front());
    }

    const AnalysisResult& r = rep.result;
    for (const auto& pair : r.psi) {
        rep.psi.push_back(render_psi(pair));
    }
    if (r.attacker) {
        rep.attacker_knowledge = r.render(r.attacker_knowledge());
        std::sort(rep.attacker_knowledge.begin(), rep.attacker_knowledge.end());
    }
    rep.kappa_size = r.kappa.size();
    for (const auto& [var, values] : r.rho) {
        rep.rho_summary[var] = values.size();
    }
    rep.authentic = r.psi.empty();
    rep.stats = r.stats;

    std::set<Name> secret_names;
    for (const auto& pattern : s.secrets) {
        const auto names = match_names(pattern, p);
        const auto before = secret_names.size();
        for (const auto& n : names) {
            if (!has_zero_index(n)) {
                secret_names.insert(n);
            }
        }
        if (secret_names.size() == before) {
            throw Error("scenario " + s.name + ": secret pattern '" + pattern + "' matches no name");
        }
    }
    for (const auto& n : secret_names) {
        rep.secrets.push_back({n.str(), !s.attacker || confidential(r, n)});
    }

    if (s.expect_psi_empty && *s.expect_psi_empty != rep.authentic) {
        rep.mismatches.push_back(rep.authentic ? "expected authentication violations, found none"
                                               : "expected no authentication violations, found " +
                                                     std::to_string(rep.psi.size()));
    }
    if (s.expect_secrets_safe && *s.expect_secrets_safe != rep.secrets_safe()) {
        rep.mismatches.push_back(rep.secrets_safe() ? "expected a secret to leak, all stayed confidential"
                                                    : "expected all secrets confidential, some leaked");
    }
    return rep;
}

nlohmann::json Report::to_json(bool volatile_fields) const {
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["scenario"] = scenario;
    j["model"] = model;
    j["leaked"] = leaked;
    j["psi"] = psi;
    j["attacker_knowledge"] = attacker_knowledge;
    j["kappa_size"] = kappa_size;
    j["rho_summary"] = rho_summary;
    nlohmann::json secret_verdicts = nlohmann::json::object();
    for (const auto& v : secrets) {
        secret_verdicts[v.name] = v.confidential;
    }
    j["verdicts"] = {
        {"authentic", authentic},
        {"secrets_safe", secrets_safe()},
        {"confidential", secret_verdicts},
    };
    j["validated"] = validated;
    j["expectations_met"] = expectations_met();
    j["mismatches"] = mismatches;
    if (volatile_fields) {
        j["stats"] = {{"universe", stats.universe},
                      {"constraints", stats.constraints},
                      {"firings", stats.firings},
                      {"match_rounds", stats.match_rounds}};
        j["timings_ms"] = {{"parse", parse_ms}, {"analyze", analyze_ms}, {"check", check_ms}};
    }
    return j;
}

std::string Report::to_text() const {
    std::ostringstream out;
    out << "scenario " << scenario << " (" << model << ")\n";
    if (!leaked.empty()) {
        out << "  leaked to the attacker: " << leaked.size() << " names\n";
    }
    const AnalysisResult& r = result;
    out << "  kappa: " << kappa_size << " tuple sets\n";
    for (const auto& t : r.kappa) {
        if (!t.wild) {
            out << "    " << r.render_tuple(t) << "\n";
        }
    }
    out << "  rho:\n";
    for (const auto& [var, values] : r.rho) {
        if (var == attacker_variable) {
            continue;
        }
        const auto shown = r.render(values);
        out << "    " << var << " ->";
        if (shown.size() > 4) {
            out << " " << shown.size() << " values\n";
            continue;
        }
        for (std::size_t i = 0; i < shown.size(); ++i) {
            out << (i == 0 ? " " : " | ") << shown[i];
        }
        out << "\n";
    }
    if (r.attacker) {
        out << "  rho(z•): " << attacker_knowledge.size() << " values\n";
        for (const auto& v : attacker_knowledge) {
            out << "    " << v << "\n";
        }
    }
    out << "  psi: " << (psi.empty() ? "empty" : std::to_string(psi.size()) + " pairs") << "\n";
    for (const auto& p : psi) {
        out << "    " << p << "\n";
    }
    out << "  authentication: " << (authentic ? "holds" : "violated") << "\n";
    for (const auto& v : secrets) {
        out << "  " << v.name << ": " << (v.confidential ? "confidential" : "known to the attacker") << "\n";
    }
    out << "  expectations: " << (expectations_met() ? "met" : "NOT met") << "\n";
    for (const auto& m : mismatches) {
        out << "    " << m << "\n";
    }
    out << std::fixed << std::setprecision(2) << "  timings: parse " << parse_ms << " ms, analysis " << analyze_ms << " ms, validation " << check_ms
        << " ms\n";
    return out.str();
}

int exit_status(const std::vector<Report>& reports) {
    const bool ok = std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.expectations_met(); });
    return ok ? 0 : 2;
}

} // namespace lysa
