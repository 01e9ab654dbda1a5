// Copyright (c) LySa analyzer contributors.
// SPDX-License-Identifier: MIT

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lysa/corpus.hpp"
#include "lysa/oracle.hpp"

namespace {

using namespace lysa;

struct ModelArgs {
    std::string file;
    int rounds = 1;
    bool legitimate = false;
    std::vector<std::string> index_sets;
};

void add_model_args(CLI::App* cmd, ModelArgs& m) {
    cmd->add_option("file", m.file, "model in the .lysa format")->required()->check(CLI::ExistingFile);
    cmd->add_option("--rounds", m.rounds, "binds index sets declared as `rounds` to {1..N}")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--legitimate-attacker", m.legitimate, "keep index 0, the principals played by the attacker");
    cmd->add_option("--index-set", m.index_sets, "override a declared index set, e.g. X=1,2");
}

std::map<std::string, std::set<int>> parse_index_sets(const std::vector<std::string>& items) {
    std::map<std::string, std::set<int>> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error("--index-set expects NAME=i,j,..., got '" + item + "'");
        }
        std::set<int>& values = out[item.substr(0, eq)];
        std::stringstream list(item.substr(eq + 1));
        std::string v;
        while (std::getline(list, v, ',')) {
            try {
                values.insert(std::stoi(v));
            } catch (const std::exception&) {
                throw Error("bad index '" + v + "' in --index-set " + item);
            }
        }
    }
    return out;
}

SourceModel load(const ModelArgs& m, int rounds) {
    ParseOptions po;
    po.rounds = rounds;
    po.legitimate_attacker = m.legitimate;
    po.overrides = parse_index_sets(m.index_sets);
    return parse_file(m.file, po);
}

struct AnalyzeArgs {
    ModelArgs model;
    bool attacker = false;
    std::vector<std::string> secrets;
    std::vector<std::string> leaks;
    std::string format = "text";
    std::size_t max_universe = SolverOptions{}.max_universe;
    std::optional<int> depth;
};

int run_analyze(const AnalyzeArgs& a) {
    Scenario s;
    s.model = a.model.file;
    s.name = s.model.stem().string();
    s.rounds = a.model.rounds;
    s.legitimate_attacker = a.model.legitimate;
    s.index_sets = parse_index_sets(a.model.index_sets);
    s.attacker = a.attacker;
    s.leaks = a.leaks;
    s.secrets = a.secrets;
    s.max_universe = a.max_universe;
    if (a.attacker) {
        s.expect_psi_empty = true;
        s.expect_secrets_safe = true;
    }
    const Report rep = run_scenario(s);
    if (a.format == "json") {
        std::cout << rep.to_json().dump(2) << "\n";
    } else {
        std::cout << rep.to_text();
    }
    if (a.depth) {
        std::size_t uncovered = 0;
        const auto stats = explore(rep.source.process, *a.depth, {}, [&](const Event& e) {
            if (!covered(e, rep.result)) {
                std::cerr << "uncovered: " << e.str() << "\n";
                ++uncovered;
            }
            return true;
        });
        std::cerr << "oracle: " << stats.events << " distinct events in " << stats.states << " states at depth "
                  << *a.depth << ", " << uncovered << " not covered\n";
        if (uncovered > 0) {
            return 1;
        }
    }
    return exit_status({rep});
}

struct CorpusArgs {
    std::string file = std::string(LYSA_CORPUS_DIR) + "/scenarios.json";
    std::string filter;
    std::string format = "text";
    bool verbose = false;
};

int run_corpus(const CorpusArgs& a) {
    std::vector<Report> reports;
    for (const auto& s : load_corpus(a.file)) {
        if (!a.filter.empty() && s.name.find(a.filter) == std::string::npos) {
            continue;
        }
        reports.push_back(run_scenario(s));
        const Report& r = reports.back();
        if (a.format == "json") {
            continue;
        }
        if (a.verbose) {
            std::cout << r.to_text();
            continue;
        }
        std::cout << (r.expectations_met() ? "ok   " : "FAIL ") << r.scenario << ": psi "
                  << (r.psi.empty() ? "empty" : std::to_string(r.psi.size()) + " pairs") << ", secrets "
                  << (r.secrets_safe() ? "confidential" : "leaked") << " (" << std::fixed << std::setprecision(2) << r.analyze_ms << " ms)\n";
        for (const auto& m : r.mismatches) {
            std::cout << "     " << m << "\n";
        }
    }
    if (reports.empty()) {
        throw Error("no scenario matches '" + a.filter + "'");
    }
    if (a.format == "json") {
        nlohmann::json doc{{"schema_version", report_schema_version}, {"reports", nlohmann::json::array()}};
        for (const auto& r : reports) {
            doc["reports"].push_back(r.to_json());
        }
        std::cout << doc.dump(2) << "\n";
    }
    return exit_status(reports);
}

struct OracleArgs {
    ModelArgs model;
    int depth = 6;
    bool replay = false;
    std::optional<std::uint64_t> seed;
};

int run_oracle(const OracleArgs& a) {
    const SourceModel m = load(a.model, a.model.rounds);
    if (a.seed) {
        for (const auto& e : run(m.process, a.depth, Scheduler::seeded(*a.seed))) {
            std::cout << e.str() << "\n";
        }
        return 0;
    }
    if (!a.replay) {
        const AnalysisResult r = analyze(m.process);
        std::size_t uncovered = 0;
        const auto stats = explore(m.process, a.depth, {}, [&](const Event& e) {
            const bool ok = covered(e, r);
            uncovered += ok ? 0 : 1;
            std::cout << (ok ? "  " : "! ") << e.str() << "\n";
            return true;
        });
        std::cout << stats.events << " distinct events, " << stats.states << " states, " << uncovered
                  << " not covered by the analysis\n";
        return uncovered == 0 ? 0 : 1;
    }
    if (a.model.rounds < 2) {
        throw Error("--replay needs --rounds 2 or more");
    }
    const SourceModel old = load(a.model, a.model.rounds - 1);
    const auto captured = capture(old.process, 256);
    std::cout << "captured " << captured.size() << " messages from an honest run of the earlier rounds\n";
    std::optional<Event> witness;
    const auto stats = explore(m.process, a.depth, captured, [&](const Event& e) {
        if (stale_binding(e, a.model.rounds)) {
            witness = e;
            return false;
        }
        return true;
    });
    if (!witness) {
        std::cout << "no stale key reaches round " << a.model.rounds << " within depth " << a.depth << " ("
                  << stats.states << " states)\n";
        return 0;
    }
    std::cout << "witness: " << witness->str() << "\n";
    for (const auto& e : replay_run(m.process, captured, a.depth)) {
        std::cout << (stale_binding(e, a.model.rounds) ? "! " : "  ") << e.str() << "\n";
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Control flow analysis of LySa protocol models"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "analyze one model");
    add_model_args(analyze_cmd, analyze_args.model);
    analyze_cmd->add_flag("--attacker", analyze_args.attacker, "compose with the Dolev-Yao attacker");
    analyze_cmd->add_option("--secret", analyze_args.secrets, "name pattern whose confidentiality is reported");
    analyze_cmd->add_option("--leak", analyze_args.leaks, "name pattern the attacker knows initially");
    analyze_cmd->add_option("--format", analyze_args.format)->check(CLI::IsMember({"text", "json"}));
    analyze_cmd->add_option("--max-universe", analyze_args.max_universe, "abort when the value universe grows beyond N");
    analyze_cmd->add_option("--depth", analyze_args.depth, "also check honest executions up to depth N");

    CorpusArgs corpus_args;
    auto* corpus_cmd = app.add_subcommand("corpus", "scenario corpus");
    corpus_cmd->require_subcommand(1);
    auto* corpus_run = corpus_cmd->add_subcommand("run", "run the scenarios and compare verdicts");
    corpus_run->add_option("--filter", corpus_args.filter, "only scenarios whose name contains this");
    corpus_run->add_option("--corpus", corpus_args.file, "scenario file")->check(CLI::ExistingFile);
    corpus_run->add_option("--format", corpus_args.format)->check(CLI::IsMember({"text", "json"}));
    corpus_run->add_flag("-v,--verbose", corpus_args.verbose, "print full reports");

    OracleArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle", "execute a model concretely");
    add_model_args(oracle_cmd, oracle_args.model);
    oracle_cmd->add_option("--depth", oracle_args.depth, "schedule steps")->required();
    oracle_cmd->add_flag("--replay", oracle_args.replay, "replay messages of the earlier rounds");
    oracle_cmd->add_option("--seed", oracle_args.seed, "one random schedule instead of all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (analyze_cmd->parsed()) {
            return run_analyze(analyze_args);
        }
        if (corpus_run->parsed()) {
            return run_corpus(corpus_args);
        }
        return run_oracle(oracle_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
    }
    return 1;
}
