#pragma once

// Command-line front end: parses arguments into a RunConfig, executes it and
// writes the JSON (and optional CSV) report.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "recset/report.hpp"

namespace recset {

inline constexpr int exit_usage = 3;

inline std::string default_output_dir() {
    if (const char* env = std::getenv("RECSET_OUTPUT_DIR"); env && *env) return env;
    return "recset-reports";
}

namespace detail {

/// Collects subcommand options that were actually given, as JSON params.
class ParamSink {
public:
    template <class T>
    void add(CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        auto holder = std::make_shared<T>();
        auto* opt = sub->add_option(flag, *holder, help);
        setters_[sub->get_name()].push_back([opt, holder, key](json& params) {
            if (opt->count()) params[key] = *holder;
        });
    }

    void flag(CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
        auto holder = std::make_shared<bool>(false);
        auto* opt = sub->add_flag(flag, *holder, help);
        setters_[sub->get_name()].push_back([opt, holder, key](json& params) {
            if (opt->count()) params[key] = *holder;
        });
    }

    void apply(const std::string& command, json& params) const {
        if (auto it = setters_.find(command); it != setters_.end())
            for (const auto& f : it->second) f(params);
    }

private:
    std::map<std::string, std::vector<std::function<void(json&)>>> setters_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw invalid_argument("cannot write " + path.string());
    out << text;
}

} // namespace detail

/// Parses argv, runs the command and writes reports.
/// Exit codes: 0 all proven or completed, 1 any refuted, 2 open inconclusive, 3 usage or configuration error.
inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Exhaustive, certified and sampled checks for niveau-set constructions over G_p^(n)", "recset"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::string config_path, out_dir;
    unsigned threads = 1;
    std::uint64_t seed = 0, node_budget = 0, enumeration_cap = 0, exact_bits_cap = 0;
    bool csv = false, timings = false;
    app.add_option("--config", config_path, "RunConfig JSON, or a report whose run_config is replayed");
    auto* out_opt = app.add_option("--out", out_dir, "output directory (default: $RECSET_OUTPUT_DIR or ./recset-reports)");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads for pair enumeration")->check(CLI::Range(1u, 256u));
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized commands");
    auto* budget_opt = app.add_option("--node-budget", node_budget, "search node budget");
    auto* enum_opt = app.add_option("--enumeration-cap", enumeration_cap, "largest group enumerated explicitly");
    auto* bits_opt = app.add_option("--exact-bits-cap", exact_bits_cap, "largest log2 group order counted exactly");
    auto* csv_opt = app.add_flag("--csv", csv, "also write a CSV table");
    auto* timings_opt = app.add_flag("--timings", timings, "record wall-clock times (reports stop being reproducible)");

    detail::ParamSink sink;
    std::map<std::string, CLI::App*> subs;
    auto sub = [&](const std::string& name, const std::string& help) { return subs[name] = app.add_subcommand(name, help); };

    auto* lemmas = sub("lemmas", "run every exhaustive identity check up to a scale cap");
    sink.add<unsigned>(lemmas, "--n-cap", "n_cap", "largest scale enumerated");

    for (const std::string name : {"count", "density"}) {
        auto* s = sub(name, name == "count" ? "exact cardinality of a niveau set or ball" : "density of a niveau set or ball");
        sink.add<std::string>(s, "--spec", "spec", "\"p=2;i=1;chain=(2,1)\" or \"p=2;n=2;k=1;center=U\"");
        sink.flag(s, "--strict", "strict", "reject margin 0 in niveau chains");
    }

    auto* construct = sub("construct", "build and verify the truncated dense set and ball union");
    sink.add<std::string>(construct, "--epsilon", "epsilon", "density slack, e.g. 0.1 or 1/10");
    sink.add<std::vector<std::uint64_t>>(construct, "--k", "k", "increasing radii, e.g. 1,2");
    sink.add<std::vector<unsigned>>(construct, "--n", "n", "explicit scales instead of choosing them");
    sink.add<unsigned>(construct, "--n-cap", "n_cap", "largest scale tried when choosing scales");
    sink.add<std::string>(construct, "--mode", "mode", "auto, exhaustive or sampled");
    sink.add<std::uint64_t>(construct, "--trials", "trials", "sampled pairs per check");
    sink.add<bool>(construct, "--analog", "analog", "also run the scale-4 exhaustive analog (true/false)");
    construct->get_option("--k")->delimiter(',');
    construct->get_option("--n")->delimiter(',');

    auto* chromatic = sub("chromatic", "decide whether a Cayley graph needs more than a number of colors");
    sink.add<std::string>(chromatic, "--connection", "connection", "ball or niveau spec of the connection set");
    sink.add<unsigned>(chromatic, "--colors", "colors", "number of colors");

    auto* lovasz = sub("lovasz", "check that K(2r+k, r) is not k-colorable");
    sink.add<unsigned>(lovasz, "--r", "r", "subset size");
    sink.add<unsigned>(lovasz, "--k", "k", "number of colors");
    sink.add<std::uint64_t>(lovasz, "--vertex-cap", "vertex_cap", "largest graph built");

    auto* poincare = sub("poincare", "check that U(n, 2k+2) is not k-colorable as a connection set");
    sink.add<std::uint32_t>(poincare, "--p", "p", "prime");
    sink.add<unsigned>(poincare, "--n", "n", "scale");
    sink.add<unsigned>(poincare, "--k", "k", "number of colors");
    sink.flag(poincare, "--relax", "relax", "allow k >= n");

    auto* explore = sub("explore", "color translated balls over odd p");
    sink.add<std::uint32_t>(explore, "--p", "p", "prime");
    sink.add<unsigned>(explore, "--n", "n", "scale");
    sink.add<std::uint64_t>(explore, "--k", "k", "ball radius");
    sink.add<unsigned>(explore, "--colors", "colors", "number of colors");
    sink.add<std::uint64_t>(explore, "--sample", "sample", "random translates instead of all");
    sink.flag(explore, "--allow-even", "allow_even", "permit p = 2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    std::string chosen;
    for (const auto& [name, s] : subs)
        if (s->parsed()) chosen = name;

    try {
        RunConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw invalid_argument("cannot read config " + config_path);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw invalid_argument("config " + config_path + " is not valid JSON: " + e.what());
            }
            config = RunConfig::from_json(j);
            if (!chosen.empty() && chosen != config.command)
                throw invalid_argument("config runs '" + config.command + "' but the command line asks for '" + chosen + "'");
        } else {
            if (chosen.empty()) {
                err << app.help();
                return exit_usage;
            }
            config.command = chosen;
        }
        sink.apply(config.command, config.params);
        if (seed_opt->count()) config.seed = seed;
        if (budget_opt->count()) config.node_budget = node_budget;
        if (enum_opt->count()) config.limits.enumeration_cap = enumeration_cap;
        if (bits_opt->count()) config.limits.exact_bits_cap = exact_bits_cap;
        if (threads_opt->count()) config.threads = threads;
        if (csv_opt->count()) config.csv = csv;
        if (timings_opt->count()) config.timings = timings;
        if (out_opt->count()) config.output_dir = out_dir;
        if (config.output_dir.empty()) config.output_dir = default_output_dir();

        const CommandResult result = execute(config);
        const json report = make_report(config, result, utc_timestamp());

        std::filesystem::path dir(config.output_dir);
        std::filesystem::create_directories(dir);
        const auto json_path = dir / (config.command + ".json");
        detail::write_file(json_path, report.dump(2) + "\n");
        if (config.csv && result.csv) detail::write_file(dir / (config.command + ".csv"), *result.csv);

        out << result.summary << '\n';
        if (config.command != "count") out << "report: " << json_path.string() << '\n';
        return exit_code(result);
    } catch (const invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const cap_exceeded& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

} // namespace recset
