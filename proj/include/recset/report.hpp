#pragma once

// Run configurations, command execution and the report envelope.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "recset/construction.hpp"
#include "recset/counting.hpp"
#include "recset/explorer.hpp"
#include "recset/lemmas.hpp"
#include "recset/niveau.hpp"
#include "recset/recurrence.hpp"
#include "recset/verdict.hpp"

namespace recset {

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"lemmas", "count", "density", "construct", "chromatic", "lovasz", "poincare",
                                                "explore"};
    return names;
}

/// Everything needed to re-run a command. Output location and thread count do
/// not change results, so a config replays to the same report wherever it runs.
struct RunConfig {
    std::string command;
    json params = json::object();
    std::optional<std::uint64_t> seed;
    Limits limits;
    std::uint64_t node_budget = Budget{}.nodes;
    unsigned threads = 1;
    std::string output_dir;
    bool csv = false;
    bool timings = false;

    json to_json() const {
        return {{"command", command},
                {"params", params},
                {"seed", seed ? json(*seed) : json(nullptr)},
                {"caps",
                 {{"enumeration_cap", limits.enumeration_cap},
                  {"exact_bits_cap", limits.exact_bits_cap},
                  {"node_budget", node_budget}}},
                {"threads", threads},
                {"output_dir", output_dir},
                {"formats", {{"csv", csv}, {"timings", timings}}}};
    }

    /// Accepts a RunConfig object or a report that embeds one under "run_config".
    static RunConfig from_json(const json& in) {
        const json& j = in.contains("run_config") ? in.at("run_config") : in;
        RunConfig c;
        try {
            c.command = j.at("command").get<std::string>();
            if (j.contains("params")) c.params = j.at("params");
            if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("caps")) {
                const auto& caps = j.at("caps");
                c.limits.enumeration_cap = caps.value("enumeration_cap", c.limits.enumeration_cap);
                c.limits.exact_bits_cap = caps.value("exact_bits_cap", c.limits.exact_bits_cap);
                c.node_budget = caps.value("node_budget", c.node_budget);
            }
            c.threads = j.value("threads", 1u);
            c.output_dir = j.value("output_dir", std::string());
            if (j.contains("formats")) {
                c.csv = j.at("formats").value("csv", false);
                c.timings = j.at("formats").value("timings", false);
            }
        } catch (const json::exception& e) {
            throw invalid_argument(std::string("malformed run configuration: ") + e.what());
        }
        if (std::find(command_names().begin(), command_names().end(), c.command) == command_names().end())
            throw invalid_argument("unknown command '" + c.command + "'");
        if (!c.params.is_object()) throw invalid_argument("run configuration params must be an object");
        return c;
    }
};

struct CommandResult {
    json results;
    std::vector<Verdict> verdicts;
    std::optional<std::string> csv;
    std::string summary;
    /// Plain computations (count, density) finish without verdicts.
    Status status() const { return verdicts.empty() ? Status::proven : combine(verdicts); }
};

/// 0 all proven or completed, 1 any refuted, 2 an open inconclusive result.
inline int exit_code(const CommandResult& r) {
    switch (r.status()) {
        case Status::proven: return 0;
        case Status::refuted: return 1;
        case Status::inconclusive: return 2;
    }
    return 2;
}

namespace detail {

template <class T>
T param(json& params, const std::string& key, T fallback) {
    if (!params.contains(key) || params.at(key).is_null()) params[key] = fallback;
    try {
        return params.at(key).get<T>();
    } catch (const json::exception&) {
        throw invalid_argument("parameter '" + key + "' has the wrong type");
    }
}

inline std::string require_string(const json& params, const std::string& key) {
    if (!params.contains(key) || !params.at(key).is_string()) throw invalid_argument("parameter '" + key + "' is required");
    return params.at(key).get<std::string>();
}

inline std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

inline bool is_ball_spec(const std::string& s) { return s.find("chain=") == std::string::npos; }

inline std::string verdict_csv(const std::vector<Verdict>& vs) {
    std::ostringstream out;
    out << "check,status,mode\n";
    for (const auto& v : vs) out << v.check << ',' << to_string(v.status) << ',' << to_string(v.mode) << '\n';
    return out.str();
}

inline CommandResult single(Verdict v) {
    CommandResult r;
    r.results = v.to_json();
    r.summary = v.check + ": " + std::string(to_string(v.status));
    r.verdicts.push_back(std::move(v));
    return r;
}

} // namespace detail

/// Fills defaults into the config (and a generated seed where needed) so the stored config is complete.
inline void normalize(RunConfig& c) {
    json& p = c.params;
    if (c.command == "lemmas") {
        detail::param<unsigned>(p, "n_cap", 3);
    } else if (c.command == "count" || c.command == "density") {
        detail::require_string(p, "spec");
        detail::param<bool>(p, "strict", false);
    } else if (c.command == "construct") {
        p["epsilon"] = to_fraction(parse_rational(detail::param<std::string>(p, "epsilon", "1/10")));
        detail::param<std::vector<std::uint64_t>>(p, "k", {1, 2});
        if (!p.contains("n")) p["n"] = nullptr;
        detail::param<unsigned>(p, "n_cap", 40);
        detail::param<std::string>(p, "mode", "auto");
        detail::param<std::uint64_t>(p, "trials", 100000);
        detail::param<bool>(p, "analog", true);
        if (!c.seed) c.seed = detail::fresh_seed();
    } else if (c.command == "chromatic") {
        detail::require_string(p, "connection");
        detail::param<unsigned>(p, "colors", 2);
    } else if (c.command == "lovasz") {
        detail::param<unsigned>(p, "r", 1);
        detail::param<unsigned>(p, "k", 1);
        detail::param<std::uint64_t>(p, "vertex_cap", 5000);
    } else if (c.command == "poincare") {
        detail::param<std::uint32_t>(p, "p", 2);
        detail::param<unsigned>(p, "n", 3);
        detail::param<unsigned>(p, "k", 2);
        detail::param<bool>(p, "relax", false);
    } else if (c.command == "explore") {
        detail::param<std::uint32_t>(p, "p", 3);
        detail::param<unsigned>(p, "n", 1);
        detail::param<std::uint64_t>(p, "k", 1);
        detail::param<unsigned>(p, "colors", 2);
        if (!p.contains("sample")) p["sample"] = nullptr;
        detail::param<bool>(p, "allow_even", false);
        if (!c.seed) c.seed = detail::fresh_seed();
    }
}

inline CommandResult execute(RunConfig& c) {
    normalize(c);
    json& p = c.params;
    const Budget budget{c.node_budget};
    const Limits& limits = c.limits;

    if (c.command == "lemmas") {
        const LemmaReport rep = lemma_suite(p.at("n_cap").get<unsigned>(), limits, budget);
        CommandResult r;
        r.results = rep.to_json();
        r.verdicts = rep.verdicts;
        r.summary = "lemmas: " + std::string(to_string(rep.status())) + " (" + std::to_string(rep.verdicts.size()) + " checks)";
        std::ostringstream csv;
        csv << "check,status,instances\n";
        for (const auto& v : rep.verdicts)
            csv << v.check << ',' << to_string(v.status) << ','
                << (v.budget_spent.count("instances") ? v.budget_spent.at("instances") : 0) << '\n';
        r.csv = csv.str();
        return r;
    }

    if (c.command == "count" || c.command == "density") {
        const std::string spec = p.at("spec").get<std::string>();
        CommandResult r;
        if (detail::is_ball_spec(spec)) {
            const auto ball = HammingBallSpec::parse(spec);
            const mpz_class count = count_hamming(ball);
            r.results = {{"spec", ball.format()}, {"kind", "ball"}};
            if (c.command == "count") {
                r.results["count"] = count.get_str();
                r.summary = count.get_str();
            } else {
                const Density d = density(ball, limits);
                r.results["density"] = density_json(d);
                r.summary = to_fraction(d.lower);
            }
        } else {
            const auto niv = NiveauSpec::parse(spec, p.at("strict").get<bool>());
            r.results = {{"spec", niv.format()}, {"kind", "niveau"}};
            if (c.command == "count") {
                const mpz_class count = count_niveau(niv, limits);
                r.results["count"] = count.get_str();
                r.summary = count.get_str();
            } else {
                const Density d = density(niv, limits);
                r.results["density"] = density_json(d);
                r.summary = d.exact ? to_fraction(d.lower) : "[" + to_decimal(d.lower) + ", " + to_decimal(d.upper) + "]";
            }
        }
        std::ostringstream csv;
        csv << "spec,value\n\"" << r.results["spec"].get<std::string>() << "\"," << r.summary << '\n';
        r.csv = csv.str();
        return r;
    }

    if (c.command == "construct") {
        const mpq_class eps = parse_rational(p.at("epsilon").get<std::string>());
        const auto k = p.at("k").get<std::vector<std::uint64_t>>();
        std::optional<ScaleChoice> choice;
        ConstructionParams params;
        if (p.at("n").is_null()) {
            choice = choose_scales(eps, k, p.at("n_cap").get<unsigned>(), limits);
            params = choice->params;
        } else {
            params = ConstructionParams::make(eps, k, p.at("n").get<std::vector<unsigned>>());
        }
        std::string mode = p.at("mode").get<std::string>();
        if (mode == "auto") {
            bool small = true;
            try {
                CodeSpace probe(2, params.top_scale(), limits);
            } catch (const cap_exceeded&) {
                small = false;
            }
            mode = small ? "exhaustive" : "sampled";
        }
        WitnessReport rep;
        if (mode == "exhaustive")
            rep = verify_exhaustive(params, limits, c.threads);
        else if (mode == "sampled")
            rep = verify_sampled(params, p.at("trials").get<std::uint64_t>(), *c.seed, limits);
        else
            throw invalid_argument("mode must be auto, exhaustive or sampled");
        if (choice) rep.scale_scan = scan_json(choice->scan);
        CommandResult r;
        r.verdicts = rep.verdicts;
        if (p.at("analog").get<bool>()) {
            const WitnessReport analog = exhaustive_analog(params.k.front(), limits, c.threads);
            rep.exhaustive_analog = analog.to_json();
            r.verdicts.insert(r.verdicts.end(), analog.verdicts.begin(), analog.verdicts.end());
        }
        r.results = rep.to_json();
        r.results["status"] = to_string(r.status());
        std::string scales;
        for (auto n : params.n) scales += (scales.empty() ? "" : ",") + std::to_string(n);
        r.summary = "construct: " + std::string(to_string(r.status())) + " (scales " + scales + ", " + to_string(rep.mode).data() + ")";
        std::ostringstream csv;
        csv << "level,n,k,m,exact,lower,upper\n";
        for (const auto& lv : rep.levels) {
            const auto& d = lv.at("density");
            const bool exact = d.at("exact").get<bool>();
            csv << lv.at("level") << ',' << lv.at("n") << ',' << lv.at("k") << ',' << lv.at("m") << ',' << (exact ? "true" : "false")
                << ',' << (exact ? d.at("decimal") : d.at("lower_decimal")).get<std::string>() << ','
                << (exact ? d.at("decimal") : d.at("upper_decimal")).get<std::string>() << '\n';
        }
        r.csv = csv.str();
        return r;
    }

    if (c.command == "chromatic") {
        const std::string spec = p.at("connection").get<std::string>();
        const unsigned colors = p.at("colors").get<unsigned>();
        const FiniteSet set = detail::is_ball_spec(spec) ? materialize(HammingBallSpec::parse(spec), limits)
                                                         : materialize(NiveauSpec::parse(spec), limits);
        Verdict v = chromatic_exceeds(CayleyGraph(set), colors, budget);
        v.parameters["connection"] = spec;
        auto r = detail::single(std::move(v));
        r.csv = detail::verdict_csv(r.verdicts);
        return r;
    }

    if (c.command == "lovasz") {
        auto r = detail::single(
            verify_lovasz(p.at("r").get<unsigned>(), p.at("k").get<unsigned>(), budget, p.at("vertex_cap").get<std::uint64_t>()));
        r.csv = detail::verdict_csv(r.verdicts);
        return r;
    }

    if (c.command == "poincare") {
        auto r = detail::single(verify_poincare(p.at("p").get<std::uint32_t>(), p.at("n").get<unsigned>(), p.at("k").get<unsigned>(),
                                                budget, p.at("relax").get<bool>(), limits));
        r.csv = detail::verdict_csv(r.verdicts);
        return r;
    }

    if (c.command == "explore") {
        ProbeOptions opt;
        opt.p = p.at("p").get<std::uint32_t>();
        opt.n = p.at("n").get<unsigned>();
        opt.k = p.at("k").get<std::uint64_t>();
        opt.colors = p.at("colors").get<unsigned>();
        if (!p.at("sample").is_null()) opt.sample = p.at("sample").get<std::uint64_t>();
        opt.seed = *c.seed;
        opt.budget = budget;
        opt.allow_even = p.at("allow_even").get<bool>();
        opt.timings = c.timings;
        const ProbeReport rep = probe_odd_prime(opt, limits);
        CommandResult r;
        r.results = rep.to_json();
        r.verdicts = rep.verdicts();
        r.csv = rep.csv();
        r.summary = "explore: " + std::to_string(rep.rows.size()) + " translates, " + std::to_string(rep.count(Status::proven)) +
                    " PROVEN, " + std::to_string(rep.count(Status::refuted)) + " REFUTED, " +
                    std::to_string(rep.count(Status::inconclusive)) + " INCONCLUSIVE";
        return r;
    }

    throw invalid_argument("unknown command '" + c.command + "'");
}

inline std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline json make_report(const RunConfig& c, const CommandResult& r, const std::string& timestamp) {
    return {{"schema_version", report_schema_version},
            {"library_version", library_version},
            {"command", c.command},
            {"run_config", c.to_json()},
            {"status", to_string(r.status())},
            {"exit_code", exit_code(r)},
            {"results", r.results},
            {"timestamp", timestamp}};
}

/// The report with its timestamp removed, for replay comparisons.
inline json without_timestamp(json report) {
    report.erase("timestamp");
    return report;
}

} // namespace recset
