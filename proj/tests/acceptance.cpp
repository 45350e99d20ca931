// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "recset/cli.hpp"
#include "recset/recurrence.hpp"

using namespace recset;
namespace fs = std::filesystem;

namespace {

fs::path out_root;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "recset");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = run_command(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    if (!e.str().empty()) std::cerr << e.str();
    return code;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Reports produced along the way, replayed by the last criterion.
std::vector<fs::path> produced;

fs::path run_to(const std::string& name, std::vector<std::string> args, int& code) {
    const fs::path dir = out_root / name;
    fs::remove_all(dir);
    args.insert(args.begin(), {"--out", dir.string()});
    code = cli(args);
    return dir;
}

Outcome lemma_suite_exhaustive() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    const auto dir = run_to("lemmas", {"lemmas", "--n-cap", "4"}, code);
    const double secs = seconds_since(t0);
    o.require(code == 0, "exit code " + std::to_string(code));
    const json rep = read_json(dir / "lemmas.json");
    std::size_t refuted = 0, checks = 0;
    for (const auto& v : rep["results"]["verdicts"]) {
        ++checks;
        refuted += v["status"] == "REFUTED";
        o.require(v["status"] == "PROVEN", "check " + v["check"].get<std::string>() + " is " + v["status"].get<std::string>());
    }
    o.require(refuted == 0, std::to_string(refuted) + " refuted");
    o.require(secs <= 600, "took " + std::to_string(secs) + " s");
    produced.push_back(dir / "lemmas.json");
    o.detail = std::to_string(checks) + " checks in " + std::to_string(secs) + " s" + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome counting_oracle() {
    Outcome o;
    using Chain = std::vector<std::pair<unsigned, std::int64_t>>;
    std::vector<Chain> chains;
    for (unsigned n = 1; n <= 4; ++n)
        for (std::int64_t m = 0; m <= 3; ++m) chains.push_back({{n, m}});
    for (unsigned a = 1; a <= 4; ++a)
        for (unsigned b = a + 1; b <= 4; ++b)
            for (std::int64_t m1 = 0; m1 <= 1; ++m1)
                for (std::int64_t m2 = 0; m2 <= 2; ++m2) chains.push_back({{a, m1}, {b, m2}});
    chains.push_back({{1, 0}, {2, 0}, {4, 0}});
    chains.push_back({{1, 0}, {3, 1}, {4, 0}});
    chains.push_back({{2, 0}, {3, 0}, {4, 1}});

    std::size_t specs = 0;
    for (const auto& c : chains)
        for (std::uint32_t i : {0u, 1u}) {
            std::vector<ChainLevel> levels;
            for (auto [n, m] : c) levels.push_back({n, m});
            const NiveauSpec spec(2, i, levels);
            const unsigned n = c.back().first;
            std::uint64_t brute = 0;
            for (std::uint64_t idx = 0; idx < oracle::group_size(2, n); ++idx)
                brute += oracle::niveau(oracle::from_index(idx, 2, std::uint64_t{1} << n), i, c);
            o.require(count_niveau(spec) == brute, spec.format() + " mismatch");
            ++specs;
        }
    const std::vector<std::pair<std::string, long>> fixtures = {{"p=2;i=1;chain=(2,1)", 1},
                                                                {"p=2;i=1;chain=(3,1)", 37},
                                                                {"p=2;i=1;chain=(2,0),(4,1)", 61},
                                                                {"p=2;i=1;chain=(4,3)", 2517}};
    for (const auto& [s, v] : fixtures) {
        std::string printed;
        o.require(cli({"--out", (out_root / "count").string(), "count", "--spec", s}, &printed) == 0, s + " exit");
        o.require(printed == std::to_string(v) + "\n", s + " printed " + printed);
    }
    produced.push_back(out_root / "count" / "count.json");
    o.require(specs >= 50, "only " + std::to_string(specs) + " specs");
    o.detail = std::to_string(specs) + " specs" + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome density_convergence() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    mpq_class prev(-1);
    const std::int64_t m = 1;
    for (unsigned n = 3; n <= 12; ++n) {
        const auto d = density(NiveauSpec::base(2, 1, n, m));
        o.require(d.exact, "scale " + std::to_string(n) + " not exact");
        o.require(d.lower > prev, "not increasing at scale " + std::to_string(n));
        prev = d.lower;
        const unsigned long len = 1ul << n;
        mpz_class central;
        mpz_bin_uiui(central.get_mpz_t(), len, len / 2);
        mpz_class whole;
        mpz_ui_pow_ui(whole.get_mpz_t(), 2, len);
        const mpq_class bound(mpz_class((2 * m + 1) * central), whole);
        o.require(mpq_class(mpq_class(1, 2) - d.lower) <= bound, "gap bound fails at scale " + std::to_string(n));
    }
    o.require(prev >= mpq_class(45, 100) && prev < mpq_class(1, 2), "density at 4096 is " + to_decimal(prev));
    const double secs = seconds_since(t0);
    o.require(secs <= 60, "took " + std::to_string(secs) + " s");
    o.detail = "density at 4096 = " + to_decimal(prev) + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome witness_exhaustive() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = materialize(NiveauSpec::parse("p=2;i=1;chain=(4,3)"));
    const auto v = difference_avoids(a, predicate(HammingBallSpec::V(2, 4, 3)));
    const double secs = seconds_since(t0);
    o.require(a.cardinality() == 2517, "|A| = " + std::to_string(a.cardinality()));
    o.require(v.proven(), std::string("verdict ") + std::string(to_string(v.status)));
    o.require(secs <= 30, "took " + std::to_string(secs) + " s");
    o.detail = std::to_string(secs) + " s" + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome chromatic_engine() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    auto need = [&](const Verdict& v, const std::string& what) {
        o.require(v.proven(), what + " is " + std::string(to_string(v.status)));
    };
    for (unsigned n : {3u, 4u}) need(verify_poincare(2, n, 2), "ball lemma n=" + std::to_string(n));
    for (auto [r, k] : std::vector<std::pair<unsigned, unsigned>>{{1, 1}, {1, 2}, {2, 1}, {2, 2}})
        need(verify_lovasz(r, k), "Kneser (" + std::to_string(r) + "," + std::to_string(k) + ")");
    std::vector<GroupElement> translates = {make_zero(2, 4), make_ones(2, 4)};
    RandomStream rng(2024);
    for (int t = 0; t < 5; ++t) translates.push_back(random_element(2, 4, rng));
    for (const auto& g : translates) need(verify_translate_claim(4, 2, g), "translate " + g.encode());
    const double secs = seconds_since(t0);
    o.require(secs <= 300, "took " + std::to_string(secs) + " s");

    int code = 0;
    run_to("poincare", {"poincare", "--p", "2", "--n", "4", "--k", "2"}, code);
    o.require(code == 0, "poincare command exit " + std::to_string(code));
    produced.push_back(out_root / "poincare" / "poincare.json");
    run_to("lovasz", {"lovasz", "--r", "2", "--k", "2"}, code);
    o.require(code == 0, "lovasz command exit " + std::to_string(code));
    produced.push_back(out_root / "lovasz" / "lovasz.json");
    run_to("chromatic", {"chromatic", "--connection", "p=2;n=3;k=6;center=U", "--colors", "2"}, code);
    o.require(code == 0, "chromatic command exit " + std::to_string(code));
    produced.push_back(out_root / "chromatic" / "chromatic.json");
    o.detail = std::to_string(translates.size()) + " translates, " + std::to_string(secs) + " s" +
               (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome construction_pipeline() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    const auto dir = run_to("construct", {"--seed", "42", "construct", "--epsilon", "0.1", "--k", "1,2", "--mode", "sampled",
                                          "--trials", "100000"},
                            code);
    const double secs = seconds_since(t0);
    o.require(code == 0, "exit code " + std::to_string(code));
    const json rep = read_json(dir / "construct.json");
    const json& r = rep["results"];
    for (const auto& level : r["levels"]) o.require(level["meets_target"] == true, "level below 0.4");
    bool diff = false, pushed = false;
    for (const auto& v : r["verdicts"]) {
        o.require(v["status"] != "REFUTED", "violation in " + v["check"].get<std::string>());
        if (v["check"] == "level_density") o.require(v["status"] == "PROVEN", "density not certified");
        const auto pairs = v["budget_spent"].value("pairs", std::uint64_t{0});
        if (v["check"] == "difference_avoidance") diff = v["mode"] == "SAMPLED" && pairs >= 100000;
        if (v["check"] == "pushed_difference_avoidance") pushed = v["mode"] == "SAMPLED" && pairs >= 100000;
    }
    o.require(diff, "difference check short of 1e5 sampled pairs");
    o.require(pushed, "pushed-set check short of 1e5 sampled pairs");
    o.require(r.contains("exhaustive_analog"), "no exhaustive analog");
    if (r.contains("exhaustive_analog")) {
        bool analog_diff = false;
        for (const auto& v : r["exhaustive_analog"]["verdicts"])
            if (v["check"] == "difference_avoidance") analog_diff = v["status"] == "PROVEN" && v["mode"] == "EXHAUSTIVE";
        o.require(analog_diff, "analog difference check not proven");
        o.require(r["exhaustive_analog"]["params"]["n"] == json::array({4}), "analog scale");
    }
    for (const auto& e : r["e_report"]) o.require(e["E_equals_twice_A"] == true, "|E| != 2|A|");
    o.require(secs <= 600, "took " + std::to_string(secs) + " s");
    produced.push_back(dir / "construct.json");
    o.detail = "scales " + r["params"]["n"].dump() + ", " + std::to_string(secs) + " s" + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome explorer_determinism() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> args = {"--csv", "explore", "--p", "3", "--n", "2", "--k", "1", "--colors", "2", "--seed", "7"};
    int c1 = 0, c2 = 0;
    const auto a = run_to("explore_a", args, c1);
    const auto b = run_to("explore_b", args, c2);
    const double secs = seconds_since(t0);
    o.require(c1 == 0 && c2 == 0, "exit codes " + std::to_string(c1) + "," + std::to_string(c2));
    o.require(read_text(a / "explore.csv") == read_text(b / "explore.csv"), "CSV tables differ");
    auto ja = without_timestamp(read_json(a / "explore.json"));
    auto jb = without_timestamp(read_json(b / "explore.json"));
    ja["run_config"].erase("output_dir");
    jb["run_config"].erase("output_dir");
    o.require(ja.dump() == jb.dump(), "JSON reports differ");
    o.require(ja["results"]["rows"].size() == 81, "row count " + std::to_string(ja["results"]["rows"].size()));
    o.require(secs <= 300, "took " + std::to_string(secs) + " s");
    produced.push_back(a / "explore.json");
    return o;
}

Outcome report_round_trip() {
    Outcome o;
    int code = 0;
    run_to("density", {"density", "--spec", "p=2;i=1;chain=(10,3),(37,6)"}, code);
    produced.push_back(out_root / "density" / "density.json");
    std::set<std::string> commands;
    for (const auto& path : produced) {
        if (!fs::exists(path)) {
            o.require(false, "missing " + path.string());
            continue;
        }
        const json original = read_json(path);
        const std::string command = original["command"];
        commands.insert(command);
        const fs::path saved = path.parent_path() / "replayed-from.json";
        fs::copy_file(path, saved, fs::copy_options::overwrite_existing);
        cli({"--config", saved.string()});
        const json again = read_json(path);
        o.require(without_timestamp(original).dump() == without_timestamp(again).dump(), command + " differs on replay");
    }
    for (const auto& c : command_names()) o.require(commands.count(c) == 1, "no report for " + c);
    o.detail = std::to_string(commands.size()) + " commands replayed" + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

} // namespace

int main(int argc, char** argv) {
    out_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "recset-acceptance";
    fs::create_directories(out_root);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 lemma suite at n_cap 4", lemma_suite_exhaustive},
        {"2 counting matches enumeration", counting_oracle},
        {"3 base density convergence", density_convergence},
        {"4 exhaustive difference avoidance of A_1(4,3) against V(4,3)", witness_exhaustive},
        {"5 chromatic engine", chromatic_engine},
        {"6 construction pipeline", construction_pipeline},
        {"7 explorer determinism", explorer_determinism},
        {"8 report round trip", report_round_trip},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  (" << o.detail << ")" << std::endl;
    }
    return failed;
}
