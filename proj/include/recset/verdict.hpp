#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "recset/core.hpp"

namespace recset {

using json = nlohmann::ordered_json;

enum class Status { proven, refuted, inconclusive };
enum class Mode { exhaustive, sampled, search };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::proven: return "PROVEN";
        case Status::refuted: return "REFUTED";
        case Status::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

inline std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::exhaustive: return "EXHAUSTIVE";
        case Mode::sampled: return "SAMPLED";
        case Mode::search: return "SEARCH";
    }
    return "?";
}

inline Status status_from_string(std::string_view s) {
    if (s == "PROVEN") return Status::proven;
    if (s == "REFUTED") return Status::refuted;
    if (s == "INCONCLUSIVE") return Status::inconclusive;
    throw invalid_argument("unknown status '" + std::string(s) + "'");
}

/// Outcome of one check. PROVEN and REFUTED carry a witness or a certificate
/// description; INCONCLUSIVE records whether a budget ran out.
struct Verdict {
    Status status = Status::inconclusive;
    Mode mode = Mode::exhaustive;
    std::string check;
    json parameters = json::object();
    json witness = nullptr;
    std::string certificate;
    std::map<std::string, std::uint64_t> budget_spent;
    bool budget_exhausted = false;
    std::vector<std::string> warnings;

    bool proven() const { return status == Status::proven; }
    bool refuted() const { return status == Status::refuted; }

    /// A sampled run that found nothing finished its work; only budget exhaustion counts as open.
    bool completed() const { return status != Status::inconclusive || !budget_exhausted; }

    json to_json() const {
        json j;
        j["check"] = check;
        j["status"] = to_string(status);
        j["mode"] = to_string(mode);
        j["parameters"] = parameters;
        j["witness"] = witness;
        j["certificate"] = certificate;
        json b = json::object();
        for (const auto& [k, v] : budget_spent) b[k] = v;
        j["budget_spent"] = b;
        j["budget_exhausted"] = budget_exhausted;
        j["warnings"] = warnings;
        j["library_version"] = library_version;
        return j;
    }
};

/// Fold of many verdicts: REFUTED dominates, then open INCONCLUSIVE.
inline Status combine(const std::vector<Verdict>& vs) {
    bool open = false;
    for (const auto& v : vs) {
        if (v.refuted()) return Status::refuted;
        if (!v.completed()) open = true;
    }
    return open ? Status::inconclusive : Status::proven;
}

/// Search limits. Deterministic node counts only, so results never depend on machine speed.
struct Budget {
    std::uint64_t nodes = 50'000'000;
};

} // namespace recset
