#include "stoplab/report.hpp"

#include <json.hpp>

#include <cmath>

namespace stoplab {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

CheckReport WorstTracker::finish(std::string name, double tol, std::string notes) const {
    CheckReport r;
    r.check = std::move(name);
    r.tolerance = tol;
    r.notes = std::move(notes);
    if (!seen_) {
        r.verdict = Verdict::inconclusive;
        if (r.notes.empty()) r.notes = "no nodes in scope";
        return r;
    }
    r.worst = worst_;
    r.witness = witness_;
    r.verdict = worst_ <= tol ? Verdict::pass : Verdict::fail;
    return r;
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

nlohmann::ordered_json to_json(const CheckReport& r) {
    nlohmann::ordered_json witness = {{"t", number_or_null(r.witness.t)}, {"x", number_or_null(r.witness.x)}};
    return {{"check", r.check},
            {"verdict", std::string(to_string(r.verdict))},
            {"worst", number_or_null(r.worst)},
            {"witness", witness},
            {"tol", number_or_null(r.tolerance)},
            {"notes", r.notes}};
}

}  // namespace

std::string report_to_json(const CheckReport& r) { return to_json(r).dump(); }

std::string reports_document(const std::string& run_id, const std::string& config_digest,
                             const std::vector<CheckReport>& checks,
                             const std::vector<std::pair<std::string, double>>& timings) {
    nlohmann::ordered_json doc;
    doc["run_id"] = run_id;
    doc["config_digest"] = config_digest;
    doc["checks"] = nlohmann::json::array();
    for (const auto& c : checks) doc["checks"].push_back(to_json(c));
    doc["timings"] = nlohmann::ordered_json::object();
    for (const auto& [stage, seconds] : timings) doc["timings"][stage] = seconds;
    return doc.dump(2) + "\n";
}

}  // namespace stoplab
