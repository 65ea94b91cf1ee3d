#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stoplab {

enum class Verdict { pass, fail, inconclusive };

std::string_view to_string(Verdict v) noexcept;

/// Location of the worst violation: a (t, x) point, or a time node only.
struct Witness {
    double t = std::numeric_limits<double>::quiet_NaN();
    double x = std::numeric_limits<double>::quiet_NaN();
    std::optional<std::size_t> t_node;
    std::optional<std::size_t> x_node;
};

/// Verdict of one hypothesis or conclusion check, evaluated at grid scale.
/// `worst` is the largest signed violation found (<= tolerance on PASS).
struct CheckReport {
    std::string check;
    Verdict verdict = Verdict::inconclusive;
    double worst = -std::numeric_limits<double>::infinity();
    Witness witness;
    double tolerance = 0.0;
    std::string notes;

    bool passed() const noexcept { return verdict == Verdict::pass; }
    bool failed() const noexcept { return verdict == Verdict::fail; }
};

/// Keeps the largest violation seen so far. Near-ties keep the earlier
/// witness so that scans report the first of equally bad points.
class WorstTracker {
public:
    void observe(double violation, const Witness& where) {
        ++count_;
        const double margin = 1e-9 * (worst_ < 0 ? -worst_ : worst_);
        if (!seen_ || violation > worst_ + margin) {
            worst_ = violation;
            witness_ = where;
            seen_ = true;
        }
    }
    bool any() const noexcept { return seen_; }
    std::size_t count() const noexcept { return count_; }
    double worst() const noexcept { return worst_; }
    const Witness& witness() const noexcept { return witness_; }

    /// PASS iff worst <= tol, INCONCLUSIVE when nothing was observed.
    CheckReport finish(std::string name, double tol, std::string notes = {}) const;

private:
    bool seen_ = false;
    std::size_t count_ = 0;
    double worst_ = -std::numeric_limits<double>::infinity();
    Witness witness_;
};

/// One report as the JSON object {check, verdict, worst, witness:{t,x}, tol, notes}.
std::string report_to_json(const CheckReport& r);

/// Full reports document {run_id, config_digest, checks:[...], timings}.
std::string reports_document(const std::string& run_id, const std::string& config_digest,
                             const std::vector<CheckReport>& checks,
                             const std::vector<std::pair<std::string, double>>& timings);

}  // namespace stoplab
