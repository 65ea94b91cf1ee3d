#pragma once

#include "stoplab/problem.hpp"
#include "stoplab/report.hpp"
#include "stoplab/table.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace stoplab {

enum class Scheme { euler, log_euler };
std::string_view to_string(Scheme s) noexcept;

/// Paths of X^{t,x}; states(i, k) is path i at time start_time + k dt.
struct PathBundle {
    double start_time = 0.0;
    double start_state = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    double dt = 0.0;
    Table<double> states;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::euler;
    /// 1 for paths that produced a non-finite state; later states are NaN.
    std::vector<std::uint8_t> poisoned;
    std::size_t poisoned_count = 0;

    double time(std::size_t k) const { return start_time + static_cast<double>(k) * dt; }
};

struct SimOptions {
    /// Worker threads; results do not depend on this.
    std::size_t threads = 1;
};

/// Euler-Maruyama from (t, x) with n_steps steps covering [t, T]. Half-line
/// problems are stepped in log X. When the drift has a pole at T the last
/// node is T - dt instead, with dt = (T - t) / (n_steps + 1).
PathBundle simulate_paths(const ProblemSpec& problem, double t, double x, std::size_t n_paths,
                          std::size_t n_steps, std::uint64_t seed, const SimOptions& opts = {});

/// Same, with an explicit step: the bundle covers [t, t + n_steps dt].
PathBundle simulate_paths_dt(const ProblemSpec& problem, double t, double x, std::size_t n_paths,
                             std::size_t n_steps, double dt, std::uint64_t seed,
                             const SimOptions& opts = {});

struct Region {
    std::function<bool(double t, double x)> indicator;
    std::string description;

    bool contains(double t, double x) const { return indicator(t, x); }

    static Region everywhere();
    /// {mu < -tol_zero}; points where the drift cannot be evaluated are outside.
    static Region negative_drift(ScalarField drift, double tol_zero = 1e-12);
};

/// First step k with (t + k dt, path[k]) outside the region (NaN counts as
/// outside); path.size() - 1 if the path never leaves.
std::size_t region_exit_time(std::span<const double> path, const Region& region, double t, double dt);

/// X^{t,x} (late) and X^{u,x} (early), u <= t, driven by the same normals.
struct CoupledBundle {
    PathBundle late;
    PathBundle early;
    bool shared_increments = true;
    std::vector<std::size_t> region_exit;
    std::string region_description;
};

CoupledBundle simulate_coupled(const ProblemSpec& problem, double t, double u, double x,
                               const Region& region, std::size_t n_paths, std::size_t n_steps,
                               std::uint64_t seed, const SimOptions& opts = {});

/// Max over steps s of the sample mean of (X^{t,x}_{s^tau} - X^{u,x}_{s^tau})^+,
/// against tol = c_ord * dt.
CheckReport comparison_report(const CoupledBundle& cb, double c_ord = 1.0);

/// The statistic of comparison_report on its own.
double comparison_statistic(const CoupledBundle& cb);

/// CSV with header path,step,time,state.
void write_paths_csv(std::ostream& out, const PathBundle& b);

}  // namespace stoplab
