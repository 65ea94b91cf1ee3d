#include "stoplab/sde.hpp"

#include "stoplab/error.hpp"
#include "stoplab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace stoplab {

std::string_view to_string(Scheme s) noexcept { return s == Scheme::euler ? "euler" : "log_euler"; }

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Returns false when the path has to be poisoned.
bool step_path(const ProblemSpec& p, Scheme scheme, std::span<double> row, double t0, double dt,
               std::uint64_t seed, std::uint64_t path) {
    const double root_dt = std::sqrt(dt);
    for (std::size_t k = 0; k + 1 < row.size(); ++k) {
        const double s = t0 + static_cast<double>(k) * dt;
        const double x = row[k];
        const double z = normal(seed, path, k);
        double next = nan;
        try {
            const double mu = p.mu(s, x);
            const double sig = p.sigma(x);
            if (scheme == Scheme::euler) {
                next = x + mu * dt + sig * root_dt * z;
            } else {
                const double a = mu / x;
                const double b = sig / x;
                next = x * std::exp((a - 0.5 * b * b) * dt + b * root_dt * z);
            }
        } catch (const Error&) {
            next = nan;
        }
        if (!std::isfinite(next) || (scheme == Scheme::log_euler && !(next > 0.0))) {
            std::fill(row.begin() + static_cast<std::ptrdiff_t>(k) + 1, row.end(), nan);
            return false;
        }
        row[k + 1] = next;
    }
    return true;
}

template <typename Fn>
void for_paths(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w * n / threads; i < (w + 1) * n / threads; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

PathBundle simulate_paths_dt(const ProblemSpec& p, double t, double x, std::size_t n_paths,
                             std::size_t n_steps, double dt, std::uint64_t seed, const SimOptions& opts) {
    check_invariants(p);
    if (n_steps < 1) throw std::invalid_argument("simulation needs n_steps >= 1");
    if (!(t >= 0.0 && t < p.horizon)) throw std::invalid_argument("start time must lie in [0, T)");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive");
    if (!std::isfinite(x)) throw std::invalid_argument("start state must be finite");
    const bool half_line = p.state_space == StateSpace::positive_half_line;
    if (half_line && !(x > 0.0)) throw std::invalid_argument("start state must be positive on the half line");

    PathBundle b;
    b.start_time = t;
    b.start_state = x;
    b.n_paths = n_paths;
    b.n_steps = n_steps;
    b.dt = dt;
    b.seed = seed;
    b.scheme = half_line ? Scheme::log_euler : Scheme::euler;
    b.states = Table<double>(n_paths, n_steps + 1);
    b.poisoned.assign(n_paths, 0);

    for_paths(n_paths, opts.threads, [&](std::size_t i) {
        auto row = b.states.row(i);
        row[0] = x;
        b.poisoned[i] = step_path(p, b.scheme, row, t, dt, seed, i) ? 0 : 1;
    });
    b.poisoned_count = static_cast<std::size_t>(std::count(b.poisoned.begin(), b.poisoned.end(), 1));
    return b;
}

PathBundle simulate_paths(const ProblemSpec& p, double t, double x, std::size_t n_paths,
                          std::size_t n_steps, std::uint64_t seed, const SimOptions& opts) {
    if (n_steps < 1) throw std::invalid_argument("simulation needs n_steps >= 1");
    const double span = p.horizon - t;
    const double dt = p.has_pole() ? span / static_cast<double>(n_steps + 1)
                                   : span / static_cast<double>(n_steps);
    return simulate_paths_dt(p, t, x, n_paths, n_steps, dt, seed, opts);
}

Region Region::everywhere() {
    return {[](double, double) { return true; }, "everywhere"};
}

Region Region::negative_drift(ScalarField drift, double tol_zero) {
    Region r;
    char buf[64];
    std::snprintf(buf, sizeof buf, "M = {mu < -%g}", tol_zero);
    r.description = buf;
    r.indicator = [drift = std::move(drift), tol_zero](double t, double x) {
        try {
            return drift(t, x) < -tol_zero;
        } catch (const Error&) {
            return false;
        }
    };
    return r;
}

std::size_t region_exit_time(std::span<const double> path, const Region& region, double t, double dt) {
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double x = path[k];
        if (std::isnan(x) || !region.contains(t + static_cast<double>(k) * dt, x)) return k;
    }
    return path.empty() ? 0 : path.size() - 1;
}

CoupledBundle simulate_coupled(const ProblemSpec& p, double t, double u, double x, const Region& region,
                               std::size_t n_paths, std::size_t n_steps, std::uint64_t seed,
                               const SimOptions& opts) {
    if (!(u >= 0.0 && u <= t)) throw std::invalid_argument("coupling needs 0 <= u <= t");
    CoupledBundle cb;
    cb.late = simulate_paths(p, t, x, n_paths, n_steps, seed, opts);
    cb.early = simulate_paths_dt(p, u, x, n_paths, n_steps, cb.late.dt, seed, opts);
    cb.region_description = region.description;
    cb.region_exit.resize(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i)
        cb.region_exit[i] = region_exit_time(cb.late.states.row(i), region, t, cb.late.dt);
    return cb;
}

namespace {

struct ComparisonScan {
    double statistic = 0.0;
    std::size_t statistic_step = 0;
    std::size_t worst_step = 0;
    std::size_t worst_path = 0;
    double worst_gap = 0.0;
    std::size_t used_paths = 0;
};

ComparisonScan scan(const CoupledBundle& cb) {
    ComparisonScan out;
    const std::size_t n = cb.late.n_paths;
    std::vector<std::size_t> paths;
    for (std::size_t i = 0; i < n; ++i)
        if (!cb.late.poisoned[i] && !cb.early.poisoned[i]) paths.push_back(i);
    out.used_paths = paths.size();
    if (paths.empty()) return out;
    for (std::size_t s = 0; s <= cb.late.n_steps; ++s) {
        double sum = 0.0;
        for (std::size_t i : paths) {
            const std::size_t m = std::min(s, cb.region_exit[i]);
            const double gap = std::max(cb.late.states(i, m) - cb.early.states(i, m), 0.0);
            sum += gap;
            if (gap > out.worst_gap) {
                out.worst_gap = gap;
                out.worst_path = i;
                out.worst_step = s;
            }
        }
        const double mean = sum / static_cast<double>(paths.size());
        if (mean > out.statistic) {
            out.statistic = mean;
            out.statistic_step = s;
        }
    }
    return out;
}

}  // namespace

double comparison_statistic(const CoupledBundle& cb) { return scan(cb).statistic; }

CheckReport comparison_report(const CoupledBundle& cb, double c_ord) {
    const ComparisonScan sc = scan(cb);
    const double tol = c_ord * cb.late.dt;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "u=%.17g t=%.17g x=%.17g dt=%.17g paths=%zu poisoned=%zu region=%s; "
                  "largest single gap %.6g at path %zu step %zu",
                  cb.early.start_time, cb.late.start_time, cb.late.start_state, cb.late.dt,
                  sc.used_paths, cb.late.n_paths - sc.used_paths, cb.region_description.c_str(),
                  sc.worst_gap, sc.worst_path, sc.worst_step);
    CheckReport r;
    r.check = "comparison";
    r.tolerance = tol;
    r.notes = buf;
    if (sc.used_paths == 0) {
        r.verdict = Verdict::inconclusive;
        return r;
    }
    r.worst = sc.statistic;
    r.witness.t = cb.late.time(sc.statistic_step);
    r.witness.t_node = sc.statistic_step;
    r.verdict = sc.statistic <= tol ? Verdict::pass : Verdict::fail;
    return r;
}

void write_paths_csv(std::ostream& out, const PathBundle& b) {
    out << "path,step,time,state\n";
    char buf[96];
    for (std::size_t i = 0; i < b.n_paths; ++i) {
        for (std::size_t k = 0; k <= b.n_steps; ++k) {
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", i, k, b.time(k), b.states(i, k));
            out << buf;
        }
    }
}

}  // namespace stoplab
