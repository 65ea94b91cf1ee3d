#include "stoplab/problem.hpp"

#include "stoplab/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

namespace stoplab {

std::string_view to_string(StateSpace s) noexcept {
    return s == StateSpace::real_line ? "real_line" : "positive_half_line";
}

std::string_view to_string(Orientation o) noexcept {
    return o == Orientation::lower ? "lower" : "upper";
}

namespace {

std::string at_point(const char* what, double t, double x) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s at (t=%.17g, x=%.17g)", what, t, x);
    return buf;
}

/// Evaluate a field and turn any failure into a ValidationError naming the point.
double probe(const ScalarField& f, const char* name, double t, double x) {
    double v = 0.0;
    try {
        v = f(t, x);
    } catch (const Error& e) {
        throw ValidationError(t, x, at_point(name, t, x) + ": " + e.what());
    }
    if (!std::isfinite(v)) throw ValidationError(t, x, at_point(name, t, x) + " is not finite");
    return v;
}

}  // namespace

void check_invariants(const ProblemSpec& spec) {
    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon))
        throw ValidationError(0.0, 0.0, "horizon must be finite and positive");
    if (!spec.drift || !spec.diffusion || !spec.terminal_reward)
        throw ValidationError(0.0, 0.0, "drift, diffusion and terminal reward are required");
    if (spec.diffusion.time_dependent)
        throw ValidationError(0.0, 0.0, "sigma must not depend on t");
}

ValidatedProblem validate_problem(const ProblemSpec& spec, const Grid& grid) {
    check_invariants(spec);
    if (grid.t.empty() || grid.x.empty()) throw std::invalid_argument("probe grid is empty");
    if (grid.t.front() < 0.0 || grid.t.back() > spec.horizon)
        throw std::invalid_argument("probe grid leaves [0, T]");
    if (spec.state_space == StateSpace::positive_half_line && grid.x.front() <= 0.0)
        throw std::invalid_argument("probe grid leaves the positive half line");

    ValidatedProblem out;
    out.spec = spec;

    bool sigma_zero_reported = false;
    for (double x : grid.x) {
        const double s = probe(spec.diffusion, "sigma", 0.0, x);
        if (s < 0.0) throw ValidationError(0.0, x, at_point("sigma is negative", 0.0, x));
        if (s == 0.0 && !sigma_zero_reported) {
            out.warnings.push_back(at_point("sigma vanishes", 0.0, x) +
                                   "; the process is degenerate there");
            sigma_zero_reported = true;
        }
    }

    std::vector<double> max_abs_drift(grid.t.size(), 0.0);
    out.lipschitz_by_time.assign(grid.t.size(), 0.0);
    for (std::size_t k = 0; k < grid.t.size(); ++k) {
        const double t = grid.t[k];
        double prev = 0.0;
        for (std::size_t j = 0; j < grid.x.size(); ++j) {
            const double x = grid.x[j];
            const double m = probe(spec.drift, "drift", t, x);
            probe(spec.terminal_reward, "terminal reward", t, x);
            if (spec.running_reward) probe(*spec.running_reward, "running reward", t, x);
            max_abs_drift[k] = std::max(max_abs_drift[k], std::fabs(m));
            if (j > 0) {
                const double slope = std::fabs(m - prev) / (x - grid.x[j - 1]);
                out.lipschitz_by_time[k] = std::max(out.lipschitz_by_time[k], slope);
            }
            prev = m;
        }
    }
    out.lipschitz_estimate =
        *std::max_element(out.lipschitz_by_time.begin(), out.lipschitz_by_time.end());
    if (!std::isfinite(out.lipschitz_estimate))
        throw ValidationError(0.0, 0.0, "drift Lipschitz estimate is not finite");

    // Blow-up towards the horizon: the last three time sections grow strictly
    // and the final one dominates every section of the first half by a factor of 10.
    auto grows_at_end = [](const std::vector<double>& m) {
        const std::size_t n = m.size();
        if (n < 4) return false;
        const double early = *std::max_element(m.begin(), m.begin() + static_cast<std::ptrdiff_t>((n + 1) / 2));
        return m[n - 3] < m[n - 2] && m[n - 2] < m[n - 1] && m[n - 1] > 10.0 * early &&
               m[n - 1] > 1e-12;
    };
    if (grows_at_end(max_abs_drift) || grows_at_end(out.lipschitz_by_time))
        out.warnings.push_back("drift magnitude grows unboundedly as t→T");
    return out;
}

namespace {

// value(t,x) = sign * f(t,-x)
ScalarField reflect(const ScalarField& f, double sign) {
    ScalarField r;
    r.time_dependent = f.time_dependent;
    r.pole_at_horizon = f.pole_at_horizon;
    r.eval_noise = f.eval_noise;
    r.regularity_note = f.regularity_note.empty() ? "reflected" : f.regularity_note + " (reflected)";
    r.fn = [fn = f.fn, sign](double t, double x) { return sign * fn(t, -x); };
    if (f.dt) r.dt = [d = f.dt, sign](double t, double x) { return sign * d(t, -x); };
    if (f.dx) r.dx = [d = f.dx, sign](double t, double x) { return -sign * d(t, -x); };
    if (f.dxx) r.dxx = [d = f.dxx, sign](double t, double x) { return sign * d(t, -x); };
    return r;
}

}  // namespace

ProblemSpec flip_orientation(const ProblemSpec& spec) {
    if (spec.state_space != StateSpace::real_line)
        throw Error("unsupported orientation: only real_line problems can be reflected");
    ProblemSpec out = spec;
    out.drift = reflect(spec.drift, -1.0);
    out.diffusion = reflect(spec.diffusion, 1.0);
    out.terminal_reward = reflect(spec.terminal_reward, 1.0);
    if (spec.running_reward) out.running_reward = reflect(*spec.running_reward, 1.0);
    out.orientation = spec.orientation == Orientation::upper ? Orientation::lower : Orientation::upper;
    return out;
}

ProblemSpec reduce_to_running_reward(const ProblemSpec& spec, const Grid& probe_grid) {
    check_invariants(spec);
    const ScalarField g = spec.terminal_reward;
    const ScalarField mu = spec.drift;
    const ScalarField sigma = spec.diffusion;
    const std::optional<ScalarField> f = spec.running_reward;
    const double T = spec.horizon;

    ScalarField h;
    h.time_dependent = g.time_dependent || mu.time_dependent || (f && f->time_dependent);
    h.pole_at_horizon = mu.pole_at_horizon;
    h.regularity_note = "f + Lg";
    h.fn = [=](double t, double x) {
        const double s = sigma(0.0, x);
        const double value = (f ? (*f)(t, x) : 0.0) + partial_t(g, t, x, 0.0, T) +
                             mu(t, x) * partial_x(g, t, x) + 0.5 * s * s * partial_xx(g, t, x);
        if (!std::isfinite(value))
            throw ReductionError(t, x, at_point("f + Lg is not finite", t, x));
        return value;
    };

    // Round-off of the central differences, bounded over the probe grid.
    const bool need_dt = g.time_dependent && !g.dt;
    const bool fd_used = need_dt || !g.dx || !g.dxx;
    double noise = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (double t : probe_grid.t) {
        for (double x : probe_grid.x) {
            try {
                h.fn(t, x);
            } catch (const ReductionError&) {
                throw;
            } catch (const Error& e) {
                throw ReductionError(t, x, at_point("cannot form f + Lg", t, x) + ": " + e.what());
            }
            if (!fd_used) continue;
            const double gv = std::fabs(g(t, x));
            const double hx = fd_step(x);
            const double s = sigma(0.0, x);
            double n = 0.0;
            if (need_dt) n += 2.0 * eps * gv / fd_step(t);
            if (!g.dx) n += eps * gv * std::fabs(mu(t, x)) / hx;
            if (!g.dxx) n += 0.5 * s * s * 4.0 * eps * gv / (hx * hx);
            noise = std::max(noise, n);
        }
    }
    h.eval_noise = 10.0 * noise + (f ? f->eval_noise : 0.0);

    ProblemSpec out = spec;
    out.terminal_reward = ScalarField::constant(0.0);
    out.running_reward = std::move(h);
    return out;
}

}  // namespace stoplab
