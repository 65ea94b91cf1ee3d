#include "stoplab/solver.hpp"

#include "stoplab/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace stoplab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad_node(const char* what, std::size_t k, std::size_t j, double t, double x,
                           const std::string& detail = {}) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s at node (k=%zu, j=%zu), (t=%.17g, x=%.17g)", what, k, j, t, x);
    throw SolverError(detail.empty() ? std::string(buf) : std::string(buf) + ": " + detail);
}

double node_value(double (*fn)(const ProblemSpec&, double, double), const ProblemSpec& p,
                  const char* what, std::size_t k, std::size_t j, double t, double x) {
    double v = 0.0;
    try {
        v = fn(p, t, x);
    } catch (const Error& e) {
        bad_node(what, k, j, t, x, e.what());
    }
    if (!std::isfinite(v)) bad_node(what, k, j, t, x, "not finite");
    return v;
}

double eval_mu(const ProblemSpec& p, double t, double x) { return p.mu(t, x); }
double eval_f(const ProblemSpec& p, double t, double x) { return p.f(t, x); }
double eval_g(const ProblemSpec& p, double t, double x) { return p.g(t, x); }
double eval_sigma(const ProblemSpec& p, double, double x) { return p.sigma(x); }

struct PsorResult {
    std::size_t sweeps = 0;
    double residual = 0.0;
    double omega = 1.0;
};

double lcp_residual(const StepSystem& s, std::span<const double> v) {
    const std::size_t n = v.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double av = s.diag[i] * v[i] - s.rhs[i];
        if (i > 0) av += s.lower[i] * v[i - 1];
        if (i + 1 < n) av += s.upper[i] * v[i + 1];
        worst = std::max(worst, std::fabs(std::min(v[i] - s.obstacle[i], av)));
    }
    return worst;
}

// Unconstrained solve of the tridiagonal system (Thomas algorithm).
std::vector<double> tridiagonal_solve(const StepSystem& s) {
    const std::size_t n = s.diag.size();
    std::vector<double> c(n), d(n);
    double denom = s.diag[0];
    c[0] = n > 1 ? s.upper[0] / denom : 0.0;
    d[0] = s.rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = s.diag[i] - s.lower[i] * c[i - 1];
        c[i] = i + 1 < n ? s.upper[i] / denom : 0.0;
        d[i] = (s.rhs[i] - s.lower[i] * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

// Returns the sweeps used, or 0 when the iteration diverged or ran out of budget.
std::size_t sor_sweeps(const StepSystem& s, std::span<double> v, double omega, double tol, std::size_t budget) {
    const std::size_t n = v.size();
    double first_change = -1.0;
    for (std::size_t sweep = 1; sweep <= budget; ++sweep) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = s.rhs[i] - s.diag[i] * v[i];
            if (i > 0) r -= s.lower[i] * v[i - 1];
            if (i + 1 < n) r -= s.upper[i] * v[i + 1];
            const double next = std::max(s.obstacle[i], v[i] + omega * r / s.diag[i]);
            change = std::max(change, std::fabs(next - v[i]));
            v[i] = next;
        }
        if (first_change < 0.0) first_change = change;
        if (!std::isfinite(change) || change > 1e6 * (1.0 + first_change)) return 0;
        if (change <= tol && lcp_residual(s, v) <= tol) return sweep;
    }
    return 0;
}

// Over-relaxed sweeps first; if they stall or diverge (possible for the
// non-symmetric upwind rows), restart with omega = 1, which converges for
// the diagonally dominant M-matrices assembled here.
PsorResult psor(const StepSystem& s, std::span<double> v, double tol, std::size_t max_sweeps) {
    const std::size_t n = v.size();
    double rho = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        rho = std::max(rho, (std::fabs(s.lower[i]) + std::fabs(s.upper[i])) / s.diag[i]);
    PsorResult out;
    out.omega = rho < 1.0 ? std::clamp(2.0 / (1.0 + std::sqrt(1.0 - rho * rho)), 1.0, 1.95) : 1.0;

    // Warm start from the projected unconstrained solution; where it is
    // finite this is exact on continuation rows.
    const std::vector<double> free = tridiagonal_solve(s);
    for (std::size_t i = 0; i < n; ++i)
        if (std::isfinite(free[i])) v[i] = std::max(s.obstacle[i], free[i]);
    const std::vector<double> start(v.begin(), v.end());
    const std::size_t first_budget = out.omega > 1.0 ? max_sweeps / 2 : max_sweeps;
    std::size_t used = sor_sweeps(s, v, out.omega, tol, first_budget);
    if (used > 0) {
        out.sweeps = used;
        out.residual = lcp_residual(s, v);
        return out;
    }
    if (out.omega > 1.0) {
        std::copy(start.begin(), start.end(), v.begin());
        out.omega = 1.0;
        used = sor_sweeps(s, v, 1.0, tol, max_sweeps - first_budget);
        if (used > 0) {
            out.sweeps = first_budget + used;
            out.residual = lcp_residual(s, v);
            return out;
        }
    }
    out.sweeps = max_sweeps;
    out.residual = lcp_residual(s, v);
    char buf[160];
    std::snprintf(buf, sizeof buf, "PSOR did not converge in %zu sweeps (worst residual %.3e)",
                  max_sweeps, out.residual);
    throw SolverError(buf);
}

}  // namespace

StencilRow generator_row(double mu, double sigma, double dx) {
    const double diffusion = 0.5 * sigma * sigma;
    const double d2 = diffusion / (dx * dx);
    StencilRow row;
    const bool central = diffusion > 0.0 && std::fabs(mu) * dx <= 2.0 * diffusion;
    if (central) {
        row.lower = d2 - mu / (2.0 * dx);
        row.upper = d2 + mu / (2.0 * dx);
        row.diag = -2.0 * d2;
        return row;
    }
    row.upwind = true;
    if (mu >= 0.0) {
        row.lower = d2;
        row.upper = d2 + mu / dx;
        row.diag = -2.0 * d2 - mu / dx;
    } else {
        row.lower = d2 - mu / dx;
        row.upper = d2;
        row.diag = -2.0 * d2 + mu / dx;
    }
    return row;
}

std::string_view to_string(EdgeRule e) noexcept {
    return e == EdgeRule::obstacle ? "obstacle" : "outflow";
}

StepSystem assemble_step(const ProblemSpec& p, const Grid& grid, std::size_t k, double theta,
                         std::span<const double> v_next, EdgeRule edge) {
    const std::size_t N = grid.nx();
    const double dt = grid.t[k + 1] - grid.t[k];
    const double dx = grid.dx;
    const double t_now = grid.t[k];
    const double t_next = grid.t[k + 1];
    const bool has_f = p.running_reward.has_value();

    StepSystem s;
    s.lower.assign(N + 1, 0.0);
    s.diag.assign(N + 1, 1.0);
    s.upper.assign(N + 1, 0.0);
    s.rhs.assign(N + 1, 0.0);
    s.obstacle.assign(N + 1, 0.0);
    for (std::size_t j = 0; j <= N; ++j)
        s.obstacle[j] = node_value(eval_g, p, "terminal reward", k, j, t_now, grid.x[j]);

    auto source = [&](std::size_t j) {
        if (!has_f) return 0.0;
        double src = theta * node_value(eval_f, p, "running reward", k, j, t_now, grid.x[j]);
        if (theta < 1.0)
            src += (1.0 - theta) * node_value(eval_f, p, "running reward", k + 1, j, t_next, grid.x[j]);
        return dt * src;
    };

    for (std::size_t j = 1; j < N; ++j) {
        const double x = grid.x[j];
        const double sig = node_value(eval_sigma, p, "diffusion", k, j, t_now, x);
        const double mu_now = node_value(eval_mu, p, "drift", k, j, t_now, x);
        const StencilRow now = generator_row(mu_now, sig, dx);
        s.upwind_nodes += now.upwind ? 1 : 0;
        s.lower[j] = -theta * dt * now.lower;
        s.diag[j] = 1.0 - theta * dt * now.diag;
        s.upper[j] = -theta * dt * now.upper;

        double rhs = v_next[j];
        if (theta < 1.0) {
            const double mu_next = node_value(eval_mu, p, "drift", k + 1, j, t_next, x);
            const StencilRow next = generator_row(mu_next, sig, dx);
            const double lv = next.lower * v_next[j - 1] + next.diag * v_next[j] + next.upper * v_next[j + 1];
            rhs += (1.0 - theta) * dt * lv;
        }
        s.rhs[j] = rhs + source(j);
    }

    // Edge rows. inward_sign is +1 at x_min (drift into the domain is mu > 0)
    // and -1 at x_max.
    auto edge_row = [&](std::size_t j, std::size_t inner, double inward_sign) {
        s.rhs[j] = s.obstacle[j];
        if (edge != EdgeRule::outflow) return false;
        const double mu_now = node_value(eval_mu, p, "drift", k, j, t_now, grid.x[j]);
        const double a_now = std::max(inward_sign * mu_now, 0.0) / dx;
        if (!(a_now > 0.0)) return false;
        double a_next = 0.0;
        if (theta < 1.0) {
            const double mu_next = node_value(eval_mu, p, "drift", k + 1, j, t_next, grid.x[j]);
            a_next = std::max(inward_sign * mu_next, 0.0) / dx;
        }
        s.diag[j] = 1.0 + theta * dt * a_now;
        (j == 0 ? s.upper[j] : s.lower[j]) = -theta * dt * a_now;
        s.rhs[j] = v_next[j] + (1.0 - theta) * dt * a_next * (v_next[inner] - v_next[j]) + source(j);
        return true;
    };
    s.outflow_lo = edge_row(0, 1, 1.0);
    s.outflow_hi = edge_row(N, N - 1, -1.0);
    return s;
}

ValueSurface solve_backward(const ProblemSpec& problem, const Grid& grid, const SolverOptions& opts) {
    check_invariants(problem);
    if (grid.nt() < 2 || grid.nx() < 2) throw std::invalid_argument("grid too small");
    if (!(opts.theta >= 0.5 && opts.theta <= 1.0)) throw std::invalid_argument("theta must lie in [0.5, 1]");

    const std::size_t Nt = grid.nt();
    const std::size_t N = grid.nx();

    ValueSurface s;
    s.grid = grid;
    s.problem = std::make_shared<const ProblemSpec>(problem);
    s.orientation = problem.orientation;
    s.v = Table<double>(Nt + 1, N + 1);
    s.obstacle = Table<double>(Nt + 1, N + 1);
    s.exercise = Table<std::uint8_t>(Nt + 1, N + 1);
    s.meta.theta = opts.theta;
    s.meta.edge = opts.edge;
    s.meta.step_theta.assign(Nt, opts.theta);
    s.meta.sweeps.assign(Nt, 0);
    s.meta.residual.assign(Nt, 0.0);
    s.meta.omega.assign(Nt, 1.0);

    double max_abs_g = 0.0;
    for (std::size_t k = 0; k <= Nt; ++k) {
        for (std::size_t j = 0; j <= N; ++j) {
            const double g = node_value(eval_g, problem, "terminal reward", k, j, grid.t[k], grid.x[j]);
            s.obstacle(k, j) = g;
            max_abs_g = std::max(max_abs_g, std::fabs(g));
        }
    }
    s.meta.tol_contact = 1e-7 * (1.0 + max_abs_g);

    for (std::size_t j = 0; j <= N; ++j) s.v(Nt, j) = s.obstacle(Nt, j);

    std::vector<double> row(N + 1);
    for (std::size_t step = 0; step < Nt; ++step) {
        const std::size_t k = Nt - 1 - step;
        const double theta = step < opts.implicit_startup_steps ? 1.0 : opts.theta;
        s.meta.step_theta[k] = theta;
        const StepSystem sys = assemble_step(problem, grid, k, theta, s.v.row(k + 1), opts.edge);
        s.meta.upwind_nodes += sys.upwind_nodes;

        for (std::size_t j = 0; j <= N; ++j) row[j] = std::max(sys.obstacle[j], s.v(k + 1, j));
        if (!sys.outflow_lo) row[0] = sys.obstacle[0];
        if (!sys.outflow_hi) row[N] = sys.obstacle[N];
        PsorResult res;
        try {
            res = psor(sys, row, opts.psor_tol, opts.max_sweeps);
        } catch (const SolverError& e) {
            char buf[80];
            std::snprintf(buf, sizeof buf, " (step to t=%.17g)", grid.t[k]);
            throw SolverError(std::string(e.what()) + buf);
        }
        s.meta.sweeps[k] = res.sweeps;
        s.meta.residual[k] = res.residual;
        s.meta.omega[k] = res.omega;
        for (std::size_t j = 0; j <= N; ++j) s.v(k, j) = row[j];
    }

    for (std::size_t k = 0; k <= Nt; ++k)
        for (std::size_t j = 0; j <= N; ++j)
            s.exercise(k, j) = s.v(k, j) - s.obstacle(k, j) <= s.meta.tol_contact ? 1 : 0;
    return s;
}

ValueSurface mirror_surface(const ValueSurface& s) {
    ValueSurface m = s;
    const std::size_t N = s.grid.nx();
    for (std::size_t j = 0; j <= N; ++j) m.grid.x[j] = -s.grid.x[N - j];
    for (std::size_t k = 0; k < s.v.rows(); ++k) {
        for (std::size_t j = 0; j <= N; ++j) {
            m.v(k, j) = s.v(k, N - j);
            m.obstacle(k, j) = s.obstacle(k, N - j);
            m.exercise(k, j) = s.exercise(k, N - j);
        }
    }
    m.orientation = s.orientation == Orientation::lower ? Orientation::upper : Orientation::lower;
    if (s.problem) m.problem = std::make_shared<const ProblemSpec>(flip_orientation(*s.problem));
    return m;
}

Boundary extract_boundary(const ValueSurface& s) {
    const std::size_t N = s.grid.nx();
    Boundary out;
    out.t = s.grid.t;
    out.dx = s.grid.dx;
    out.orientation = s.orientation;
    out.b.assign(s.grid.t.size(), 0.0);
    const bool lower = s.orientation == Orientation::lower;

    for (std::size_t k = 0; k < s.grid.t.size(); ++k) {
        // Walk from the side where stopping should happen; count transitions.
        std::size_t n_stop = 0;
        std::size_t transitions = 0;
        std::optional<std::size_t> edge_node;
        for (std::size_t step = 0; step + 1 < N; ++step) {
            const std::size_t j = lower ? 1 + step : N - 1 - step;
            const bool stop = s.exercise(k, j) != 0;
            if (stop) {
                ++n_stop;
                edge_node = j;
            }
            if (step > 0) {
                const std::size_t prev = lower ? j - 1 : j + 1;
                if ((s.exercise(k, prev) != 0) != stop) ++transitions;
            }
        }
        const bool first_stops = s.exercise(k, lower ? 1 : N - 1) != 0;
        const bool separated = transitions == 0 || (transitions == 1 && first_stops);
        if (!separated) out.non_separated.push_back(k);

        if (n_stop == 0) {
            out.b[k] = lower ? -inf : inf;
        } else if (n_stop == N - 1) {
            out.b[k] = lower ? inf : -inf;
        } else {
            out.b[k] = s.grid.x[*edge_node];
        }
    }
    if (!out.non_separated.empty()) {
        std::ostringstream msg;
        msg << "x-section is not a single stop/continue split at " << out.non_separated.size()
            << " time node(s), first at t=" << s.grid.t[out.non_separated.front()];
        out.warnings.push_back(msg.str());
    }
    return out;
}

Boundary negate_boundary(const Boundary& b) {
    Boundary out = b;
    for (double& v : out.b) v = -v;
    out.orientation = b.orientation == Orientation::lower ? Orientation::upper : Orientation::lower;
    return out;
}

CheckReport residual_complementarity(const ValueSurface& s) {
    if (!s.problem) throw std::invalid_argument("surface carries no problem");
    const ProblemSpec& p = *s.problem;
    const Grid& grid = s.grid;
    const std::size_t Nt = grid.nt();
    const std::size_t N = grid.nx();

    double scale = 1.0;
    double max_mu = 0.0, max_diff = 0.0, max_f = 0.0;
    for (std::size_t k = 0; k <= Nt; ++k) {
        for (std::size_t j = 0; j <= N; ++j) {
            max_mu = std::max(max_mu, std::fabs(p.mu(grid.t[k], grid.x[j])));
            max_f = std::max(max_f, std::fabs(p.f(grid.t[k], grid.x[j])));
        }
    }
    for (double x : grid.x) max_diff = std::max(max_diff, 0.5 * p.sigma(x) * p.sigma(x));
    scale += max_mu + max_diff + max_f;
    const double tol = 10.0 * (grid.dt + grid.dx * grid.dx) * scale;

    WorstTracker worst;
    std::size_t continuation_nodes = 0;
    for (std::size_t k = 0; k < Nt; ++k) {
        const double theta = s.meta.step_theta.empty() ? s.meta.theta : s.meta.step_theta[k];
        const StepSystem sys = assemble_step(p, grid, k, theta, s.v.row(k + 1), s.meta.edge);
        const double dt = grid.t[k + 1] - grid.t[k];
        for (std::size_t j = 1; j < N; ++j) {
            const double av =
                sys.lower[j] * s.v(k, j - 1) + sys.diag[j] * s.v(k, j) + sys.upper[j] * s.v(k, j + 1) - sys.rhs[j];
            // av / dt = -(discrete d/dt + L) v - f
            const double pde = av / dt;
            Witness w{grid.t[k], grid.x[j], k, j};
            if (s.exercise(k, j)) {
                worst.observe(-pde, w);
                worst.observe(s.v(k, j) - s.obstacle(k, j) - s.meta.tol_contact, w);
            } else {
                ++continuation_nodes;
                worst.observe(std::fabs(pde), w);
            }
        }
    }
    std::ostringstream notes;
    notes << "tol = 10 (dt + dx^2) * " << scale << "; continuation nodes " << continuation_nodes;
    return worst.finish("residual_complementarity", tol, notes.str());
}

}  // namespace stoplab
