#include "stoplab/grid.hpp"

#include "stoplab/error.hpp"
#include "stoplab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stoplab {

Grid make_grid(double t_end, double horizon, double x_min, double x_max, std::size_t nt,
               std::size_t nx) {
    if (nt < 2 || nx < 2) throw std::invalid_argument("grid needs at least 2 intervals per axis");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("grid end time must be positive");
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw std::invalid_argument("degenerate state range");
    Grid g;
    g.horizon = horizon;
    g.dt = t_end / static_cast<double>(nt);
    g.dx = (x_max - x_min) / static_cast<double>(nx);
    g.t.resize(nt + 1);
    g.x.resize(nx + 1);
    for (std::size_t k = 0; k <= nt; ++k) g.t[k] = static_cast<double>(k) * g.dt;
    for (std::size_t j = 0; j <= nx; ++j) g.x[j] = x_min + static_cast<double>(j) * g.dx;
    g.t[nt] = t_end;
    return g;
}

double pole_trimmed_dt(double horizon, std::size_t nt) {
    const double eps = std::max(horizon / static_cast<double>(nt + 1), 1e-6 * horizon);
    return (horizon - eps) / static_cast<double>(nt);
}

Grid build_grid(const ProblemSpec& problem, const GridOptions& opts) {
    if (opts.nt < 2 || opts.nx < 2) throw std::invalid_argument("grid needs Nt, Nx >= 2");
    const double T = problem.horizon;
    const bool half_line = problem.state_space == StateSpace::positive_half_line;
    if (half_line && !(opts.x_ref > 0.0))
        throw std::invalid_argument("reference point must be positive on the half line");

    const double root_t = std::sqrt(T);
    const double s0 = std::fabs(problem.sigma(opts.x_ref)) * root_t;
    double scale = s0;
    for (double u : {-1.0, -0.5, 0.5, 1.0}) {
        const double xp = opts.x_ref + u * opts.x_pad * s0;
        if (half_line && xp <= 0.0) continue;
        const double s = std::fabs(problem.sigma(xp)) * root_t;
        if (std::isfinite(s)) scale = std::max(scale, s);
    }
    if (!(scale > 0.0) || !(opts.x_pad > 0.0))
        throw std::invalid_argument("degenerate state range: sigma scale or padding is zero");

    double x_min = opts.x_ref - opts.x_pad * scale;
    const double x_max = opts.x_ref + opts.x_pad * scale;
    if (half_line && x_min <= 0.0) x_min = x_max / static_cast<double>(opts.nx + 1);

    const double t_end = problem.has_pole()
                             ? pole_trimmed_dt(T, opts.nt) * static_cast<double>(opts.nt)
                             : T;
    return make_grid(t_end, T, x_min, x_max, opts.nt, opts.nx);
}

}  // namespace stoplab
