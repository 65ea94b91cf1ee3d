#pragma once

#include <cstddef>
#include <vector>

namespace stoplab {

struct ProblemSpec;

/// Uniform tensor grid on [0, t_end] x [x_min, x_max].
struct Grid {
    std::vector<double> t;
    std::vector<double> x;
    double dt = 0.0;
    double dx = 0.0;
    /// Problem horizon T. Equals t.back() unless the grid stops short of a pole.
    double horizon = 0.0;

    std::size_t nt() const noexcept { return t.empty() ? 0 : t.size() - 1; }
    std::size_t nx() const noexcept { return x.empty() ? 0 : x.size() - 1; }
    double t_end() const { return t.back(); }
    double x_min() const { return x.front(); }
    double x_max() const { return x.back(); }
};

/// Nodes t_k = k*dt, x_j = x_min + j*dx. Requires nt, nx >= 2 and x_min < x_max.
Grid make_grid(double t_end, double horizon, double x_min, double x_max, std::size_t nt,
               std::size_t nx);

/// Grid spacing that stops the time axis one step short of a pole at T:
/// dt = T/(nt+1) so that t_end = T - dt.
double pole_trimmed_dt(double horizon, std::size_t nt);

struct GridOptions {
    std::size_t nt = 400;
    std::size_t nx = 400;
    double x_ref = 0.0;
    /// Half-width of the state range in multiples of the scale max(sigma)*sqrt(T).
    double x_pad = 5.0;
};

/// Grid for solving `problem` around x_ref. Problems whose drift has a pole at
/// the horizon get t_end = T - eps_pole with eps_pole = max(dt, 1e-6 T).
Grid build_grid(const ProblemSpec& problem, const GridOptions& opts);

}  // namespace stoplab
