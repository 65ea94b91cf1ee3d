#pragma once

#include "stoplab/grid.hpp"
#include "stoplab/problem.hpp"
#include "stoplab/report.hpp"
#include "stoplab/table.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace stoplab {

/// Treatment of the two spatial edge nodes.
enum class EdgeRule {
    /// v = obstacle at x_min and x_max.
    obstacle,
    /// Where the drift points into the domain the edge node follows the
    /// upwind transport equation -v_t = mu v_x + f (no boundary data needed);
    /// elsewhere v = obstacle.
    outflow,
};
std::string_view to_string(EdgeRule e) noexcept;

struct SolverOptions {
    /// 1 = fully implicit, 0.5 = Crank-Nicolson.
    double theta = 0.5;
    /// Fully implicit steps taken first (Rannacher start-up).
    std::size_t implicit_startup_steps = 2;
    double psor_tol = 1e-8;
    std::size_t max_sweeps = 10000;
    EdgeRule edge = EdgeRule::obstacle;
};

struct SchemeMeta {
    double theta = 0.5;
    /// step_theta[k] is the weight used for the step t_{k+1} -> t_k.
    std::vector<double> step_theta;
    std::vector<std::size_t> sweeps;
    std::vector<double> residual;
    std::vector<double> omega;
    double tol_contact = 0.0;
    std::size_t upwind_nodes = 0;
    EdgeRule edge = EdgeRule::obstacle;
};

/// Solution of the discrete obstacle problem on a grid.
struct ValueSurface {
    Grid grid;
    Table<double> v;
    Table<double> obstacle;
    Table<std::uint8_t> exercise;  // 1 where v - obstacle <= tol_contact
    SchemeMeta meta;
    std::shared_ptr<const ProblemSpec> problem;
    Orientation orientation = Orientation::lower;
};

/// Per-node stopping boundary. Entries are finite states, or -inf / +inf for
/// sections with no stopping / only stopping (lower orientation; reversed for
/// upper orientation, so that negation maps one convention onto the other).
struct Boundary {
    std::vector<double> t;
    std::vector<double> b;
    double dx = 0.0;
    Orientation orientation = Orientation::lower;
    /// Time nodes whose x-section is not a single stop/continue split.
    std::vector<std::size_t> non_separated;
    std::vector<std::string> warnings;
};

/// Coefficients of mu d/dx + sigma^2/2 d2/dx2 at one node: central
/// differences while the cell Peclet number |mu| dx / (sigma^2/2) <= 2,
/// first-order upwind otherwise.
struct StencilRow {
    double lower = 0.0;
    double diag = 0.0;
    double upper = 0.0;
    bool upwind = false;
};
StencilRow generator_row(double mu, double sigma, double dx);

/// Tridiagonal system (I - theta dt L_k) v_k = rhs for the step t_{k+1} -> t_k,
/// one row per grid column. Edge rows are identity rows (v = obstacle) unless
/// the outflow rule applies there.
struct StepSystem {
    std::vector<double> lower, diag, upper, rhs;
    std::vector<double> obstacle;  // obstacle at t_k
    bool outflow_lo = false;
    bool outflow_hi = false;
    std::size_t upwind_nodes = 0;
};
StepSystem assemble_step(const ProblemSpec& problem, const Grid& grid, std::size_t k, double theta,
                         std::span<const double> v_next, EdgeRule edge = EdgeRule::obstacle);

/// Backward theta-scheme with projected SOR for the obstacle at each step.
/// Throws SolverError on non-convergence or non-finite coefficients.
ValueSurface solve_backward(const ProblemSpec& problem, const Grid& grid,
                            const SolverOptions& opts = {});

/// Express a surface in reflected coordinates x -> -x (and swap orientation).
ValueSurface mirror_surface(const ValueSurface& s);

/// Read the boundary off the exercise mask, one grid cell resolution. Edge
/// columns carry Dirichlet data and are ignored.
Boundary extract_boundary(const ValueSurface& s);

/// Boundary of the reflected problem: b -> -b, orientation swapped.
Boundary negate_boundary(const Boundary& b);

/// A posteriori check of min(v - g, -(d/dt + L) v - f) = 0 on the grid.
CheckReport residual_complementarity(const ValueSurface& s);

}  // namespace stoplab
