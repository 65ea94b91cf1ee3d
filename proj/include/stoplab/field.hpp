#pragma once

#include "stoplab/expr.hpp"

#include <functional>
#include <memory>
#include <string>

namespace stoplab {

/// A real function of (t, x) with optional declared partial derivatives.
///
/// Evaluators must be pure: the solver, the simulator and the checks call
/// them concurrently and in arbitrary order.
struct ScalarField {
    using Fn = std::function<double(double t, double x)>;

    Fn fn;
    Fn dt;   // declared partials; empty means "use central differences"
    Fn dx;
    Fn dxx;
    std::string regularity_note;
    bool time_dependent = true;
    /// The field is singular at t = horizon (e.g. a bridge drift).
    bool pole_at_horizon = false;
    /// Absolute evaluation noise, for fields assembled from finite differences.
    double eval_noise = 0.0;

    double operator()(double t, double x) const { return fn(t, x); }
    explicit operator bool() const noexcept { return static_cast<bool>(fn); }

    static ScalarField constant(double c);
    /// Field backed by an expression; partials are left undeclared.
    static ScalarField from_expr(std::shared_ptr<const Expr> e, double horizon);
    static ScalarField from_expr(const Expr& e, double horizon);
};

/// Finite-difference step used when a partial is not declared.
inline double fd_step(double at) { return 1e-5 * (1.0 + (at < 0 ? -at : at)); }

/// Partials honour the declared evaluators and otherwise fall back to
/// central differences with step fd_step(). The time difference becomes
/// one-sided when a central stencil would leave [t_lo, t_hi].
double partial_t(const ScalarField& f, double t, double x, double t_lo, double t_hi);
double partial_x(const ScalarField& f, double t, double x);
double partial_xx(const ScalarField& f, double t, double x);

}  // namespace stoplab
