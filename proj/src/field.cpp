#include "stoplab/field.hpp"

#include <utility>

namespace stoplab {

ScalarField ScalarField::constant(double c) {
    ScalarField f;
    f.fn = [c](double, double) { return c; };
    f.dt = [](double, double) { return 0.0; };
    f.dx = [](double, double) { return 0.0; };
    f.dxx = [](double, double) { return 0.0; };
    f.time_dependent = false;
    f.regularity_note = "constant";
    return f;
}

ScalarField ScalarField::from_expr(std::shared_ptr<const Expr> e, double horizon) {
    ScalarField f;
    f.time_dependent = e->depends_on(Var::t);
    f.regularity_note = "expression: " + e->print();
    f.fn = [e = std::move(e), horizon](double t, double x) { return e->eval(t, x, horizon); };
    return f;
}

ScalarField ScalarField::from_expr(const Expr& e, double horizon) {
    return from_expr(std::make_shared<const Expr>(e), horizon);
}

double partial_t(const ScalarField& f, double t, double x, double t_lo, double t_hi) {
    if (f.dt) return f.dt(t, x);
    if (!f.time_dependent) return 0.0;
    const double h = fd_step(t);
    if (t - h < t_lo) return (f(t + h, x) - f(t, x)) / h;
    if (t + h > t_hi) return (f(t, x) - f(t - h, x)) / h;
    return (f(t + h, x) - f(t - h, x)) / (2.0 * h);
}

double partial_x(const ScalarField& f, double t, double x) {
    if (f.dx) return f.dx(t, x);
    const double h = fd_step(x);
    return (f(t, x + h) - f(t, x - h)) / (2.0 * h);
}

double partial_xx(const ScalarField& f, double t, double x) {
    if (f.dxx) return f.dxx(t, x);
    const double h = fd_step(x);
    return (f(t, x + h) - 2.0 * f(t, x) + f(t, x - h)) / (h * h);
}

}  // namespace stoplab
