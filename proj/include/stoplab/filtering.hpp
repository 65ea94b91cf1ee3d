#pragma once

// Posterior drifts for dX = h(Y) dt + dW with an unknown Y ~ prior.
// Observing X up to time t, the best estimate of h(Y) is
//   f(t,x) = int h(y) exp(x y - y^2 t/2) nu(dy) / int exp(x y - y^2 t/2) nu(dy),
// and X is a diffusion with drift f(t, X_t) in its own filtration.

#include "stoplab/expr.hpp"
#include "stoplab/field.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace stoplab {

struct TwoPointPrior {
    double p = 0.5;  // mass at l
    double l = -1.0;
    double r = 1.0;
    bool operator==(const TwoPointPrior&) const = default;
};

struct GaussianPrior {
    double mean = 0.0;
    double var = 1.0;
    bool operator==(const GaussianPrior&) const = default;
};

struct Atom {
    double weight = 0.0;
    double location = 0.0;
    bool operator==(const Atom&) const = default;
};

struct DiscretePrior {
    std::vector<Atom> atoms;
    bool operator==(const DiscretePrior&) const = default;
};

/// Quadrature representation of a density: nodes with weights summing to one.
struct DensityPrior {
    std::vector<Atom> nodes;
    bool operator==(const DensityPrior&) const = default;
};

struct Prior {
    std::variant<TwoPointPrior, GaussianPrior, DiscretePrior, DensityPrior> kind;
    /// Link h applied to the unknown; empty means identity.
    std::function<double(double)> link;

    double apply_link(double y) const { return link ? link(y) : y; }
};

/// Throws std::invalid_argument unless the prior parameters are admissible.
void validate_prior(const Prior& prior);

/// Bounds of h over the support of the prior (infinite for unbounded support).
std::pair<double, double> link_range(const Prior& prior);

/// Warnings about priors whose quadrature may be inaccurate (heavy tails).
std::vector<std::string> prior_warnings(const Prior& prior);

/// Posterior mean of h(Y) given X_t = x, computed with log-sum-exp weights.
/// Throws NumericalError if the normalising constant degenerates.
double posterior_drift(const Prior& prior, double t, double x);

/// Closed form for nu = p delta_l + (1-p) delta_r.
double two_point_drift(double p, double l, double r, double t, double x);
/// Time derivative of two_point_drift; its sign is -sign(l + r).
double two_point_drift_dt(double p, double l, double r, double t, double x);
/// Closed form for a N(m, var) prior and identity link: (m + var x) / (1 + var t).
double gaussian_drift(double m, double var, double t, double x);

/// Gauss-Hermite rule for the weight exp(-z^2): nodes and weights.
std::vector<std::pair<double, double>> gauss_hermite(std::size_t n);

// ---------------------------------------------------------------------------
// Drift families

struct BmTimeDrift {
    std::shared_ptr<const Expr> mu;  // function of t
};
struct GbmDrift {
    std::shared_ptr<const Expr> gamma;  // function of t; drift x * gamma(t)
};
struct BridgeDrift {
    double pin = 0.0;  // pinned at `pin` at the horizon
};
struct OuTimeMeanDrift {
    double theta = 1.0;
    std::shared_ptr<const Expr> mean;  // function of t
};
struct FilteringDrift {
    Prior prior;
};

using DriftFamily = std::variant<BmTimeDrift, GbmDrift, BridgeDrift, OuTimeMeanDrift, FilteringDrift>;

std::string_view family_name(const DriftFamily& family) noexcept;

/// Realise a drift family as a field on [0, horizon]. Bridge drifts throw
/// EvalError for t >= horizon and are flagged with a pole at the horizon.
ScalarField make_drift(const DriftFamily& family, double horizon);

}  // namespace stoplab
