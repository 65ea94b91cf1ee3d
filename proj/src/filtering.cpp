#include "stoplab/filtering.hpp"

#include "stoplab/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace stoplab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void check_two_point(double p, double l, double r) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("two-point prior needs p in (0,1)");
    if (!(l < r) || !std::isfinite(l) || !std::isfinite(r))
        throw std::invalid_argument("two-point prior needs finite l < r");
}

void check_atoms(const std::vector<Atom>& atoms, const char* what) {
    if (atoms.empty()) throw std::invalid_argument(std::string(what) + " prior has no atoms");
    double total = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.location))
            throw std::invalid_argument(std::string(what) + " prior has a negative weight or bad location");
        total += a.weight;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument(std::string(what) + " prior weights must sum to 1");
}

const std::vector<Atom>* atoms_of(const Prior& prior) {
    if (const auto* d = std::get_if<DiscretePrior>(&prior.kind)) return &d->atoms;
    if (const auto* d = std::get_if<DensityPrior>(&prior.kind)) return &d->nodes;
    return nullptr;
}

std::vector<Atom> two_point_atoms(const TwoPointPrior& tp) {
    return {{tp.p, tp.l}, {1.0 - tp.p, tp.r}};
}

double atoms_posterior(const std::vector<Atom>& atoms, const Prior& prior, double t, double x) {
    double top = -inf;
    for (const Atom& a : atoms) {
        if (a.weight <= 0.0) continue;
        top = std::max(top, std::log(a.weight) + x * a.location - 0.5 * a.location * a.location * t);
    }
    double num = 0.0;
    double den = 0.0;
    double lo = inf;
    double hi = -inf;
    for (const Atom& a : atoms) {
        if (a.weight <= 0.0) continue;
        const double hy = prior.apply_link(a.location);
        const double w = std::exp(std::log(a.weight) + x * a.location -
                                  0.5 * a.location * a.location * t - top);
        num += hy * w;
        den += w;
        lo = std::min(lo, hy);
        hi = std::max(hi, hy);
    }
    const double value = num / den;
    if (!std::isfinite(top) || !(den > 0.0) || !std::isfinite(value)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "posterior normalisation degenerate at (t=%.17g, x=%.17g)", t, x);
        throw NumericalError(t, x, buf);
    }
    return std::clamp(value, lo, hi);
}

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// s(1-s) for s = logistic(z), without cancellation.
double logistic_variance(double z) {
    const double e = std::exp(-std::fabs(z));
    return e / ((1.0 + e) * (1.0 + e));
}

double two_point_logit(double p, double l, double r, double t, double x) {
    return std::log((1.0 - p) / p) + (r - l) * x - 0.5 * (r * r - l * l) * t;
}

}  // namespace

void validate_prior(const Prior& prior) {
    std::visit(
        [](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, TwoPointPrior>) {
                check_two_point(k.p, k.l, k.r);
            } else if constexpr (std::is_same_v<K, GaussianPrior>) {
                if (!(k.var > 0.0) || !std::isfinite(k.mean))
                    throw std::invalid_argument("gaussian prior needs var > 0");
            } else if constexpr (std::is_same_v<K, DiscretePrior>) {
                check_atoms(k.atoms, "discrete");
            } else {
                check_atoms(k.nodes, "density");
            }
        },
        prior.kind);
}

std::pair<double, double> link_range(const Prior& prior) {
    std::vector<Atom> owned;
    const std::vector<Atom>* atoms = atoms_of(prior);
    if (const auto* tp = std::get_if<TwoPointPrior>(&prior.kind)) {
        owned = two_point_atoms(*tp);
        atoms = &owned;
    }
    if (!atoms) return {-inf, inf};
    double lo = inf;
    double hi = -inf;
    for (const Atom& a : *atoms) {
        if (a.weight <= 0.0) continue;
        lo = std::min(lo, prior.apply_link(a.location));
        hi = std::max(hi, prior.apply_link(a.location));
    }
    return {lo, hi};
}

std::vector<std::string> prior_warnings(const Prior& prior) {
    std::vector<std::string> out;
    const std::vector<Atom>* atoms = atoms_of(prior);
    if (!atoms) return out;
    double first_moment = 0.0;
    double widest = 0.0;
    for (const Atom& a : *atoms) {
        first_moment += a.weight * std::fabs(prior.apply_link(a.location));
        if (a.weight > 0.0) widest = std::max(widest, std::fabs(a.location));
    }
    if (widest > 50.0 * (1.0 + first_moment))
        out.emplace_back("prior has far atoms relative to its first moment; posterior quadrature may be inaccurate");
    return out;
}

double posterior_drift(const Prior& prior, double t, double x) {
    if (t < 0.0) throw std::invalid_argument("posterior_drift needs t >= 0");
    if (const auto* tp = std::get_if<TwoPointPrior>(&prior.kind)) {
        if (!prior.link) return two_point_drift(tp->p, tp->l, tp->r, t, x);
        return atoms_posterior(two_point_atoms(*tp), prior, t, x);
    }
    if (const auto* gp = std::get_if<GaussianPrior>(&prior.kind)) {
        if (!prior.link) return gaussian_drift(gp->mean, gp->var, t, x);
        // The posterior of Y is again Gaussian.
        const double m = gaussian_drift(gp->mean, gp->var, t, x);
        const double v = gp->var / (1.0 + gp->var * t);
        static const auto rule = gauss_hermite(64);
        double acc = 0.0;
        for (const auto& [z, w] : rule) acc += w * prior.link(m + std::sqrt(2.0 * v) * z);
        const double value = acc / std::sqrt(std::numbers::pi);
        if (!std::isfinite(value)) throw NumericalError(t, x, "gaussian posterior quadrature failed");
        return value;
    }
    return atoms_posterior(*atoms_of(prior), prior, t, x);
}

double two_point_drift(double p, double l, double r, double t, double x) {
    check_two_point(p, l, r);
    return l + (r - l) * logistic(two_point_logit(p, l, r, t, x));
}

double two_point_drift_dt(double p, double l, double r, double t, double x) {
    check_two_point(p, l, r);
    const double z = two_point_logit(p, l, r, t, x);
    return -0.5 * (r - l) * (r - l) * (r + l) * logistic_variance(z);
}

double gaussian_drift(double m, double var, double t, double x) {
    if (!(var > 0.0)) throw std::invalid_argument("gaussian prior needs var > 0");
    if (t < 0.0) throw std::invalid_argument("gaussian_drift needs t >= 0");
    return (m + var * x) / (1.0 + var * t);
}

std::vector<std::pair<double, double>> gauss_hermite(std::size_t n) {
    // Newton iteration on the orthonormal Hermite recurrence.
    std::vector<std::pair<double, double>> out(n);
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    const std::size_t m = (n + 1) / 2;
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double nd = static_cast<double>(n);
        if (i == 0) {
            z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(nd, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * out[0].first;
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * out[1].first;
        } else {
            z = 2.0 * z - out[i - 2].first;
        }
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4;
            double p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double jd = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * nd) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-15 * std::max(1.0, std::fabs(z))) break;
        }
        const double w = 2.0 / (pp * pp);
        out[i] = {z, w};
        out[n - 1 - i] = {-z, w};
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string_view family_name(const DriftFamily& family) noexcept {
    switch (family.index()) {
    case 0: return "bm_time_drift";
    case 1: return "gbm";
    case 2: return "brownian_bridge";
    case 3: return "ou_time_mean";
    default: return "filtering";
    }
}

namespace {

void require_time_only(const std::shared_ptr<const Expr>& e, const char* what) {
    if (!e) throw std::invalid_argument(std::string(what) + " expression missing");
    if (e->depends_on(Var::x)) throw std::invalid_argument(std::string(what) + " must be a function of t only");
}

}  // namespace

ScalarField make_drift(const DriftFamily& family, double horizon) {
    ScalarField f;
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, BmTimeDrift>) {
                require_time_only(k.mu, "bm_time_drift mu");
                f.time_dependent = k.mu->depends_on(Var::t);
                f.regularity_note = "x-independent; Lipschitz constant 0";
                f.fn = [e = k.mu, horizon](double t, double) { return e->eval(t, 0.0, horizon); };
            } else if constexpr (std::is_same_v<K, GbmDrift>) {
                require_time_only(k.gamma, "gbm gamma");
                f.time_dependent = k.gamma->depends_on(Var::t);
                f.regularity_note = "linear in x; Lipschitz constant |gamma(t)|";
                f.fn = [e = k.gamma, horizon](double t, double x) { return x * e->eval(t, 0.0, horizon); };
            } else if constexpr (std::is_same_v<K, BridgeDrift>) {
                f.pole_at_horizon = true;
                f.regularity_note = "linear in x; Lipschitz constant 1/(T-t)";
                f.fn = [pin = k.pin, horizon](double t, double x) {
                    if (t >= horizon) {
                        char buf[160];
                        std::snprintf(buf, sizeof buf,
                                      "bridge drift undefined at t >= T (t=%.17g, x=%.17g)", t, x);
                        throw EvalError(t, x, 0, buf);
                    }
                    return (pin - x) / (horizon - t);
                };
                f.dx = [horizon](double t, double) { return -1.0 / (horizon - t); };
                f.dxx = [](double, double) { return 0.0; };
            } else if constexpr (std::is_same_v<K, OuTimeMeanDrift>) {
                require_time_only(k.mean, "ou_time_mean mean");
                f.time_dependent = k.mean->depends_on(Var::t);
                f.regularity_note = "linear in x; Lipschitz constant theta";
                f.fn = [e = k.mean, theta = k.theta, horizon](double t, double x) {
                    return theta * (e->eval(t, 0.0, horizon) - x);
                };
            } else {
                validate_prior(k.prior);
                f.regularity_note = "posterior mean; Lipschitz constant bounded by the prior variance";
                f.fn = [prior = k.prior](double t, double x) { return posterior_drift(prior, t, x); };
            }
        },
        family);
    return f;
}

}  // namespace stoplab
