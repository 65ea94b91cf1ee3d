#include "stoplab/filtering.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace stoplab;

namespace {

// Posterior mean of Y given X_t = x for a finite prior, by Bayes' rule directly.
double bayes_mean(const std::vector<Atom>& atoms, double t, double x) {
    double num = 0.0, den = 0.0;
    for (const Atom& a : atoms) {
        const double w = a.weight * std::exp(a.location * x - 0.5 * a.location * a.location * t);
        num += w * a.location;
        den += w;
    }
    return num / den;
}

// Golub-Welsch: eigen-decomposition of the Hermite Jacobi matrix.
std::vector<std::pair<double, double>> golub_welsch(std::size_t n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(0.5 * double(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        out.emplace_back(es.eigenvalues()(i), std::sqrt(std::numbers::pi) * v0 * v0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(TwoPoint, MatchesBayesRule) {
    for (double t : {0.0, 0.3, 2.0})
        for (double x : {-4.0, -0.5, 0.0, 1.0, 6.0})
            for (double p : {0.1, 0.5, 0.9}) {
                const std::vector<Atom> atoms{{p, -1.0}, {1.0 - p, 2.0}};
                EXPECT_NEAR(two_point_drift(p, -1.0, 2.0, t, x), bayes_mean(atoms, t, x), 1e-12);
            }
}

TEST(TwoPoint, StableInTheTails) {
    EXPECT_NEAR(two_point_drift(0.5, -1.0, 2.0, 0.0, 800.0), 2.0, 1e-12);
    EXPECT_NEAR(two_point_drift(0.5, -1.0, 2.0, 0.0, -800.0), -1.0, 1e-12);
    EXPECT_TRUE(std::isfinite(two_point_drift_dt(0.5, -1.0, 2.0, 0.0, 800.0)));
}

TEST(TwoPoint, SignLawOnRandomParameters) {
    for (int i = 0; i < 200; ++i) {
        const double l = -3.0 + 0.029 * i;
        const double r = l + 0.1 + 0.013 * (i % 37);
        const double p = 0.05 + 0.0045 * i;
        for (double t = 0.0; t <= 1.0; t += 0.125)
            for (double x = -4.0; x <= 4.0; x += 0.5) {
                const double d = two_point_drift_dt(p, l, r, t, x);
                if (l + r > 0.0) {
                    EXPECT_LE(d, 0.0);
                } else if (l + r < 0.0) {
                    EXPECT_GE(d, 0.0);
                }
            }
    }
}

TEST(Gaussian, ClosedFormAgreesWithQuadrature) {
    Prior prior{GaussianPrior{0.3, 0.8}, {}};
    for (double t : {0.0, 0.5, 1.0})
        for (double x : {-2.0, 0.0, 1.5})
            EXPECT_NEAR(posterior_drift(prior, t, x), (0.3 + 0.8 * x) / (1.0 + 0.8 * t), 1e-9);
    EXPECT_DOUBLE_EQ(gaussian_drift(0.3, 0.8, 0.5, 1.5), (0.3 + 0.8 * 1.5) / 1.4);
}

TEST(Discrete, MatchesBayesRule) {
    const std::vector<Atom> atoms{{0.2, -1.5}, {0.5, 0.25}, {0.3, 1.0}};
    Prior prior{DiscretePrior{atoms}, {}};
    for (double t : {0.0, 0.7})
        for (double x : {-3.0, 0.0, 2.0}) EXPECT_NEAR(posterior_drift(prior, t, x), bayes_mean(atoms, t, x), 1e-12);
    Prior two{TwoPointPrior{0.4, -1.0, 1.0}, {}};
    EXPECT_NEAR(posterior_drift(two, 0.3, 0.7), two_point_drift(0.4, -1.0, 1.0, 0.3, 0.7), 1e-12);
}

TEST(Discrete, LinkIsApplied) {
    Prior prior{TwoPointPrior{0.5, -1.0, 1.0}, [](double y) { return 2.0 * y + 1.0; }};
    EXPECT_NEAR(posterior_drift(prior, 0.2, 0.4), 2.0 * two_point_drift(0.5, -1.0, 1.0, 0.2, 0.4) + 1.0, 1e-12);
    const auto [lo, hi] = link_range(prior);
    EXPECT_DOUBLE_EQ(lo, -1.0);
    EXPECT_DOUBLE_EQ(hi, 3.0);
}

TEST(Discrete, InvalidPriorsRejected) {
    EXPECT_THROW(validate_prior(Prior{TwoPointPrior{1.5, -1.0, 1.0}, {}}), std::invalid_argument);
    EXPECT_THROW(validate_prior(Prior{TwoPointPrior{0.5, 1.0, -1.0}, {}}), std::invalid_argument);
    EXPECT_THROW(validate_prior(Prior{GaussianPrior{0.0, -1.0}, {}}), std::invalid_argument);
    EXPECT_THROW(validate_prior(Prior{DiscretePrior{{{0.5, 0.0}, {0.2, 1.0}}}, {}}), std::invalid_argument);
}

TEST(GaussHermite, AgreesWithGolubWelsch) {
    for (std::size_t n : {1, 2, 5, 20, 64}) {
        auto gh = gauss_hermite(n);
        std::sort(gh.begin(), gh.end());
        const auto gw = golub_welsch(n);
        ASSERT_EQ(gh.size(), n);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(gh[i].first, gw[i].first, 1e-10 * (1.0 + std::fabs(gw[i].first))) << n;
            EXPECT_NEAR(gh[i].second, gw[i].second, 1e-10 * std::sqrt(std::numbers::pi)) << n;
        }
    }
}

TEST(GaussHermite, IntegratesPolynomialsExactly) {
    const auto gh = gauss_hermite(10);
    // int z^{2k} e^{-z^2} dz = Gamma(k + 1/2)
    for (int k = 0; k < 10; ++k) {
        double s = 0.0;
        for (auto [z, w] : gh) s += w * std::pow(z, 2 * k);
        EXPECT_NEAR(s, std::tgamma(k + 0.5), 1e-10 * std::tgamma(k + 0.5)) << k;
    }
}

TEST(DriftFamilies, Realisations) {
    const ScalarField bridge = make_drift(BridgeDrift{0.5}, 2.0);
    EXPECT_TRUE(bridge.pole_at_horizon);
    EXPECT_DOUBLE_EQ(bridge(1.0, 1.5), (0.5 - 1.5) / 1.0);
    EXPECT_ANY_THROW(bridge(2.0, 0.0));
    const ScalarField ou = make_drift(OuTimeMeanDrift{2.0, std::make_shared<const Expr>(parse("1 - t"))}, 1.0);
    EXPECT_DOUBLE_EQ(ou(0.25, 1.0), 2.0 * (0.75 - 1.0));
    const ScalarField gbm = make_drift(GbmDrift{std::make_shared<const Expr>(parse("1 - t"))}, 2.0);
    EXPECT_DOUBLE_EQ(gbm(0.5, 3.0), 1.5);
}

namespace {

// Posterior mean for a N(m, var) prior by trapezoidal quadrature on 10^4 nodes.
double gaussian_quadrature(double m, double var, double t, double x) {
    const double sd = std::sqrt(var);
    const std::size_t n = 10000;
    const double lo = m - 20.0 * sd, hi = m + 20.0 * sd, h = (hi - lo) / double(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double y = lo + h * double(i);
        const double w = (i == 0 || i == n ? 0.5 : 1.0) *
                         std::exp(y * x - 0.5 * y * y * t - 0.5 * (y - m) * (y - m) / var);
        num += w * y;
        den += w;
    }
    return num / den;
}

}  // namespace

TEST(Filtering, ReferenceValues) {
    EXPECT_DOUBLE_EQ(two_point_drift(0.5, -1.0, 1.0, 0.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(two_point_drift(0.5, 0.0, 1.0, 0.0, 0.0), 0.5);
    EXPECT_LT(std::fabs(two_point_drift(0.5, -1.0, 2.0, 1.0, 1e3) - 2.0), 1e-6);
    Prior atom{DiscretePrior{{{1.0, 0.7}}}, {}};
    for (double t : {0.0, 0.5})
        for (double x : {-3.0, 4.0}) EXPECT_DOUBLE_EQ(posterior_drift(atom, t, x), 0.7);
}

TEST(Filtering, GaussianAgainstDirectQuadrature) {
    EXPECT_NEAR(gaussian_quadrature(0.0, 1.0, 1.0, 1.0), 0.5, 1e-8);
    Prior prior{GaussianPrior{0.0, 1.0}, {}};
    EXPECT_NEAR(posterior_drift(prior, 1.0, 1.0), 0.5, 1e-8);
    EXPECT_NEAR(gaussian_drift(0.0, 1.0, 1.0, 1.0), 0.5, 1e-15);
    for (double t : {0.0, 0.3, 2.0})
        for (double x : {-2.0, 0.4, 3.0})
            EXPECT_NEAR(gaussian_drift(0.2, 0.6, t, x), gaussian_quadrature(0.2, 0.6, t, x), 1e-8);
}

TEST(Filtering, GaussianLimits) {
    for (double x : {-2.0, 0.0, 1.5}) EXPECT_DOUBLE_EQ(gaussian_drift(0.3, 2.0, 0.0, x), 0.3 + 2.0 * x);
    for (double t : {0.0, 1.0, 10.0, 1e3})
        for (double x : {-5.0, 0.0, 5.0})
            EXPECT_LE(std::fabs(gaussian_drift(-0.4, 1.5, t, x)), 0.4 + 1.5 * std::fabs(x) + 1e-15);
}

TEST(Filtering, PaperSignLawExample) {
    for (double t = 0.0; t <= 1.0; t += 1.0 / 49.0)
        for (double x = -5.0; x <= 5.0; x += 10.0 / 49.0) EXPECT_LT(two_point_drift_dt(0.5, -1.0, 2.0, t, x), 0.0);
}

TEST(Filtering, FamilyReferenceValues) {
    EXPECT_DOUBLE_EQ(make_drift(BridgeDrift{0.0}, 1.0)(0.5, 1.0), -2.0);
    EXPECT_DOUBLE_EQ(make_drift(GbmDrift{std::make_shared<const Expr>(parse("1 - t"))}, 1.0)(0.5, 2.0), 1.0);
    const ScalarField ou = make_drift(OuTimeMeanDrift{1.0, std::make_shared<const Expr>(parse("0"))}, 1.0);
    for (double t : {0.0, 0.5, 1.0}) EXPECT_DOUBLE_EQ(ou(t, 3.0), -3.0);
}
