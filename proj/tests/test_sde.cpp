#include "stoplab/filtering.hpp"
#include "stoplab/sde.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace stoplab;
using stoplab::testing::problem;

TEST(Simulate, DeterministicDriftIsIntegratedExactly) {
    const PathBundle b = simulate_paths(problem("1", "0", "x"), 0.0, 2.0, 3, 8, 1);
    EXPECT_DOUBLE_EQ(b.dt, 0.125);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k <= 8; ++k) EXPECT_NEAR(b.states(i, k), 2.0 + 0.125 * double(k), 1e-14);
}

TEST(Simulate, BrownianTerminalMoments) {
    const std::size_t n = 40000;
    const PathBundle b = simulate_paths(problem("0.5", "2", "x"), 0.0, 1.0, n, 16, 5);
    double m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = b.states(i, 16);
        m += y;
        m2 += y * y;
    }
    m /= double(n);
    const double var = m2 / double(n) - m * m;
    EXPECT_NEAR(m, 1.5, 5.0 * 2.0 / std::sqrt(double(n)));
    EXPECT_NEAR(var, 4.0, 5.0 * 4.0 * std::sqrt(2.0 / double(n)));
}

TEST(Simulate, IndependentOfThreadCount) {
    const ProblemSpec p = problem("0.5 - x", "1 + 0.1 * abs(x)", "x");
    const PathBundle one = simulate_paths(p, 0.1, 0.3, 257, 50, 42, {.threads = 1});
    const PathBundle many = simulate_paths(p, 0.1, 0.3, 257, 50, 42, {.threads = 7});
    for (std::size_t i = 0; i < 257; ++i)
        for (std::size_t k = 0; k <= 50; ++k) ASSERT_EQ(one.states(i, k), many.states(i, k));
    const PathBundle other = simulate_paths(p, 0.1, 0.3, 257, 50, 43);
    EXPECT_NE(one.states(0, 50), other.states(0, 50));
}

TEST(Simulate, PoleShortensTheLastStep) {
    ProblemSpec p = problem("0", "1", "x");
    p.drift = make_drift(BridgeDrift{0.0}, 1.0);
    const PathBundle b = simulate_paths(p, 0.5, 1.0, 100, 9, 3);
    EXPECT_DOUBLE_EQ(b.dt, 0.05);
    EXPECT_NEAR(b.time(9), 0.95, 1e-15);
    EXPECT_EQ(b.poisoned_count, 0u);
}

TEST(Simulate, HalfLineStaysPositive) {
    ProblemSpec p = problem("-3 * x", "2 * x", "x");
    p.state_space = StateSpace::positive_half_line;
    const PathBundle b = simulate_paths(p, 0.0, 1.0, 500, 50, 8);
    EXPECT_EQ(b.scheme, Scheme::log_euler);
    for (std::size_t i = 0; i < 500; ++i)
        for (std::size_t k = 0; k <= 50; ++k) ASSERT_GT(b.states(i, k), 0.0);
}

TEST(Simulate, NonFinitePathsArePoisoned) {
    const PathBundle b = simulate_paths(problem("1 / x", "0", "x"), 0.0, 0.0, 4, 5, 1);
    EXPECT_EQ(b.poisoned_count, 4u);
    EXPECT_TRUE(std::isnan(b.states(0, 5)));
}

TEST(Region, ExitTime) {
    const Region pos{[](double, double x) { return x > 0.0; }, "x > 0"};
    const std::vector<double> path{1.0, 0.5, 0.2, -0.1, 0.4};
    EXPECT_EQ(region_exit_time(path, pos, 0.0, 0.1), 3u);
    const std::vector<double> inside{1.0, 2.0};
    EXPECT_EQ(region_exit_time(inside, pos, 0.0, 0.1), 1u);
    const std::vector<double> nan{1.0, NAN, 1.0};
    EXPECT_EQ(region_exit_time(nan, pos, 0.0, 0.1), 1u);
    const Region m = Region::negative_drift(stoplab::testing::field("-x"));
    EXPECT_TRUE(m.contains(0.0, 1.0));
    EXPECT_FALSE(m.contains(0.0, 0.0));
}

TEST(Coupling, SharesIncrementsAndStartsTogether) {
    const ProblemSpec p = problem("1 - t", "1", "x");
    const CoupledBundle cb = simulate_coupled(p, 0.5, 0.25, 1.0, Region::everywhere(), 300, 64, 9);
    EXPECT_TRUE(cb.shared_increments);
    EXPECT_EQ(cb.late.dt, cb.early.dt);
    // A time-only drift shifts the whole path: X^{t} - X^{u} is deterministic and <= 0.
    for (std::size_t i = 0; i < 300; ++i)
        for (std::size_t k = 0; k <= 64; ++k) {
            const double d = cb.late.states(i, k) - cb.early.states(i, k);
            EXPECT_NEAR(d, cb.late.states(0, k) - cb.early.states(0, k), 1e-12);
            EXPECT_LE(d, 0.0);
        }
    EXPECT_EQ(comparison_statistic(cb), 0.0);
    const CheckReport r = comparison_report(cb, 1.0);
    EXPECT_TRUE(r.passed());
}

TEST(Coupling, DetectsAReversedOrdering) {
    // Increasing drift in t breaks the comparison; the statistic sees it.
    const ProblemSpec p = problem("t", "1", "x");
    const CoupledBundle cb = simulate_coupled(p, 0.5, 0.0, 0.0, Region::everywhere(), 200, 100, 4);
    EXPECT_GT(comparison_statistic(cb), 0.2);
    EXPECT_TRUE(comparison_report(cb, 1.0).failed());
}

TEST(PathsCsv, Layout) {
    const PathBundle b = simulate_paths(problem("1", "0", "x"), 0.0, 0.0, 2, 2, 1);
    std::ostringstream out;
    write_paths_csv(out, b);
    const std::string s = out.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "path,step,time,state");
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 2 * 3);
}

TEST(Simulate, StandardBrownianStatistics) {
    const std::size_t n = 100000;
    const PathBundle b = simulate_paths(problem("0", "1", "x"), 0.0, 0.0, n, 4, 12);
    double m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m += b.states(i, 4);
        m2 += b.states(i, 4) * b.states(i, 4);
    }
    m /= double(n);
    const double var = m2 / double(n) - m * m;
    EXPECT_LE(std::fabs(m), 3.0 / std::sqrt(double(n)));
    EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Simulate, BridgeTerminalMarginal) {
    // Exact bridge marginal at T - eps from (0, x): mean x eps / T, variance eps (T - eps) / T.
    ProblemSpec p = problem("0", "1", "x");
    p.drift = make_drift(BridgeDrift{0.0}, 1.0);
    const std::size_t n = 20000;
    const double x = 1.0, eps = 1e-3;
    const PathBundle b = simulate_paths(p, 0.0, x, n, 999, 21);
    EXPECT_NEAR(b.time(999), 1.0 - eps, 1e-12);
    double m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m += b.states(i, 999);
        m2 += b.states(i, 999) * b.states(i, 999);
    }
    m /= double(n);
    const double sd = std::sqrt(m2 / double(n) - m * m);
    const double exact_sd = std::sqrt(eps * (1.0 - eps));
    EXPECT_NEAR(m, x * eps, 3.0 * exact_sd / std::sqrt(double(n)));
    // Euler's variance obeys V_{k+1} = (1 - dt / (T - t_k))^2 V_k + dt exactly; the
    // last steps are as long as eps, so it sits above the bridge variance.
    double v = 0.0;
    for (std::size_t k = 0; k < 999; ++k) {
        const double shrink = 1.0 - b.dt / (1.0 - b.time(k));
        v = shrink * shrink * v + b.dt;
    }
    EXPECT_NEAR(sd, std::sqrt(v), 0.05 * std::sqrt(v));
    EXPECT_GT(sd, 0.75 * exact_sd);
    EXPECT_LT(sd, 1.5 * exact_sd);
}

TEST(Coupling, IdentityCoupling) {
    ProblemSpec p = problem("0", "1", "x");
    p.drift = make_drift(BridgeDrift{0.0}, 1.0);
    const CoupledBundle cb = simulate_coupled(p, 0.5, 0.5, 1.0, Region::negative_drift(p.drift), 100, 63, 2);
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t k = 0; k <= 63; ++k) ASSERT_EQ(cb.late.states(i, k), cb.early.states(i, k));
    EXPECT_EQ(comparison_statistic(cb), 0.0);
}

TEST(Coupling, TimeOnlyDriftGapIsExact) {
    const double t = 0.5, u = 0.25;
    const CoupledBundle cb = simulate_coupled(problem("1 - t", "1", "x"), t, u, 0.0, Region::everywhere(), 50, 40, 3);
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t k = 0; k <= 40; ++k) {
            const double s = double(k) * cb.late.dt;
            EXPECT_NEAR(cb.late.states(i, k) - cb.early.states(i, k), (u - t) * s, 1e-12);
        }
}

TEST(Coupling, ConstantDriftStatisticIsZero) {
    const CoupledBundle cb = simulate_coupled(problem("0.3", "1", "x"), 0.5, 0.1, 0.0, Region::everywhere(), 200, 30, 3);
    EXPECT_EQ(comparison_statistic(cb), 0.0);
    EXPECT_TRUE(comparison_report(cb, 1.0).passed());
}

TEST(Coupling, BridgeExitIsOnTheLateTrajectory) {
    ProblemSpec p = problem("0", "1", "x");
    p.drift = make_drift(BridgeDrift{0.0}, 1.0);
    const Region M = Region::negative_drift(p.drift);
    const CoupledBundle cb = simulate_coupled(p, 0.5, 0.25, 1.0, M, 300, 127, 5);
    for (std::size_t i = 0; i < 300; ++i) {
        std::vector<double> path(128);
        for (std::size_t k = 0; k <= 127; ++k) path[k] = cb.late.states(i, k);
        EXPECT_EQ(cb.region_exit[i], region_exit_time(path, M, 0.5, cb.late.dt));
    }
    const CoupledBundle outside = simulate_coupled(p, 0.5, 0.25, -1.0, M, 10, 20, 5);
    for (std::size_t e : outside.region_exit) EXPECT_EQ(e, 0u);
}

TEST(Region, ReferenceExitTimes) {
    std::vector<double> path(21);
    for (std::size_t k = 0; k < path.size(); ++k) path[k] = 0.7 - 0.1 * double(k);
    EXPECT_EQ(region_exit_time(path, Region::everywhere(), 0.0, 0.05), 20u);
    const Region pos{[](double, double x) { return x > 0.0; }, "x > 0"};
    EXPECT_EQ(region_exit_time(path, pos, 0.0, 0.05), 7u);
    path[0] = -1.0;
    EXPECT_EQ(region_exit_time(path, pos, 0.0, 0.05), 0u);
}
