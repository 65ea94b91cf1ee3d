#include "stoplab/lsmc.hpp"

#include "stoplab/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stoplab {

namespace {

struct StepPolicy {
    bool active = false;  // false: never exercise at this step
    double mean = 0.0;
    double scale = 1.0;
    Eigen::VectorXd coef;

    double continuation(double x) const {
        const double z = (x - mean) / scale;
        double acc = 0.0;
        double zp = 1.0;
        for (Eigen::Index d = 0; d < coef.size(); ++d) {
            acc += coef[d] * zp;
            zp *= z;
        }
        return acc;
    }
};

std::vector<std::size_t> live_paths(const PathBundle& b) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < b.n_paths; ++i)
        if (!b.poisoned[i]) out.push_back(i);
    return out;
}

// Regress y on powers of the standardised state; lowers the degree while the
// design matrix is rank deficient.
StepPolicy fit(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t degree,
               std::size_t& degree_used, bool& reduced) {
    StepPolicy p;
    const std::size_t n = xs.size();
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    p.mean = mean;
    p.scale = var > 0.0 ? std::sqrt(var) : 1.0;

    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) y[static_cast<Eigen::Index>(i)] = ys[i];

    for (std::size_t d = std::min(degree, n > 0 ? n - 1 : 0);; --d) {
        Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d + 1));
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (xs[i] - mean) / p.scale;
            double zp = 1.0;
            for (std::size_t c = 0; c <= d; ++c) {
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = zp;
                zp *= z;
            }
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        qr.setThreshold(1e-10);
        if (qr.rank() == A.cols() || d == 0) {
            p.coef = qr.solve(y);
            p.active = true;
            degree_used = std::min(degree_used, d);
            return p;
        }
        reduced = true;
    }
}

}  // namespace

LsmcResult value_lsmc(const ProblemSpec& problem, double t, double x, std::size_t n_paths,
                      std::size_t n_steps, std::size_t basis_degree, std::uint64_t seed,
                      const LsmcOptions& opts) {
    if (n_paths < 2) throw std::invalid_argument("LSMC needs at least 2 paths");
    LsmcResult res;
    res.degree_used = basis_degree;

    const PathBundle train = simulate_paths(problem, t, x, n_paths, n_steps, seed, opts.sim);
    const double dt = train.dt;
    const std::vector<std::size_t> live = live_paths(train);
    if (live.size() < 2) throw std::runtime_error("LSMC: too few finite paths");
    if (train.poisoned_count > 0)
        res.warnings.push_back(std::to_string(train.poisoned_count) + " training paths poisoned");

    // cash[i]: reward collected from the current step on, under the policy.
    std::vector<double> cash(live.size());
    for (std::size_t a = 0; a < live.size(); ++a)
        cash[a] = problem.g(train.time(n_steps), train.states(live[a], n_steps));

    std::vector<StepPolicy> policy(n_steps + 1);
    bool reduced = false;
    std::vector<double> xs(live.size()), cont(live.size());
    for (std::size_t k = n_steps; k-- > 1;) {
        const double s = train.time(k);
        for (std::size_t a = 0; a < live.size(); ++a) {
            xs[a] = train.states(live[a], k);
            cont[a] = problem.f(s, xs[a]) * dt + cash[a];
        }
        policy[k] = fit(xs, cont, basis_degree, res.degree_used, reduced);
        for (std::size_t a = 0; a < live.size(); ++a) {
            const double g = problem.g(s, xs[a]);
            cash[a] = g >= policy[k].continuation(xs[a]) ? g : cont[a];
        }
    }
    if (reduced) res.warnings.push_back("regression matrix singular; basis degree reduced");

    double train_cont = 0.0;
    for (std::size_t a = 0; a < live.size(); ++a) train_cont += problem.f(t, x) * dt + cash[a];
    train_cont /= static_cast<double>(live.size());
    const double g0 = problem.g(t, x);
    if (g0 >= train_cont) {
        res.estimate = g0;
        res.standard_error = 0.0;
        return res;
    }

    const PathBundle eval = simulate_paths(problem, t, x, n_paths, n_steps, derive_seed(seed, 1), opts.sim);
    if (eval.poisoned_count > 0)
        res.warnings.push_back(std::to_string(eval.poisoned_count) + " evaluation paths poisoned");
    std::vector<double> payoff;
    payoff.reserve(n_paths);
    for (std::size_t i = 0; i < eval.n_paths; ++i) {
        if (eval.poisoned[i]) continue;
        double acc = 0.0;
        std::size_t k = 0;
        for (;; ++k) {
            const double s = eval.time(k);
            const double xk = eval.states(i, k);
            if (k == n_steps) {
                acc += problem.g(s, xk);
                break;
            }
            if (k > 0 && policy[k].active) {
                const double g = problem.g(s, xk);
                if (g >= policy[k].continuation(xk)) {
                    acc += g;
                    break;
                }
            }
            acc += problem.f(s, xk) * dt;
        }
        payoff.push_back(acc);
    }
    const std::size_t m = payoff.size();
    if (m < 2) throw std::runtime_error("LSMC: too few finite evaluation paths");
    double mean = 0.0;
    for (double v : payoff) mean += v;
    mean /= static_cast<double>(m);
    res.estimate = mean;

    // Bootstrap standard error of the mean, resampling indices with a derived stream.
    const std::uint64_t boot_seed = derive_seed(seed, 2);
    std::vector<double> means(opts.bootstrap_resamples);
    for (std::size_t r = 0; r < opts.bootstrap_resamples; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; j += 2) {
            const auto u = uniform_pair(boot_seed, r, j / 2);
            acc += payoff[std::min(m - 1, static_cast<std::size_t>(u[0] * static_cast<double>(m)))];
            if (j + 1 < m) acc += payoff[std::min(m - 1, static_cast<std::size_t>(u[1] * static_cast<double>(m)))];
        }
        means[r] = acc / static_cast<double>(m);
    }
    if (means.size() >= 2) {
        double mm = 0.0;
        for (double v : means) mm += v;
        mm /= static_cast<double>(means.size());
        double var = 0.0;
        for (double v : means) var += (v - mm) * (v - mm);
        res.standard_error = std::sqrt(var / static_cast<double>(means.size() - 1));
    }
    return res;
}

}  // namespace stoplab
