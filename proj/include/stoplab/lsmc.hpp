#pragma once

#include "stoplab/problem.hpp"
#include "stoplab/sde.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stoplab {

struct LsmcOptions {
    std::size_t bootstrap_resamples = 200;
    SimOptions sim;
};

struct LsmcResult {
    double estimate = 0.0;
    double standard_error = 0.0;
    /// Smallest polynomial degree actually used by a regression.
    std::size_t degree_used = 0;
    std::vector<std::string> warnings;
};

/// Longstaff-Schwartz estimate of v(t, x). The exercise policy is regressed on
/// one path set and then evaluated on an independent set, so the estimate is
/// a lower bound up to Monte Carlo error.
LsmcResult value_lsmc(const ProblemSpec& problem, double t, double x, std::size_t n_paths,
                      std::size_t n_steps, std::size_t basis_degree, std::uint64_t seed,
                      const LsmcOptions& opts = {});

}  // namespace stoplab
