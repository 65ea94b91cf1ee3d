#pragma once

#include "stoplab/field.hpp"
#include "stoplab/grid.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stoplab {

enum class StateSpace { real_line, positive_half_line };
enum class Orientation { lower, upper };

std::string_view to_string(StateSpace s) noexcept;
std::string_view to_string(Orientation o) noexcept;

/// One finite-horizon stopping problem
///   v(t,x) = sup_tau E[ int_0^tau f(t+s, X_{t+s}) ds + g(t+tau, X_{t+tau}) ]
/// for dX = mu(t,X) dt + sigma(X) dW.
struct ProblemSpec {
    ScalarField drift;
    ScalarField diffusion;  // evaluated as diffusion(0, x); must not depend on t
    ScalarField terminal_reward;
    std::optional<ScalarField> running_reward;
    double horizon = 1.0;
    StateSpace state_space = StateSpace::real_line;
    Orientation orientation = Orientation::lower;

    double mu(double t, double x) const { return drift(t, x); }
    double sigma(double x) const { return diffusion(0.0, x); }
    double g(double t, double x) const { return terminal_reward(t, x); }
    double f(double t, double x) const { return running_reward ? (*running_reward)(t, x) : 0.0; }
    bool has_pole() const noexcept { return drift.pole_at_horizon; }
};

/// Structural invariants; throws ValidationError when violated.
void check_invariants(const ProblemSpec& spec);

struct ValidatedProblem {
    ProblemSpec spec;
    /// Sampled sup of |mu(t,x1) - mu(t,x2)| / |x1 - x2| over the probe grid.
    double lipschitz_estimate = 0.0;
    std::vector<double> lipschitz_by_time;
    std::vector<std::string> warnings;
};

/// Evaluate every field on the probe grid. Throws ValidationError for
/// non-finite values or negative sigma; collects warnings for degenerate
/// sigma and for drifts that blow up towards the horizon.
ValidatedProblem validate_problem(const ProblemSpec& spec, const Grid& probe);

/// Reflect x -> -x and swap the boundary orientation. Only real_line problems
/// can be reflected. Applying it twice gives back the original evaluators.
ProblemSpec flip_orientation(const ProblemSpec& spec);

/// Rewrite the problem for w = v - g: zero terminal reward and running reward
/// h = f + (d/dt + mu d/dx + sigma^2/2 d2/dx2) g. Missing partials of g are
/// taken by central differences; `probe` is used to check that h is finite
/// and to size the evaluation-noise estimate of h.
ProblemSpec reduce_to_running_reward(const ProblemSpec& spec, const Grid& probe);

}  // namespace stoplab
