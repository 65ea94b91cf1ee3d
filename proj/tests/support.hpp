#pragma once

#include "stoplab/expr.hpp"
#include "stoplab/field.hpp"
#include "stoplab/problem.hpp"

#include <string>

namespace stoplab::testing {

inline ScalarField field(const std::string& text, double horizon = 1.0) {
    return ScalarField::from_expr(parse(text), horizon);
}

inline ProblemSpec problem(const std::string& mu, const std::string& sigma, const std::string& g,
                           double horizon = 1.0) {
    ProblemSpec p;
    p.drift = field(mu, horizon);
    p.diffusion = field(sigma, horizon);
    p.terminal_reward = field(g, horizon);
    p.horizon = horizon;
    return p;
}

}  // namespace stoplab::testing
