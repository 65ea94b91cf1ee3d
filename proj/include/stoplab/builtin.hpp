#pragma once

#include "stoplab/config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stoplab {

/// The example gallery: stopping problems for time-inhomogeneous diffusions.
std::vector<RunConfig> builtin_examples();

std::optional<RunConfig> find_example(const std::string& name);

}  // namespace stoplab
