#pragma once

#include "stoplab/filtering.hpp"
#include "stoplab/problem.hpp"
#include "stoplab/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stoplab {

/// Parameters of a built-in drift family, as written in the [drift] section.
struct DriftConfig {
    std::string family;  // bm_time_drift | gbm | brownian_bridge | ou_time_mean | filtering
    std::string mu;      // bm_time_drift, function of t
    std::string gamma;   // gbm, function of t
    double pin = 0.0;    // brownian_bridge
    double theta = 1.0;  // ou_time_mean
    std::string mean;    // ou_time_mean, function of t
    std::string prior;   // filtering: two_point | gaussian | discrete
    double p = 0.5, l = -1.0, r = 1.0;
    double prior_mean = 0.0, prior_var = 1.0;
    std::vector<Atom> atoms;
    std::string link;  // filtering: h(y) written in the variable x; empty = identity

    bool operator==(const DriftConfig&) const = default;
};

enum class PoleSetting { automatic, yes, no };

struct ProblemConfig {
    double horizon = 1.0;
    StateSpace state_space = StateSpace::real_line;
    Orientation orientation = Orientation::lower;
    std::string drift;  // expression; used when drift_family is empty
    std::optional<DriftConfig> drift_family;
    std::string sigma = "1";
    std::string g = "x";
    std::string f;  // empty = no running reward
    std::string g_dt, g_dx, g_dxx;
    bool reduce = false;
    PoleSetting drift_pole = PoleSetting::automatic;

    bool operator==(const ProblemConfig&) const = default;
};

struct GridConfig {
    std::size_t nt = 400;
    std::size_t nx = 400;
    double x_pad = 5.0;
    double x_ref = 0.0;
    double theta = 0.5;
    EdgeRule edge = EdgeRule::obstacle;

    bool operator==(const GridConfig&) const = default;
};

struct CouplingConfig {
    double u = 0.0;
    double t = 0.0;
    double x = 0.0;

    bool operator==(const CouplingConfig&) const = default;
};

enum class RegionChoice { everywhere, M };

struct SimulationConfig {
    std::size_t n_paths = 10000;
    std::size_t n_steps = 200;
    std::optional<std::uint64_t> seed;
    std::vector<CouplingConfig> couplings;
    RegionChoice region = RegionChoice::M;
    double c_ord = 1.0;
    std::size_t lsmc_paths = 10000;
    std::size_t lsmc_steps = 100;
    std::size_t lsmc_degree = 3;
    bool dump_paths = false;
    std::size_t threads = 1;

    bool operator==(const SimulationConfig&) const = default;
};

struct OutputConfig {
    std::string dir = "out";
    std::vector<std::string> formats = {"csv", "json", "txt"};

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    std::string name = "run";
    ProblemConfig problem;
    GridConfig grid;
    SimulationConfig simulation;
    std::vector<std::string> checks = {"value_time_monotone", "boundary_monotone",
                                       "residual_complementarity"};
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;
};

/// Every check name accepted in [checks] run = ...
const std::vector<std::string>& known_checks();

/// Parse the key-value format; throws ConfigError with the offending line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical text; parse_config(save_config(c)) == c.
std::string save_config(const RunConfig& cfg);

/// Structural validation: expressions parse, checks exist, seed present,
/// sigma free of t. Throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Realise the configured problem (not yet flipped or reduced).
ProblemSpec build_problem(const RunConfig& cfg);

/// FNV-1a digest of the canonical text, as 16 hex digits. The output
/// directory and thread count are left out: they do not change results.
std::string config_digest(const RunConfig& cfg);

}  // namespace stoplab
