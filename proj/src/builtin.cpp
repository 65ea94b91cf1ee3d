#include "stoplab/builtin.hpp"

namespace stoplab {

namespace {

RunConfig base(const char* name) {
    RunConfig c;
    c.name = name;
    c.simulation.seed = 20240611;
    c.output.dir = std::string("out/") + name;
    return c;
}

DriftConfig family(const char* name) {
    DriftConfig d;
    d.family = name;
    return d;
}

}  // namespace

std::vector<RunConfig> builtin_examples() {
    std::vector<RunConfig> out;

    {
        RunConfig c = base("bm_time_drift");
        c.problem.horizon = 2.0;
        DriftConfig d = family("bm_time_drift");
        d.mu = "1 - t";
        c.problem.drift_family = d;
        c.problem.sigma = "1";
        c.problem.g = "x";
        c.simulation.couplings = {{0.5, 1.0, 0.0}};
        c.simulation.region = RegionChoice::everywhere;
        c.checks = {"g_monotone", "mu_time_monotone", "h_monotone", "value_time_monotone",
                    "boundary_monotone", "residual_complementarity", "comparison", "continuity_scan"};
        out.push_back(c);
    }
    {
        RunConfig c = base("gbm_time_drift");
        c.problem.horizon = 2.0;
        c.problem.state_space = StateSpace::positive_half_line;
        DriftConfig d = family("gbm");
        d.gamma = "1 - t";
        c.problem.drift_family = d;
        c.problem.sigma = "0.3 * x";
        c.problem.g = "x";
        c.grid.x_ref = 1.0;
        c.simulation.couplings = {{0.5, 1.0, 1.0}};
        c.simulation.region = RegionChoice::everywhere;
        c.checks = {"g_monotone", "mu_time_monotone", "value_time_monotone", "boundary_monotone",
                    "residual_complementarity", "comparison", "continuity_scan"};
        out.push_back(c);
    }
    {
        RunConfig c = base("brownian_bridge_exp");
        c.problem.orientation = Orientation::upper;
        DriftConfig d = family("brownian_bridge");
        d.pin = 0.0;
        c.problem.drift_family = d;
        c.problem.g = "exp(x)";
        c.grid.edge = EdgeRule::outflow;
        c.grid.x_pad = 4.0;
        c.simulation.couplings = {{0.25, 0.5, 1.0}};
        c.simulation.region = RegionChoice::M;
        c.checks = {"g_monotone", "mu_time_monotone_region", "condition_iii", "value_time_monotone",
                    "boundary_monotone", "residual_complementarity", "comparison", "continuity_scan"};
        out.push_back(c);
    }
    {
        RunConfig c = base("brownian_bridge_linear_flipped");
        c.problem.orientation = Orientation::upper;
        DriftConfig d = family("brownian_bridge");
        d.pin = 0.0;
        c.problem.drift_family = d;
        c.problem.g = "x";
        c.grid.edge = EdgeRule::outflow;
        c.simulation.lsmc_steps = c.grid.nt;
        c.simulation.couplings = {{0.25, 0.5, 1.0}};
        c.simulation.region = RegionChoice::M;
        c.checks = {"g_monotone", "mu_time_monotone_region", "condition_iii", "value_time_monotone",
                    "boundary_monotone", "residual_complementarity", "comparison", "continuity_scan",
                    "lsmc_cross"};
        out.push_back(c);
    }
    {
        RunConfig c = base("two_point_filtering");
        DriftConfig d = family("filtering");
        d.prior = "two_point";
        d.p = 0.5;
        d.l = -1.0;
        d.r = 2.0;
        c.problem.drift_family = d;
        c.problem.g = "x";
        c.simulation.couplings = {{0.25, 0.5, 0.0}};
        c.simulation.region = RegionChoice::everywhere;
        c.checks = {"g_monotone", "mu_time_monotone", "value_time_monotone", "boundary_monotone",
                    "residual_complementarity", "comparison", "continuity_scan"};
        out.push_back(c);
    }
    {
        RunConfig c = base("ou_time_mean");
        c.problem.orientation = Orientation::upper;
        DriftConfig d = family("ou_time_mean");
        d.theta = 1.0;
        d.mean = "0.5 - t";
        c.problem.drift_family = d;
        c.problem.g = "x";
        c.simulation.couplings = {{0.25, 0.5, 0.0}};
        c.simulation.region = RegionChoice::everywhere;
        c.checks = {"g_monotone", "mu_time_monotone", "value_time_monotone", "boundary_monotone",
                    "residual_complementarity", "comparison", "continuity_scan"};
        out.push_back(c);
    }
    {
        RunConfig c = base("reward_time_dependent");
        c.problem.drift = "0.5 - t + 0.5 * x / (1 + abs(x))";
        c.problem.g = "x - 0.5 * t^2";
        c.problem.g_dt = "-t";
        c.problem.g_dx = "1";
        c.problem.g_dxx = "0";
        c.problem.reduce = true;
        c.simulation.couplings = {{0.25, 0.5, 0.0}};
        c.simulation.region = RegionChoice::everywhere;
        c.checks = {"h_monotone", "mu_time_monotone", "value_time_monotone", "boundary_monotone",
                    "residual_complementarity", "comparison", "continuity_scan"};
        out.push_back(c);
    }
    return out;
}

std::optional<RunConfig> find_example(const std::string& name) {
    for (RunConfig& c : builtin_examples())
        if (c.name == name) return c;
    return std::nullopt;
}

}  // namespace stoplab
