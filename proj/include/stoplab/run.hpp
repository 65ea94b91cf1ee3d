#pragma once

#include "stoplab/config.hpp"
#include "stoplab/error.hpp"
#include "stoplab/lsmc.hpp"
#include "stoplab/report.hpp"
#include "stoplab/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stoplab {

/// A pipeline stage failed; what() names the stage.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct RunOptions {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    /// Halve dt and dx this many times.
    std::size_t refine = 0;
    /// Include wall-clock timings in reports.json (makes it run-dependent).
    bool timings = false;
    bool write_files = true;
    /// Validate and run the hypothesis checks only; no solve, no simulation.
    bool hypotheses_only = false;
};

struct PathStatistics {
    std::size_t n_paths = 0;
    std::size_t poisoned = 0;
    double terminal_mean = 0.0;
    double terminal_sd = 0.0;
};

struct RunArtifacts {
    RunConfig config;  // after command-line overrides
    std::string run_id;
    std::string config_digest;
    std::optional<ValueSurface> surface;
    std::optional<Boundary> boundary;
    std::vector<CheckReport> reports;
    std::vector<std::string> warnings;
    std::optional<PathStatistics> paths;
    std::optional<LsmcResult> lsmc;
    std::vector<std::pair<std::string, double>> timings;
    std::string summary;
    std::string reports_json;
    std::vector<std::string> files;
    /// 0 unless a requested check FAILed.
    int exit_code = 0;
};

/// validate -> (flip) -> (reduce) -> solve -> boundary -> simulate -> checks -> export.
/// Throws StageError when a stage fails.
RunArtifacts run_problem(const RunConfig& cfg, const RunOptions& opts = {});

/// Checks that need no solved surface.
bool is_hypothesis_check(const std::string& name);

}  // namespace stoplab
