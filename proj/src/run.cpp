#include "stoplab/run.hpp"

#include "stoplab/checks.hpp"
#include "stoplab/export.hpp"
#include "stoplab/grid.hpp"
#include "stoplab/rng.hpp"
#include "stoplab/sde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace stoplab {

bool is_hypothesis_check(const std::string& name) {
    return name == "g_monotone" || name == "mu_time_monotone" || name == "mu_time_monotone_region" ||
           name == "h_monotone";
}

namespace {

template <typename Fn>
auto stage(const char* name, std::vector<std::pair<std::string, double>>& timings, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto record = [&] {
        const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
        timings.emplace_back(name, d.count());
    };
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record();
        } else {
            auto r = fn();
            record();
            return r;
        }
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

double value_at(const ValueSurface& s, std::size_t k, double x) {
    const auto& xs = s.grid.x;
    if (x <= xs.front()) return s.v(k, 0);
    if (x >= xs.back()) return s.v(k, xs.size() - 1);
    const std::size_t j = std::min<std::size_t>(
        xs.size() - 2, static_cast<std::size_t>((x - xs.front()) / s.grid.dx));
    const double w = (x - xs[j]) / (xs[j + 1] - xs[j]);
    return (1.0 - w) * s.v(k, j) + w * s.v(k, j + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

CheckReport lsmc_report(double fd, const LsmcResult& l, double t, double x) {
    CheckReport r;
    r.check = "lsmc_cross";
    r.worst = std::fabs(fd - l.estimate);
    r.tolerance = std::max(3.0 * l.standard_error, 5e-3);
    r.witness.t = t;
    r.witness.x = x;
    r.verdict = r.worst <= r.tolerance ? Verdict::pass : Verdict::fail;
    r.notes = "finite-difference " + fmt(fd) + " vs LSMC " + fmt(l.estimate) + " (s.e. " +
              fmt(l.standard_error) + ")";
    return r;
}

std::string boundary_line(const Boundary& b) {
    auto show = [](double v) { return std::isinf(v) ? std::string(v > 0 ? "+inf" : "-inf") : fmt(v); };
    std::ostringstream o;
    const std::size_t n = b.t.size();
    o << to_string(b.orientation) << " boundary: b(" << fmt(b.t[0]) << ") = " << show(b.b[0]) << ", b("
      << fmt(b.t[n / 2]) << ") = " << show(b.b[n / 2]) << ", b(" << fmt(b.t[n - 1]) << ") = " << show(b.b[n - 1]);
    return o.str();
}

}  // namespace

RunArtifacts run_problem(const RunConfig& cfg_in, const RunOptions& opts) {
    RunArtifacts art;
    auto& timings = art.timings;

    RunConfig cfg = cfg_in;
    if (opts.seed) cfg.simulation.seed = *opts.seed;
    cfg.grid.nt <<= opts.refine;
    cfg.grid.nx <<= opts.refine;
    if (opts.out_dir) cfg.output.dir = *opts.out_dir;

    stage("config", timings, [&] { validate_config(cfg); });
    art.config = cfg;
    art.config_digest = config_digest(cfg);
    art.run_id = cfg.name + "-" + art.config_digest.substr(0, 8);
    const std::uint64_t seed = *cfg.simulation.seed;
    auto requested = [&](const char* name) {
        return std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end();
    };

    const ProblemSpec original = stage("build", timings, [&] { return build_problem(cfg); });
    GridOptions gopts;
    gopts.nt = cfg.grid.nt;
    gopts.nx = cfg.grid.nx;
    gopts.x_ref = cfg.grid.x_ref;
    gopts.x_pad = cfg.grid.x_pad;
    const Grid grid = stage("grid", timings, [&] { return build_grid(original, gopts); });

    stage("validate", timings, [&] {
        const ValidatedProblem vp = validate_problem(original, grid);
        art.warnings.insert(art.warnings.end(), vp.warnings.begin(), vp.warnings.end());
    });

    // The problem whose value function is computed, in original coordinates.
    ProblemSpec target = original;
    std::optional<ScalarField> h;
    if (cfg.problem.reduce || requested("h_monotone")) {
        stage("reduce", timings, [&] {
            const ProblemSpec reduced = reduce_to_running_reward(original, grid);
            h = *reduced.running_reward;
            if (cfg.problem.reduce) target = reduced;
        });
    }

    std::vector<std::string> pending;
    for (const std::string& c : cfg.checks)
        if (!opts.hypotheses_only || is_hypothesis_check(c)) pending.push_back(c);

    if (!opts.hypotheses_only) {
        const bool upper = target.orientation == Orientation::upper;
        const ProblemSpec solved_problem =
            upper ? stage("flip", timings, [&] { return flip_orientation(target); }) : target;
        const Grid solve_grid =
            upper ? make_grid(grid.t_end(), grid.horizon, -grid.x_max(), -grid.x_min(), grid.nt(), grid.nx())
                  : grid;
        SolverOptions sopts;
        sopts.theta = cfg.grid.theta;
        sopts.edge = cfg.grid.edge;
        art.surface = stage("solve", timings, [&] {
            ValueSurface s = solve_backward(solved_problem, solve_grid, sopts);
            if (!upper) return s;
            ValueSurface m = mirror_surface(s);
            m.grid = grid;
            return m;
        });
        art.boundary = stage("boundary", timings, [&] { return extract_boundary(*art.surface); });
        art.warnings.insert(art.warnings.end(), art.boundary->warnings.begin(), art.boundary->warnings.end());

        if (cfg.simulation.n_paths > 0) {
            stage("simulate", timings, [&] {
                SimOptions so;
                so.threads = cfg.simulation.threads;
                const PathBundle b = simulate_paths(target, 0.0, cfg.grid.x_ref, cfg.simulation.n_paths,
                                                    cfg.simulation.n_steps, seed, so);
                PathStatistics ps;
                ps.n_paths = b.n_paths;
                ps.poisoned = b.poisoned_count;
                double sum = 0.0, sq = 0.0;
                std::size_t live = 0;
                for (std::size_t i = 0; i < b.n_paths; ++i) {
                    if (b.poisoned[i]) continue;
                    const double v = b.states(i, b.n_steps);
                    sum += v;
                    sq += v * v;
                    ++live;
                }
                if (live > 0) {
                    ps.terminal_mean = sum / static_cast<double>(live);
                    ps.terminal_sd = std::sqrt(std::max(0.0, sq / static_cast<double>(live) -
                                                                 ps.terminal_mean * ps.terminal_mean));
                }
                if (ps.poisoned > 0)
                    art.warnings.push_back(std::to_string(ps.poisoned) + " simulated paths hit a non-finite state");
                art.paths = ps;
                if (cfg.simulation.dump_paths && opts.write_files) {
                    std::ostringstream csv;
                    write_paths_csv(csv, b);
                    art.files.push_back(write_text_file(cfg.output.dir, "paths.csv", csv.str()));
                }
            });
        }
    }

    stage("checks", timings, [&] {
        for (const std::string& name : pending) {
            if (name == "g_monotone") {
                art.reports.push_back(check_g_monotone(target.terminal_reward, grid));
            } else if (name == "mu_time_monotone") {
                art.reports.push_back(check_mu_time_monotone(target.drift, grid, Scope::everywhere));
            } else if (name == "mu_time_monotone_region") {
                art.reports.push_back(check_mu_time_monotone(target.drift, grid, Scope::region));
            } else if (name == "h_monotone") {
                art.reports.push_back(check_h_monotone(*h, grid).overall);
            } else if (name == "condition_iii") {
                art.reports.push_back(check_condition_iii(*art.surface, target.drift, target.diffusion));
            } else if (name == "value_time_monotone") {
                art.reports.push_back(verify_value_time_monotone(*art.surface));
            } else if (name == "boundary_monotone") {
                art.reports.push_back(verify_boundary_monotone(*art.boundary));
            } else if (name == "residual_complementarity") {
                art.reports.push_back(residual_complementarity(*art.surface));
            } else if (name == "continuity_scan") {
                art.reports.push_back(check_continuity(*art.surface));
            } else if (name == "comparison") {
                if (cfg.simulation.couplings.empty()) {
                    CheckReport r;
                    r.check = "comparison";
                    r.notes = "no coupling pairs configured";
                    art.reports.push_back(r);
                }
                const Region region = cfg.simulation.region == RegionChoice::M
                                          ? Region::negative_drift(target.drift, tol_zero)
                                          : Region::everywhere();
                SimOptions so;
                so.threads = cfg.simulation.threads;
                for (std::size_t i = 0; i < cfg.simulation.couplings.size(); ++i) {
                    const CouplingConfig& c = cfg.simulation.couplings[i];
                    const CoupledBundle cb =
                        simulate_coupled(target, c.t, c.u, c.x, region, cfg.simulation.n_paths,
                                         cfg.simulation.n_steps, derive_seed(seed, 10 + i), so);
                    art.reports.push_back(comparison_report(cb, cfg.simulation.c_ord));
                }
            } else if (name == "lsmc_cross") {
                LsmcOptions lo;
                lo.sim.threads = cfg.simulation.threads;
                art.lsmc = value_lsmc(target, 0.0, cfg.grid.x_ref, cfg.simulation.lsmc_paths,
                                      cfg.simulation.lsmc_steps, cfg.simulation.lsmc_degree,
                                      derive_seed(seed, 100), lo);
                art.warnings.insert(art.warnings.end(), art.lsmc->warnings.begin(), art.lsmc->warnings.end());
                art.reports.push_back(
                    lsmc_report(value_at(*art.surface, 0, cfg.grid.x_ref), *art.lsmc, 0.0, cfg.grid.x_ref));
            }
        }
    });

    for (const CheckReport& r : art.reports)
        if (r.failed()) art.exit_code = 1;

    // Summary
    std::ostringstream o;
    o << "run " << cfg.name << " (" << art.run_id << ")\n";
    o << "config digest " << art.config_digest << "\n";
    o << "problem: horizon " << fmt(original.horizon) << ", " << to_string(original.state_space) << ", "
      << to_string(original.orientation) << " boundary" << (cfg.problem.reduce ? ", reduced to w = v - g" : "")
      << "\n";
    o << "grid: " << grid.nt() << " x " << grid.nx() << " intervals, t in [0, " << fmt(grid.t_end())
      << "], x in [" << fmt(grid.x_min()) << ", " << fmt(grid.x_max()) << "]\n";
    for (const std::string& w : art.warnings) o << "warning: " << w << "\n";
    if (art.surface) {
        o << (cfg.problem.reduce ? "w" : "v") << "(0, " << fmt(cfg.grid.x_ref)
          << ") = " << fmt(value_at(*art.surface, 0, cfg.grid.x_ref)) << "\n";
        o << boundary_line(*art.boundary) << "\n";
    }
    if (art.paths)
        o << "paths: " << art.paths->n_paths << " from (0, " << fmt(cfg.grid.x_ref) << "), " << art.paths->poisoned
          << " poisoned, terminal mean " << fmt(art.paths->terminal_mean) << ", sd " << fmt(art.paths->terminal_sd)
          << "\n";
    if (art.lsmc)
        o << "lsmc: " << fmt(art.lsmc->estimate) << " (s.e. " << fmt(art.lsmc->standard_error) << ")\n";
    o << "checks:\n";
    for (const CheckReport& r : art.reports) {
        o << "  " << r.check << " " << to_string(r.verdict) << "  worst " << fmt(r.worst) << "  tol "
          << fmt(r.tolerance);
        if (!r.notes.empty()) o << "  (" << r.notes << ")";
        o << "\n";
    }
    o << (art.exit_code == 0 ? "result: no requested check failed\n" : "result: a requested check FAILED\n");
    art.summary = o.str();

    art.reports_json = reports_document(art.run_id, art.config_digest, art.reports,
                                        opts.timings ? timings : std::vector<std::pair<std::string, double>>{});

    if (opts.write_files) {
        stage("export", timings, [&] {
            const auto& f = cfg.output.formats;
            auto wants = [&](const char* fmt_name) { return std::find(f.begin(), f.end(), fmt_name) != f.end(); };
            if (wants("csv") && art.surface) {
                for (auto& p : export_surface(*art.surface, *art.boundary, cfg.output.dir)) art.files.push_back(p);
            }
            if (wants("json")) art.files.push_back(write_text_file(cfg.output.dir, "reports.json", art.reports_json));
            if (wants("txt")) art.files.push_back(write_text_file(cfg.output.dir, "summary.txt", art.summary));
        });
    }
    return art;
}

}  // namespace stoplab
