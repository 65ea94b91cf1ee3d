#include "stoplab/builtin.hpp"
#include "stoplab/config.hpp"
#include "stoplab/run.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <thread>

namespace {

int run_and_report(const stoplab::RunConfig& cfg, const stoplab::RunOptions& opts) {
    try {
        const stoplab::RunArtifacts art = stoplab::run_problem(cfg, opts);
        std::cout << art.summary;
        for (const std::string& f : art.files) std::cout << "wrote " << f << "\n";
        return art.exit_code;
    } catch (const stoplab::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-horizon optimal stopping for time-inhomogeneous diffusions"};
    app.require_subcommand(1);

    stoplab::RunOptions opts;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::size_t refine = 0;
    bool timings = false;

    auto* solve = app.add_subcommand("solve", "Solve a configured problem and run its checks");
    solve->add_option("config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    solve->add_option("--out", out_dir, "Output directory");
    solve->add_option("--seed", seed, "Override the simulation seed");
    solve->add_option("--refine", refine, "Halve dt and dx this many times");
    solve->add_flag("--timings", timings, "Record stage timings in reports.json");

    auto* check = app.add_subcommand("check", "Validate a configuration and run the hypothesis checks only");
    check->add_option("config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    check->add_option("--out", out_dir, "Output directory");

    auto* examples = app.add_subcommand("examples", "Built-in example problems");
    examples->require_subcommand(1);
    auto* ex_list = examples->add_subcommand("list", "List the built-in examples");
    std::string example_name;
    auto* ex_run = examples->add_subcommand("run", "Run a built-in example");
    ex_run->add_option("name", example_name, "Example name")->required();
    ex_run->add_option("--out", out_dir, "Output directory");
    ex_run->add_option("--seed", seed, "Override the simulation seed");
    ex_run->add_option("--refine", refine, "Halve dt and dx this many times");
    ex_run->add_flag("--timings", timings, "Record stage timings in reports.json");
    auto* ex_show = examples->add_subcommand("show", "Print the configuration of a built-in example");
    ex_show->add_option("name", example_name, "Example name")->required();

    std::vector<std::string> batch_paths;
    auto* batch = app.add_subcommand("batch", "Solve several configurations in parallel");
    batch->add_option("configs", batch_paths, "Run configuration files")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    opts.seed = seed;
    opts.out_dir = out_dir;
    opts.refine = refine;
    opts.timings = timings;

    try {
        if (*solve || *check) {
            const stoplab::RunConfig cfg = stoplab::load_config(config_path);
            opts.hypotheses_only = static_cast<bool>(*check);
            return run_and_report(cfg, opts);
        }
        if (*ex_list) {
            for (const auto& c : stoplab::builtin_examples()) std::cout << c.name << "\n";
            return 0;
        }
        if (*ex_run || *ex_show) {
            const auto cfg = stoplab::find_example(example_name);
            if (!cfg) {
                std::cerr << "error: no built-in example named '" << example_name << "'\n";
                return 2;
            }
            if (*ex_show) {
                std::cout << stoplab::save_config(*cfg);
                return 0;
            }
            return run_and_report(*cfg, opts);
        }
        if (*batch) {
            std::vector<stoplab::RunConfig> cfgs;
            for (const auto& p : batch_paths) cfgs.push_back(stoplab::load_config(p));
            std::vector<int> codes(cfgs.size(), 0);
            std::vector<std::string> outputs(cfgs.size());
            std::vector<std::thread> pool;
            for (std::size_t i = 0; i < cfgs.size(); ++i) {
                pool.emplace_back([&, i] {
                    try {
                        const auto art = stoplab::run_problem(cfgs[i], {});
                        outputs[i] = art.summary;
                        codes[i] = art.exit_code;
                    } catch (const std::exception& e) {
                        outputs[i] = std::string("error: ") + e.what() + "\n";
                        codes[i] = 2;
                    }
                });
            }
            for (auto& t : pool) t.join();
            int worst = 0;
            for (std::size_t i = 0; i < cfgs.size(); ++i) {
                std::cout << outputs[i];
                worst = std::max(worst, codes[i]);
            }
            return worst;
        }
    } catch (const stoplab::ConfigError& e) {
        std::cerr << "error: stage 'config' failed: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
