#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tsforge/common/error.hpp"
#include "tsforge/harness/experiment_config.hpp"
#include "tsforge/harness/pipeline.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::optional<std::string> stage;
    bool resume = false;
};

void add_flags(CLI::App& cmd, Flags& f, bool with_stage) {
    cmd.add_option("--config", f.config, "Experiment config JSON")->required();
    cmd.add_option("--out", f.out, "Output directory (overrides config)");
    cmd.add_option("--seed", f.seed, "Master seed (overrides config)");
    cmd.add_option("--jobs", f.jobs, "Parallel tasks (overrides config)")
        ->check(CLI::PositiveNumber);
    if (with_stage) {
        cmd.add_option("--stage", f.stage, "Run only this stage and its prerequisites");
    }
    cmd.add_flag("--resume", f.resume, "Reuse per-task artifacts of an interrupted stage");
}

int execute(const Flags& f, std::optional<tsforge::Stage> stage) {
    auto config = tsforge::load_experiment_config(f.config);
    if (f.out) {
        config.output_dir = *f.out;
    }
    if (f.seed) {
        config.seed = *f.seed;
    }
    if (f.jobs) {
        config.jobs = *f.jobs;
    }
    tsforge::PipelineOptions options;
    options.stage = stage;
    options.resume = f.resume;
    options.log = [](const std::string& m) { std::cerr << m << "\n"; };
    const auto manifest = tsforge::run_pipeline(config, options);
    std::cout << "output: " << config.output_dir.string() << "\n";
    std::cout << "config hash: " << manifest.config_hash << "\n";
    std::cout << "completed stages:";
    for (const auto& s : manifest.completed_stages) {
        std::cout << " " << s;
    }
    std::cout << "\n";
    std::cout << "files: " << manifest.files.size() << "\n";
    std::cout << "task failures: " << manifest.failures.size() << "\n";
    for (const auto& fail : manifest.failures) {
        std::cout << "  [" << fail.stage << "] " << fail.task << ": " << fail.message << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tsforge: transfer-learning forecasting benchmark harness"};
    app.require_subcommand(1);

    Flags run_flags;
    auto* run = app.add_subcommand("run", "Run every stage (or --stage and its prerequisites)");
    add_flags(*run, run_flags, true);

    struct StageCommand {
        tsforge::Stage stage;
        CLI::App* cmd;
        Flags flags;
    };
    std::vector<StageCommand> stage_cmds;
    stage_cmds.reserve(tsforge::all_stages().size());
    for (const auto stage : tsforge::all_stages()) {
        stage_cmds.push_back({stage, nullptr, {}});
    }
    for (auto& sc : stage_cmds) {
        const auto name = tsforge::to_string(sc.stage);
        sc.cmd = app.add_subcommand(name, "Run the " + name + " stage and its prerequisites");
        add_flags(*sc.cmd, sc.flags, false);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::optional<tsforge::Stage> stage;
            if (run_flags.stage) {
                stage = tsforge::parse_stage(*run_flags.stage);
            }
            return execute(run_flags, stage);
        }
        for (const auto& sc : stage_cmds) {
            if (sc.cmd->parsed()) {
                return execute(sc.flags, sc.stage);
            }
        }
    } catch (const tsforge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
