#include "owc/cli.hpp"

#include <cstdio>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "owc/errors.hpp"
#include "owc/harness.hpp"
#include "owc/scenario.hpp"

namespace owc {

namespace {

struct CommonOpts {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> objective;
};

Scenario load_with_overrides(const CommonOpts& opts) {
    Scenario scenario = load_scenario(opts.config);
    if (opts.seed) scenario.hyperparams.seed = *opts.seed;
    if (opts.objective) {
        if (*opts.objective == "sinr")
            scenario.reward.objective = Objective::TotalSinr;
        else if (*opts.objective == "rate")
            scenario.reward.objective = Objective::TotalRate;
        else
            throw validation_error("--objective must be sinr or rate, got '" + *opts.objective +
                                   "'");
    }
    return scenario;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config, "scenario JSON file")->required();
    cmd->add_option("--seed", opts.seed, "override the training seed");
    cmd->add_option("--objective", opts.objective, "override the objective (sinr|rate)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Indoor optical-wireless resource allocation simulator"};
    app.require_subcommand(1);

    CommonOpts channel_opts, train_opts, optimal_opts, compare_opts;
    std::string channel_out, optimal_out, train_dir, compare_dir;

    CLI::App* channel = app.add_subcommand("channel", "compute and export the gain matrix");
    add_common(channel, channel_opts);
    channel->add_option("--out", channel_out, "output CSV path")->required();

    CLI::App* train_cmd = app.add_subcommand("train", "train the Q-learning agent");
    add_common(train_cmd, train_opts);
    train_cmd->add_option("--out-dir", train_dir, "output directory")->required();

    CLI::App* optimal = app.add_subcommand("optimal", "exhaustive optimum allocation");
    add_common(optimal, optimal_opts);
    optimal->add_option("--out", optimal_out, "output CSV path")->required();

    CLI::App* compare = app.add_subcommand("compare", "train, enumerate, and compare");
    add_common(compare, compare_opts);
    compare->add_option("--out-dir", compare_dir, "output directory")->required();

    // CLI11 wants argv in reverse order without the program name.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (channel->parsed()) return cmd_channel(load_with_overrides(channel_opts), channel_out);
        if (train_cmd->parsed()) return cmd_train(load_with_overrides(train_opts), train_dir);
        if (optimal->parsed()) return cmd_optimal(load_with_overrides(optimal_opts), optimal_out);
        if (compare->parsed()) return cmd_compare(load_with_overrides(compare_opts), compare_dir);
        return kExitValidation;
    } catch (const budget_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBudget;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace owc
