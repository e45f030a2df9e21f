#pragma once

#include <cstdint>
#include <string>

#include "owc/agents.hpp"
#include "owc/environment.hpp"
#include "owc/scenario.hpp"

namespace owc {

struct MethodResult {
    std::string method;  // "ql" or "optimal"
    std::uint64_t action_index = 0;
    LinkReport report;
    double reward = 0.0;
    double wallclock_s = 0.0;
};

struct ComparisonReport {
    Objective objective = Objective::TotalSinr;
    MethodResult ql;
    MethodResult optimal;
    std::size_t num_optimal_actions = 0;  // near-optimal set size from the search
    double ratio = 0.0;                   // QL objective total / optimal objective total
};

// The objective's total for a report: summed per-user dB SINR or summed rate.
double objective_total(const LinkReport& report, Objective objective);

// Full pipeline: gains -> train -> exhaustive optimum -> evaluate both.
// Fills log_out with the training log when provided.
ComparisonReport run_compare(const Environment& env, TrainingLog* log_out = nullptr);

// CSV emission. Every file starts with a comment row recording the scenario
// name and seeds so the figure it feeds is regenerable.
void write_gain_csv(const std::string& path, const Scenario& scenario,
                    const ChannelGainMatrix& gains);
void write_link_report_csv(const std::string& path, const Scenario& scenario,
                           const LinkReport& report, const std::string& extra_comment = "");
void write_training_log_csv(const std::string& path, const Scenario& scenario,
                            const TrainingLog& log);
void write_comparison_csv(const std::string& path, const Scenario& scenario,
                          const ComparisonReport& cmp);
void write_summary_csv(const std::string& path, const Scenario& scenario,
                       const ComparisonReport& cmp);

// CLI subcommand bodies. Each writes its outputs and returns 0.
int cmd_channel(const Scenario& scenario, const std::string& out_path);
int cmd_train(const Scenario& scenario, const std::string& out_dir);
int cmd_optimal(const Scenario& scenario, const std::string& out_path);
int cmd_compare(const Scenario& scenario, const std::string& out_dir);

}  // namespace owc
