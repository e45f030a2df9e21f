#include "owc/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "owc/errors.hpp"

namespace owc {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write output file '" + path + "'");
    return out;
}

// Every report records the seeds it was produced from.
std::string seed_comment(const Scenario& s) {
    std::string line = "# scenario=" + s.name + " objective=" + objective_name(s.reward.objective) +
                       " train_seed=" + std::to_string(s.hyperparams.seed);
    if (s.placement) line += " placement_seed=" + std::to_string(s.placement->seed);
    return line;
}

void write_link_rows(std::ofstream& out, const Scenario& scenario, const LinkReport& report) {
    out << "user_id,tx_id,wavelength,signal_A,interference_A2,noise_A2,sinr_linear,sinr_db,"
           "rate_bps_hz\n";
    for (const UserLink& u : report.users) {
        out << u.user_id << ',' << scenario.transmitters[u.tx].id << ','
            << scenario.wavelengths[u.wavelength] << ',' << fmt(u.signal_A) << ','
            << fmt(u.interference_A2) << ',' << fmt(u.noise_A2) << ',' << fmt(u.sinr_linear)
            << ',' << fmt(u.sinr_db) << ',' << fmt(u.rate_bps_hz) << '\n';
    }
}

}  // namespace

double objective_total(const LinkReport& report, Objective objective) {
    return objective == Objective::TotalSinr ? report.total_sinr_linear : report.total_rate;
}

ComparisonReport run_compare(const Environment& env, TrainingLog* log_out) {
    ComparisonReport cmp;
    cmp.objective = env.reward_config().objective;

    const auto t0 = std::chrono::steady_clock::now();
    const EnvOptimum opt = exhaustive_optimum(env, env.scenario().search);
    cmp.optimal.method = "optimal";
    cmp.optimal.action_index = opt.action_index;
    cmp.optimal.report = opt.report;
    cmp.optimal.reward = opt.reward;
    cmp.optimal.wallclock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    cmp.num_optimal_actions = opt.near_optimal.size();

    TrainResult trained = train(env, env.scenario().hyperparams);
    const std::uint64_t ql_action = greedy_allocation(env, trained.table);
    cmp.ql.method = "ql";
    cmp.ql.action_index = ql_action;
    cmp.ql.report = env.evaluate(ql_action);
    cmp.ql.reward = env.reward_of(cmp.ql.report);
    cmp.ql.wallclock_s = trained.log.wallclock_s;

    cmp.ratio = objective_total(cmp.ql.report, cmp.objective) /
                objective_total(cmp.optimal.report, cmp.objective);
    if (log_out) *log_out = std::move(trained.log);
    return cmp;
}

void write_gain_csv(const std::string& path, const Scenario& scenario,
                    const ChannelGainMatrix& gains) {
    auto out = open_csv(path);
    out << seed_comment(scenario) << '\n';
    out << "user_id,tx_id,h_los,h_first,h_second,h_total\n";
    for (std::size_t u = 0; u < gains.num_users; ++u) {
        for (std::size_t l = 0; l < gains.num_transmitters; ++l) {
            const GainBreakdown& g = gains.at(u, l);
            out << u << ',' << scenario.transmitters[l].id << ',' << fmt(g.los) << ','
                << fmt(g.first_order) << ',' << fmt(g.second_order) << ',' << fmt(g.total())
                << '\n';
        }
    }
}

void write_link_report_csv(const std::string& path, const Scenario& scenario,
                           const LinkReport& report, const std::string& extra_comment) {
    auto out = open_csv(path);
    out << seed_comment(scenario) << '\n';
    if (!extra_comment.empty()) out << "# " << extra_comment << '\n';
    write_link_rows(out, scenario, report);
}

void write_training_log_csv(const std::string& path, const Scenario& scenario,
                            const TrainingLog& log) {
    auto out = open_csv(path);
    out << seed_comment(scenario) << '\n';
    out << "episode,step,epsilon,action_index,reward,best_reward\n";
    for (const StepRecord& r : log.steps) {
        out << r.episode << ',' << r.step << ',' << fmt(r.epsilon) << ',' << r.action_index
            << ',' << fmt(r.reward) << ',' << fmt(r.best_reward) << '\n';
    }
}

void write_comparison_csv(const std::string& path, const Scenario& scenario,
                          const ComparisonReport& cmp) {
    auto out = open_csv(path);
    out << seed_comment(scenario) << '\n';
    out << "method,user_id,tx_id,wavelength,sinr_db,rate_bps_hz\n";
    for (const MethodResult* m : {&cmp.ql, &cmp.optimal}) {
        for (const UserLink& u : m->report.users) {
            out << m->method << ',' << u.user_id << ',' << scenario.transmitters[u.tx].id << ','
                << scenario.wavelengths[u.wavelength] << ',' << fmt(u.sinr_db) << ','
                << fmt(u.rate_bps_hz) << '\n';
        }
    }
}

void write_summary_csv(const std::string& path, const Scenario& scenario,
                       const ComparisonReport& cmp) {
    auto out = open_csv(path);
    out << seed_comment(scenario) << '\n';
    out << "method,total_sinr,total_rate,num_optimal_actions,wallclock_s\n";
    for (const MethodResult* m : {&cmp.ql, &cmp.optimal}) {
        out << m->method << ',' << fmt(m->report.total_sinr_linear) << ','
            << fmt(m->report.total_rate) << ',' << cmp.num_optimal_actions << ','
            << fmt(m->wallclock_s) << '\n';
    }
}

int cmd_channel(const Scenario& scenario, const std::string& out_path) {
    write_gain_csv(out_path, scenario, compute_gain_matrix(scenario));
    return 0;
}

int cmd_train(const Scenario& scenario, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Environment env(scenario);
    const TrainResult trained = train(env, scenario.hyperparams);
    write_training_log_csv(out_dir + "/training_log.csv", scenario, trained.log);

    const std::uint64_t action = greedy_allocation(env, trained.table);
    const LinkReport report = env.evaluate(action);
    write_link_report_csv(out_dir + "/link_report_ql.csv", scenario, report,
                          "action_index=" + std::to_string(action) +
                              " reward=" + fmt(env.reward_of(report)));
    return 0;
}

int cmd_optimal(const Scenario& scenario, const std::string& out_path) {
    const Environment env(scenario);
    const EnvOptimum opt = exhaustive_optimum(env, scenario.search);
    write_link_report_csv(out_path, scenario, opt.report,
                          "action_index=" + std::to_string(opt.action_index) +
                              " reward=" + fmt(opt.reward) + " num_optimal_actions=" +
                              std::to_string(opt.near_optimal.size()));
    return 0;
}

int cmd_compare(const Scenario& scenario, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Environment env(scenario);
    TrainingLog log;
    const ComparisonReport cmp = run_compare(env, &log);

    write_gain_csv(out_dir + "/channel_gains.csv", scenario, env.gains());
    write_training_log_csv(out_dir + "/training_log.csv", scenario, log);
    write_link_report_csv(out_dir + "/link_report_ql.csv", scenario, cmp.ql.report,
                          "action_index=" + std::to_string(cmp.ql.action_index) +
                              " reward=" + fmt(cmp.ql.reward));
    write_link_report_csv(out_dir + "/link_report_optimal.csv", scenario, cmp.optimal.report,
                          "action_index=" + std::to_string(cmp.optimal.action_index) +
                              " reward=" + fmt(cmp.optimal.reward));
    write_comparison_csv(out_dir + "/comparison.csv", scenario, cmp);
    write_summary_csv(out_dir + "/summary.csv", scenario, cmp);

    std::printf("objective=%s ql_total=%s optimal_total=%s ratio=%.6f optimal_actions=%zu\n",
                objective_name(cmp.objective).c_str(),
                fmt(objective_total(cmp.ql.report, cmp.objective)).c_str(),
                fmt(objective_total(cmp.optimal.report, cmp.objective)).c_str(), cmp.ratio,
                cmp.num_optimal_actions);
    return 0;
}

}  // namespace owc
