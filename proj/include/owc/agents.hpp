#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "owc/env.hpp"
#include "owc/rng.hpp"

namespace owc {

class Environment;

struct Hyperparams {
    double alpha = 0.1;
    double gamma = 0.9;
    double epsilon_start = 1.0;
    double epsilon_decay = 0.999;  // multiplicative, applied per step
    double epsilon_min = 0.01;
    std::size_t episodes = 2000;
    std::size_t steps_per_episode = 10;
    std::uint64_t seed = 1;

    void validate() const;  // throws validation_error
};

// Sparse (state, action) -> value table with a per-state incumbent (best
// stored entry, ties broken by lowest action index). Absent entries read as
// 0, which doubles as the optimistic-neutral initial value.
class QTable {
  public:
    explicit QTable(std::uint64_t num_actions) : num_actions_(num_actions) {}

    std::uint64_t num_actions() const { return num_actions_; }

    double get(std::uint64_t state, std::uint64_t action) const;
    void set(std::uint64_t state, std::uint64_t action, double value);

    struct Incumbent {
        std::uint64_t action = 0;
        double value = 0.0;
    };

    // Best stored entry for the state, if any entry exists.
    std::optional<Incumbent> incumbent(std::uint64_t state) const;

    std::size_t visited_count(std::uint64_t state) const;
    bool visited(std::uint64_t state, std::uint64_t action) const;

    // max_a Q(state, a) over all actions, counting unvisited ones as 0.
    double bootstrap_value(std::uint64_t state) const;

    std::vector<std::uint64_t> states() const;
    const std::unordered_map<std::uint64_t, double>* row(std::uint64_t state) const;

  private:
    struct Row {
        std::unordered_map<std::uint64_t, double> q;
        std::uint64_t best_action = 0;
        double best_value = 0.0;
    };
    std::unordered_map<std::uint64_t, Row> rows_;
    std::uint64_t num_actions_ = 0;
};

// Epsilon-greedy: with probability eps a uniform random action; otherwise the
// state's incumbent when its value is positive, else a uniformly sampled
// not-yet-visited action (their default 0 beats any non-positive incumbent).
std::uint64_t select_action(const QosState& state, const QTable& q, double eps, Rng& rng);

// Tabular update Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)).
// Returns the stored value.
double q_update(QTable& q, const Transition& t, const Hyperparams& hp);

struct StepRecord {
    std::size_t episode = 0;
    std::size_t step = 0;
    double epsilon = 0.0;
    std::uint64_t action_index = 0;
    double reward = 0.0;
    double best_reward = 0.0;  // running max, non-decreasing
};

struct TrainingLog {
    std::vector<StepRecord> steps;
    std::vector<std::pair<std::uint64_t, QTable::Incumbent>> greedy_per_state;
    double wallclock_s = 0.0;
};

struct TrainResult {
    QTable table;
    TrainingLog log;
};

// Runs episodes x steps interactions from the all-zeros initial state with
// per-step multiplicative epsilon decay. Deterministic for a fixed seed.
TrainResult train(const Environment& env, const Hyperparams& hp);

// The allocation the trained table deploys: the greedy action of the
// highest-valued row. Action values are state-independent here (static
// users), so the table's global best entry is the learned one-shot choice.
std::uint64_t greedy_allocation(const Environment& env, const QTable& q);

struct SearchOptions {
    std::uint64_t enumeration_budget = 5'000'000;
    double near_optimal_tol = 1e-9;  // relative, for the near-optimal set
};

struct OptimumResult {
    std::uint64_t action_index = 0;  // lowest index attaining the max
    double reward = 0.0;
    std::vector<std::uint64_t> near_optimal;  // all actions within tol of max
};

// Exact argmax of reward_fn over [0, size) action indices. Fans out across
// worker threads; the reduction is deterministic (ties -> lowest index).
// Throws budget_error when size exceeds the budget.
template <class RewardFn>
OptimumResult exhaustive_search(std::uint64_t size, RewardFn&& reward_fn,
                                const SearchOptions& opts = {});

// Exhaustive optimum of the environment's reward plus the winning report.
struct EnvOptimum {
    std::uint64_t action_index = 0;
    double reward = 0.0;
    LinkReport report;
    std::vector<std::uint64_t> near_optimal;
};
EnvOptimum exhaustive_optimum(const Environment& env, const SearchOptions& opts = {});

struct BaselineStats {
    double mean = 0.0;
    double max = 0.0;
    double min = 0.0;
    std::size_t draws = 0;
};

// Reward statistics over n uniformly random actions.
BaselineStats random_baseline(const Environment& env, std::size_t n, Rng& rng);

}  // namespace owc

#include "owc/agents_impl.hpp"
