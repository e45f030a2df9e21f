#include "owc/agents.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "owc/environment.hpp"
#include "owc/errors.hpp"

namespace owc {

void Hyperparams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw validation_error("hyperparams.alpha must satisfy 0 < alpha <= 1");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw validation_error("hyperparams.gamma must satisfy 0 <= gamma < 1");
    if (!(epsilon_min >= 0.0 && epsilon_min <= epsilon_start && epsilon_start <= 1.0))
        throw validation_error(
            "hyperparams epsilon schedule must satisfy 0 <= epsilon_min <= epsilon_start <= 1");
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
        throw validation_error("hyperparams.epsilon_decay must satisfy 0 < decay <= 1");
}

double QTable::get(std::uint64_t state, std::uint64_t action) const {
    const auto row_it = rows_.find(state);
    if (row_it == rows_.end()) return 0.0;
    const auto it = row_it->second.q.find(action);
    return it == row_it->second.q.end() ? 0.0 : it->second;
}

void QTable::set(std::uint64_t state, std::uint64_t action, double value) {
    Row& row = rows_[state];
    row.q[action] = value;

    if (row.q.size() == 1) {
        row.best_action = action;
        row.best_value = value;
        return;
    }
    if (action == row.best_action) {
        if (value >= row.best_value) {
            row.best_value = value;
            return;
        }
        // Incumbent demoted; rescan the row.
        bool first = true;
        for (const auto& [a, v] : row.q) {
            if (first || v > row.best_value ||
                (v == row.best_value && a < row.best_action)) {
                row.best_action = a;
                row.best_value = v;
                first = false;
            }
        }
        return;
    }
    if (value > row.best_value || (value == row.best_value && action < row.best_action)) {
        row.best_action = action;
        row.best_value = value;
    }
}

std::optional<QTable::Incumbent> QTable::incumbent(std::uint64_t state) const {
    const auto it = rows_.find(state);
    if (it == rows_.end() || it->second.q.empty()) return std::nullopt;
    return Incumbent{it->second.best_action, it->second.best_value};
}

std::size_t QTable::visited_count(std::uint64_t state) const {
    const auto it = rows_.find(state);
    return it == rows_.end() ? 0 : it->second.q.size();
}

bool QTable::visited(std::uint64_t state, std::uint64_t action) const {
    const auto it = rows_.find(state);
    return it != rows_.end() && it->second.q.contains(action);
}

double QTable::bootstrap_value(std::uint64_t state) const {
    const auto it = rows_.find(state);
    if (it == rows_.end() || it->second.q.empty()) return 0.0;
    if (it->second.q.size() < num_actions_) return std::max(0.0, it->second.best_value);
    return it->second.best_value;
}

std::vector<std::uint64_t> QTable::states() const {
    std::vector<std::uint64_t> out;
    out.reserve(rows_.size());
    for (const auto& [s, row] : rows_) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

const std::unordered_map<std::uint64_t, double>* QTable::row(std::uint64_t state) const {
    const auto it = rows_.find(state);
    return it == rows_.end() ? nullptr : &it->second.q;
}

namespace {

std::uint64_t sample_unvisited(const QTable& q, std::uint64_t state, Rng& rng) {
    const std::uint64_t n = q.num_actions();

    // Small spaces: enumerate for an exactly uniform draw.
    if (n <= 4096) {
        std::vector<std::uint64_t> unvisited;
        unvisited.reserve(static_cast<std::size_t>(n) - q.visited_count(state));
        for (std::uint64_t a = 0; a < n; ++a)
            if (!q.visited(state, a)) unvisited.push_back(a);
        return unvisited[uniform_index(rng, unvisited.size())];
    }

    // Large spaces are sparsely visited; rejection sampling terminates fast.
    for (int tries = 0; tries < 256; ++tries) {
        const std::uint64_t a = uniform_index(rng, n);
        if (!q.visited(state, a)) return a;
    }
    const std::uint64_t start = uniform_index(rng, n);
    for (std::uint64_t k = 0; k < n; ++k) {
        const std::uint64_t a = (start + k) % n;
        if (!q.visited(state, a)) return a;
    }
    return q.incumbent(state)->action;  // unreachable: caller checked for unvisited
}

}  // namespace

std::uint64_t select_action(const QosState& state, const QTable& q, double eps, Rng& rng) {
    if (eps > 0.0 && uniform_double(rng) < eps) return uniform_index(rng, q.num_actions());

    const std::uint64_t s = state.index();
    const auto inc = q.incumbent(s);
    if (inc && inc->value > 0.0) return inc->action;
    if (q.visited_count(s) >= q.num_actions()) return inc->action;
    return sample_unvisited(q, s, rng);
}

double q_update(QTable& q, const Transition& t, const Hyperparams& hp) {
    const std::uint64_t s = t.prev_state.index();
    const double current = q.get(s, t.action_index);
    const double bootstrap = q.bootstrap_value(t.next_state.index());
    const double value = current + hp.alpha * (t.reward + hp.gamma * bootstrap - current);
    q.set(s, t.action_index, value);
    return value;
}

TrainResult train(const Environment& env, const Hyperparams& hp) {
    hp.validate();
    const auto start = std::chrono::steady_clock::now();

    QTable table(env.action_space().size);
    TrainingLog log;
    log.steps.reserve(hp.episodes * hp.steps_per_episode);
    Rng rng(hp.seed);

    double eps = hp.epsilon_start;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t episode = 0; episode < hp.episodes; ++episode) {
        QosState state = env.initial_state();
        for (std::size_t step = 0; step < hp.steps_per_episode; ++step) {
            const std::uint64_t action = select_action(state, table, eps, rng);
            const Transition t = env.step(state, action);
            q_update(table, t, hp);
            best = std::max(best, t.reward);
            log.steps.push_back({episode, step, eps, action, t.reward, best});
            state = t.next_state;
            eps = std::max(hp.epsilon_min, eps * hp.epsilon_decay);
        }
    }

    for (const std::uint64_t s : table.states())
        log.greedy_per_state.emplace_back(s, *table.incumbent(s));

    log.wallclock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(table), std::move(log)};
}

std::uint64_t greedy_allocation(const Environment& env, const QTable& q) {
    // Static users make this a one-shot allocation: action values do not
    // depend on the state, so the policy's deployed choice is the
    // highest-valued entry anywhere in the table. Ties break toward the
    // lowest state then action index.
    bool found = false;
    std::uint64_t best_action = 0;
    double best_value = 0.0;
    for (const std::uint64_t s : q.states()) {
        const auto inc = q.incumbent(s);
        if (!inc) continue;
        if (!found || inc->value > best_value) {
            best_value = inc->value;
            best_action = inc->action;
            found = true;
        }
    }
    if (found) return best_action;

    // Untrained table: fall back to the greedy selector at the initial state.
    Rng rng(0x9e3779b97f4a7c15ull);
    return select_action(env.initial_state(), q, 0.0, rng);
}

EnvOptimum exhaustive_optimum(const Environment& env, const SearchOptions& opts) {
    OptimumResult found = exhaustive_search(
        env.action_space().size,
        [&](std::uint64_t i) { return env.reward_of(env.evaluate(i)); }, opts);

    EnvOptimum result;
    result.action_index = found.action_index;
    result.reward = found.reward;
    result.report = env.evaluate(found.action_index);
    result.near_optimal = std::move(found.near_optimal);
    return result;
}

BaselineStats random_baseline(const Environment& env, std::size_t n, Rng& rng) {
    if (n == 0) throw std::domain_error("random_baseline: n must be > 0");
    BaselineStats stats;
    stats.draws = n;
    stats.max = -std::numeric_limits<double>::infinity();
    stats.min = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t action = uniform_index(rng, env.action_space().size);
        const double r = env.reward_of(env.evaluate(action));
        sum += r;
        stats.max = std::max(stats.max, r);
        stats.min = std::min(stats.min, r);
    }
    stats.mean = sum / static_cast<double>(n);
    return stats;
}

}  // namespace owc
