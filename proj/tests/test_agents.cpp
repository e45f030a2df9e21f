#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "owc/agents.hpp"
#include "owc/environment.hpp"
#include "owc/errors.hpp"
#include "toy_scenarios.hpp"

using namespace owc;
using owc::test::toy_scenario;

TEST_CASE("q-table incumbent tracking") {
    SUBCASE("basic reads and writes") {
        QTable q(10);
        CHECK(q.get(0, 3) == 0.0);
        CHECK_FALSE(q.incumbent(0).has_value());
        q.set(0, 3, 2.5);
        CHECK(q.get(0, 3) == 2.5);
        CHECK(q.incumbent(0)->action == 3);
        CHECK(q.incumbent(0)->value == 2.5);
        q.set(0, 7, 1.0);
        CHECK(q.incumbent(0)->action == 3);
        q.set(0, 7, 9.0);
        CHECK(q.incumbent(0)->action == 7);
        q.set(0, 7, -1.0);  // demote the incumbent, forcing a rescan
        CHECK(q.incumbent(0)->action == 3);
        CHECK(q.incumbent(0)->value == 2.5);
    }

    SUBCASE("ties break toward the lowest action index") {
        QTable q(10);
        q.set(0, 6, 4.0);
        q.set(0, 2, 4.0);
        CHECK(q.incumbent(0)->action == 2);
        q.set(0, 8, 4.0);
        CHECK(q.incumbent(0)->action == 2);
    }

    SUBCASE("incumbent equals a fresh scan after any interleaving of writes") {
        QTable q(64);
        std::map<std::pair<std::uint64_t, std::uint64_t>, double> shadow;
        Rng rng(99);
        for (int op = 0; op < 4000; ++op) {
            const std::uint64_t s = uniform_index(rng, 5);
            const std::uint64_t a = uniform_index(rng, 64);
            const double v = (uniform_double(rng) - 0.5) * 20.0;
            q.set(s, a, v);
            shadow[{s, a}] = v;

            // fresh scan of the shadow for this state
            bool found = false;
            std::uint64_t best_a = 0;
            double best_v = 0.0;
            for (const auto& [key, value] : shadow) {
                if (key.first != s) continue;
                if (!found || value > best_v || (value == best_v && key.second < best_a)) {
                    best_a = key.second;
                    best_v = value;
                    found = true;
                }
            }
            REQUIRE(q.incumbent(s).has_value());
            CHECK(q.incumbent(s)->action == best_a);
            CHECK(q.incumbent(s)->value == best_v);
        }
    }
}

TEST_CASE("action selection") {
    const QosState state = QosState::zeros(3);

    SUBCASE("eps = 1 draws uniformly (chi-squared on 24 actions)") {
        QTable q(24);
        Rng rng(7);
        const int draws = 10000;
        std::vector<int> counts(24, 0);
        for (int i = 0; i < draws; ++i) ++counts[select_action(state, q, 1.0, rng)];
        const double expected = draws / 24.0;
        double chi2 = 0.0;
        for (const int c : counts) chi2 += (c - expected) * (c - expected) / expected;
        CHECK(chi2 < 49.728);  // df = 23, p = 0.001
    }

    SUBCASE("eps = 0 exploits a positive incumbent") {
        QTable q(24);
        q.set(0, 7, 5.0);
        Rng rng(1);
        for (int i = 0; i < 10; ++i) CHECK(select_action(state, q, 0.0, rng) == 7);
    }

    SUBCASE("eps = 0 with only negative values prefers unvisited actions") {
        QTable q(24);
        q.set(0, 3, -2.0);
        q.set(0, 9, -1.0);
        Rng rng(1);
        for (int i = 0; i < 50; ++i) {
            const std::uint64_t a = select_action(state, q, 0.0, rng);
            CHECK(a < 24);
            CHECK(a != 3);
            CHECK(a != 9);
        }
    }

    SUBCASE("fully visited non-positive row falls back to the best stored entry") {
        QTable q(3);
        q.set(0, 0, -5.0);
        q.set(0, 1, -2.0);
        q.set(0, 2, -7.0);
        Rng rng(1);
        CHECK(select_action(state, q, 0.0, rng) == 1);
    }
}

TEST_CASE("q-update algebra") {
    const QosState s0 = QosState::zeros(2);
    const QosState s1 = QosState::from_index(3, 2);

    SUBCASE("first write is alpha * r with a zero bootstrap") {
        QTable q(10);
        Hyperparams hp;
        hp.alpha = 0.1;
        hp.gamma = 0.9;
        const double v = q_update(q, {s0, 4, 10.0, s1}, hp);
        CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(q.get(0, 4) == v);
    }

    SUBCASE("alpha = 1, gamma = 0 reduces to the bandit rule") {
        QTable q(10);
        Hyperparams hp;
        hp.alpha = 1.0;
        hp.gamma = 0.0;
        CHECK(q_update(q, {s0, 4, 7.25, s1}, hp) == 7.25);
        CHECK(q_update(q, {s0, 4, -3.5, s1}, hp) == -3.5);
    }

    SUBCASE("repeated identical transition converges geometrically") {
        QTable q(10);
        Hyperparams hp;
        hp.alpha = 0.5;
        hp.gamma = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double v = q_update(q, {s0, 2, 4.0, s1}, hp);
            const double expected = 4.0 * (1.0 - std::pow(0.5, k));
            CHECK(v == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    SUBCASE("bootstrap uses the next state's best value") {
        QTable q(10);
        Hyperparams hp;
        hp.alpha = 1.0;
        hp.gamma = 0.5;
        q.set(s1.index(), 6, 8.0);
        CHECK(q_update(q, {s0, 0, 1.0, s1}, hp) == doctest::Approx(1.0 + 0.5 * 8.0));
        // negative best with unvisited actions bootstraps from the 0 default
        QTable q2(10);
        q2.set(s1.index(), 6, -8.0);
        CHECK(q_update(q2, {s0, 0, 1.0, s1}, hp) == doctest::Approx(1.0));
    }
}

TEST_CASE("training loop") {
    const Scenario s = toy_scenario(3, 2, 2);
    const Environment env(s);

    SUBCASE("zero episodes: empty table and log") {
        Hyperparams hp = s.hyperparams;
        hp.episodes = 0;
        const TrainResult result = train(env, hp);
        CHECK(result.log.steps.empty());
        CHECK(result.table.states().empty());
    }

    SUBCASE("same seed, bit-identical logs") {
        Hyperparams hp = s.hyperparams;
        hp.episodes = 60;
        const TrainResult a = train(env, hp);
        const TrainResult b = train(env, hp);
        REQUIRE(a.log.steps.size() == b.log.steps.size());
        for (std::size_t i = 0; i < a.log.steps.size(); ++i) {
            CHECK(a.log.steps[i].action_index == b.log.steps[i].action_index);
            CHECK(a.log.steps[i].reward == b.log.steps[i].reward);
            CHECK(a.log.steps[i].epsilon == b.log.steps[i].epsilon);
            CHECK(a.log.steps[i].best_reward == b.log.steps[i].best_reward);
        }
    }

    SUBCASE("epsilon decays multiplicatively with a floor, best reward is monotone") {
        Hyperparams hp = s.hyperparams;
        hp.episodes = 100;
        const TrainResult result = train(env, hp);
        double expected_eps = hp.epsilon_start;
        double prev_best = -std::numeric_limits<double>::infinity();
        for (const StepRecord& r : result.log.steps) {
            CHECK(r.epsilon == expected_eps);
            expected_eps = std::max(hp.epsilon_min, expected_eps * hp.epsilon_decay);
            CHECK(r.best_reward >= prev_best);
            prev_best = r.best_reward;
        }
    }

    SUBCASE("trained greedy policy reaches the exhaustive optimum on the toy") {
        const EnvOptimum opt = exhaustive_optimum(env);
        for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
            Hyperparams hp = s.hyperparams;
            hp.seed = seed;
            const TrainResult result = train(env, hp);
            const std::uint64_t action = greedy_allocation(env, result.table);
            const double r = env.reward_of(env.evaluate(action));
            CHECK(r >= opt.reward * (1.0 - 1e-9));
        }
    }
}

namespace {

// Independent of index_to_assignment: recursive enumeration of all injective
// user -> slot tuples in lexicographic order, with the reward recomputed
// straight from its definition.
struct NaiveBest {
    Assignment assignment;
    double reward = -std::numeric_limits<double>::infinity();
    std::size_t count_optimal = 0;
};

void naive_recurse(const Environment& env, std::vector<std::size_t>& choice, std::size_t user,
                   NaiveBest& best, std::vector<double>& rewards) {
    const std::size_t users = env.num_users();
    const std::size_t wavelengths = env.scenario().wavelengths.size();
    const std::size_t slots = env.scenario().num_slots();

    if (user == users) {
        Assignment a =
            Assignment::zeros(users, env.scenario().transmitters.size(), wavelengths);
        for (std::size_t u = 0; u < users; ++u)
            a.at(u, choice[u] / wavelengths, choice[u] % wavelengths) = 1;
        const LinkReport report = evaluate_assignment(a, env.gains(), env.scenario());
        const RewardConfig cfg = env.reward_config();
        double r = 0.0;
        for (const UserLink& link : report.users) {
            const double metric = objective_metric(link, cfg.objective);
            r += metric;
            if (metric < cfg.qos_threshold) r -= cfg.penalty_weight;
        }
        rewards.push_back(r);
        if (r > best.reward) {
            best.reward = r;
            best.assignment = a;
        }
        return;
    }
    for (std::size_t slot = 0; slot < slots; ++slot) {
        bool taken = false;
        for (std::size_t prev = 0; prev < user; ++prev)
            if (choice[prev] == slot) taken = true;
        if (taken) continue;
        choice[user] = slot;
        naive_recurse(env, choice, user + 1, best, rewards);
    }
}

NaiveBest naive_enumerate(const Environment& env, double tol) {
    NaiveBest best;
    std::vector<double> rewards;
    std::vector<std::size_t> choice(env.num_users(), 0);
    naive_recurse(env, choice, 0, best, rewards);
    const double floor = best.reward - tol * std::abs(best.reward);
    for (const double r : rewards)
        if (r >= floor) ++best.count_optimal;
    return best;
}

}  // namespace

TEST_CASE("exhaustive search") {
    SUBCASE("matches a naive scan and breaks ties low") {
        const auto fn = [](std::uint64_t i) {
            return static_cast<double>((i % 7 == 3) ? 50 : static_cast<int>(i % 11));
        };
        const OptimumResult r = exhaustive_search(1000, fn);

        double naive_best = -std::numeric_limits<double>::infinity();
        std::uint64_t naive_action = 0;
        for (std::uint64_t i = 0; i < 1000; ++i)
            if (fn(i) > naive_best) {
                naive_best = fn(i);
                naive_action = i;
            }
        CHECK(r.reward == naive_best);
        CHECK(r.action_index == naive_action);
        CHECK(r.action_index == 3);  // lowest of the tied maxima

        std::vector<std::uint64_t> ties;
        for (std::uint64_t i = 0; i < 1000; ++i)
            if (fn(i) == naive_best) ties.push_back(i);
        CHECK(r.near_optimal == ties);
    }

    SUBCASE("adding a constant to every reward leaves the argmax set unchanged") {
        const auto fn = [](std::uint64_t i) { return static_cast<double>(i % 13); };
        const auto shifted = [&](std::uint64_t i) { return fn(i) + 1000.0; };
        const OptimumResult a = exhaustive_search(500, fn);
        const OptimumResult b = exhaustive_search(500, shifted);
        CHECK(a.action_index == b.action_index);
        CHECK(a.near_optimal == b.near_optimal);
    }

    SUBCASE("budget refusal names the size and the budget") {
        SearchOptions opts;
        opts.enumeration_budget = 50;
        CHECK_THROWS_WITH_AS(
            exhaustive_search(100, [](std::uint64_t) { return 0.0; }, opts),
            "action space size 100 exceeds enumeration budget 50; shrink the instance or "
            "raise the budget",
            budget_error);
    }
}

TEST_CASE("exhaustive optimum vs naive enumerator on the 24-action toy") {
    const Scenario s = toy_scenario(3, 2, 2);
    const Environment env(s);
    const EnvOptimum opt = exhaustive_optimum(env);
    const NaiveBest naive = naive_enumerate(env, s.search.near_optimal_tol);

    CHECK(opt.reward == naive.reward);
    CHECK(index_to_assignment(opt.action_index, env.action_space()) == naive.assignment);
    CHECK(opt.near_optimal.size() == naive.count_optimal);
}

TEST_CASE("random baseline") {
    const Scenario s = toy_scenario(3, 2, 2);
    const Environment env(s);

    SUBCASE("single draw: mean = max = min") {
        Rng rng(5);
        const BaselineStats stats = random_baseline(env, 1, rng);
        CHECK(stats.mean == stats.max);
        CHECK(stats.mean == stats.min);
        CHECK(stats.draws == 1);
    }

    SUBCASE("never beats the exhaustive optimum") {
        const EnvOptimum opt = exhaustive_optimum(env);
        Rng rng(5);
        const BaselineStats stats = random_baseline(env, 500, rng);
        CHECK(stats.max <= opt.reward);
        CHECK(stats.min <= stats.mean);
        CHECK(stats.mean <= stats.max);
    }

    SUBCASE("fixed seed reproduces exactly") {
        Rng a(11), b(11);
        const BaselineStats sa = random_baseline(env, 100, a);
        const BaselineStats sb = random_baseline(env, 100, b);
        CHECK(sa.mean == sb.mean);
        CHECK(sa.max == sb.max);
        CHECK(sa.min == sb.min);
    }

    SUBCASE("zero draws rejected") {
        Rng rng(1);
        CHECK_THROWS_AS(random_baseline(env, 0, rng), std::domain_error);
    }
}
