#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "owc/errors.hpp"
#include "owc/parallel.hpp"

namespace owc {

namespace detail {

// Values within the relative tolerance band below `best` count as optimal.
inline double near_optimal_floor(double best, double tol) {
    return best - tol * std::abs(best);
}

}  // namespace detail

template <class RewardFn>
OptimumResult exhaustive_search(std::uint64_t size, RewardFn&& reward_fn,
                                const SearchOptions& opts) {
    if (size == 0) throw std::domain_error("exhaustive_search: empty action space");
    if (size > opts.enumeration_budget)
        throw budget_error("action space size " + std::to_string(size) +
                           " exceeds enumeration budget " +
                           std::to_string(opts.enumeration_budget) +
                           "; shrink the instance or raise the budget");

    struct Chunk {
        double best = -std::numeric_limits<double>::infinity();
        std::uint64_t best_action = 0;
        std::vector<std::pair<std::uint64_t, double>> candidates;
    };

    constexpr std::size_t kGrain = 32768;
    const std::size_t num_chunks = (size + kGrain - 1) / kGrain;
    std::vector<Chunk> chunks(num_chunks);

    parallel_chunks(size, kGrain, [&](std::size_t c, std::size_t begin, std::size_t end) {
        Chunk& ch = chunks[c];
        for (std::uint64_t i = begin; i < end; ++i) {
            const double r = reward_fn(i);
            if (r > ch.best) {
                ch.best = r;
                ch.best_action = i;
            }
            // The floor only rises as ch.best improves, so every candidate
            // near the final maximum survives this provisional filter.
            if (r >= detail::near_optimal_floor(ch.best, opts.near_optimal_tol))
                ch.candidates.emplace_back(i, r);
        }
    });

    OptimumResult result;
    result.reward = -std::numeric_limits<double>::infinity();
    for (const Chunk& ch : chunks) {
        if (ch.best > result.reward) {
            result.reward = ch.best;
            result.action_index = ch.best_action;
        }
    }
    const double floor = detail::near_optimal_floor(result.reward, opts.near_optimal_tol);
    for (const Chunk& ch : chunks)
        for (const auto& [action, r] : ch.candidates)
            if (r >= floor) result.near_optimal.push_back(action);
    return result;
}

}  // namespace owc
