#pragma once

#include <cstdint>

#include "owc/env.hpp"
#include "owc/scenario.hpp"

namespace owc {

// The allocation MDP: static users and a precomputed gain matrix, so the
// transition is a pure function of the action alone. The full MDP interface
// is kept anyway so the tabular machinery applies unchanged.
class Environment {
  public:
    explicit Environment(Scenario scenario);
    Environment(Scenario scenario, ChannelGainMatrix gains);

    const Scenario& scenario() const { return scenario_; }
    const ChannelGainMatrix& gains() const { return gains_; }
    const ActionSpace& action_space() const { return space_; }
    const RewardConfig& reward_config() const { return reward_cfg_; }
    std::size_t num_users() const { return scenario_.num_users(); }

    LinkReport evaluate(std::uint64_t action_index) const;
    double reward_of(const LinkReport& report) const { return reward(report, reward_cfg_); }
    QosState encode(const LinkReport& report) const { return encode_state(report, reward_cfg_); }

    QosState initial_state() const { return QosState::zeros(num_users()); }

    // Throws std::domain_error for an out-of-range action index.
    Transition step(const QosState& state, std::uint64_t action_index) const;

  private:
    Scenario scenario_;
    ChannelGainMatrix gains_;
    ActionSpace space_;
    RewardConfig reward_cfg_;
};

}  // namespace owc
