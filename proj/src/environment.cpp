#include "owc/environment.hpp"

#include <stdexcept>
#include <string>

#include "owc/errors.hpp"

namespace owc {

Environment::Environment(Scenario scenario)
    : Environment(std::move(scenario), ChannelGainMatrix{}) {
    gains_ = compute_gain_matrix(scenario_);
}

Environment::Environment(Scenario scenario, ChannelGainMatrix gains)
    : scenario_(std::move(scenario)), gains_(std::move(gains)) {
    scenario_.validate();
    if (!gains_.entries.empty() &&
        (gains_.num_users != scenario_.num_users() ||
         gains_.num_transmitters != scenario_.transmitters.size()))
        throw validation_error("gain matrix shape does not match the scenario");
    space_ = ActionSpace::create(scenario_.num_users(), scenario_.transmitters.size(),
                                 scenario_.wavelengths.size());
    reward_cfg_ = scenario_.reward_config();
}

LinkReport Environment::evaluate(std::uint64_t action_index) const {
    return evaluate_assignment(index_to_assignment(action_index, space_), gains_, scenario_);
}

Transition Environment::step(const QosState& state, std::uint64_t action_index) const {
    if (action_index >= space_.size)
        throw std::domain_error("step: action index " + std::to_string(action_index) +
                                " out of range [0, " + std::to_string(space_.size) + ")");
    const LinkReport report = evaluate(action_index);
    Transition t;
    t.prev_state = state;
    t.action_index = action_index;
    t.reward = reward_of(report);
    t.next_state = encode(report);
    return t;
}

}  // namespace owc
