#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "owc/link.hpp"

namespace owc {

// Binary QoS-satisfaction vector, one bit per user. Doubles as the MDP state;
// encodes to an integer index bit u -> 2^u.
struct QosState {
    std::vector<std::uint8_t> bits;

    static QosState zeros(std::size_t num_users) { return {std::vector<std::uint8_t>(num_users, 0)}; }
    static QosState from_index(std::uint64_t index, std::size_t num_users);

    std::uint64_t index() const;
    std::size_t num_users() const { return bits.size(); }

    bool operator==(const QosState&) const = default;
};

enum class Objective { TotalSinr, TotalRate };

std::string objective_name(Objective o);

struct RewardConfig {
    Objective objective = Objective::TotalSinr;
    double qos_threshold = 1.0;   // in the objective's unit (linear for SINR)
    double penalty_weight = 10.0; // subtracted per QoS-violating user
};

// Ordered (transmitter, wavelength) slots and the induced integer indexing of
// all injective user -> slot maps.
struct ActionSpace {
    std::size_t num_users = 0;
    std::size_t num_transmitters = 0;
    std::size_t num_wavelengths = 0;
    std::vector<Assignment::Slot> slots;  // lexicographic by tx, then wavelength
    std::uint64_t size = 0;               // S! / (S - U)!

    // Throws validation_error when users exceed slots or the count overflows.
    static ActionSpace create(std::size_t num_users, std::size_t num_transmitters,
                              std::size_t num_wavelengths);
};

// Unranks action index i into the 3-D assignment tensor; lexicographic over
// (user 0's slot, user 1's slot, ...). Throws std::domain_error when i is out
// of range. Inverse of assignment_to_index.
Assignment index_to_assignment(std::uint64_t i, const ActionSpace& space);
std::uint64_t assignment_to_index(const Assignment& a, const ActionSpace& space);

// The metric the reward and QoS bits are computed from: per-user linear SINR
// or spectral efficiency, per the configured objective.
double objective_metric(const UserLink& link, Objective objective);

// Bit u set iff user u's metric meets the QoS threshold.
QosState encode_state(const LinkReport& report, const RewardConfig& cfg);

// Total metric minus penalty_weight per QoS-violating user.
double reward(const LinkReport& report, const RewardConfig& cfg);

struct Transition {
    QosState prev_state;
    std::uint64_t action_index = 0;
    double reward = 0.0;
    QosState next_state;
};

}  // namespace owc
