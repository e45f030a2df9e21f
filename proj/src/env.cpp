#include "owc/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "owc/errors.hpp"

namespace owc {

QosState QosState::from_index(std::uint64_t index, std::size_t num_users) {
    QosState s = zeros(num_users);
    for (std::size_t u = 0; u < num_users; ++u)
        s.bits[u] = static_cast<std::uint8_t>((index >> u) & 1u);
    return s;
}

std::uint64_t QosState::index() const {
    std::uint64_t idx = 0;
    for (std::size_t u = 0; u < bits.size(); ++u)
        if (bits[u]) idx |= std::uint64_t{1} << u;
    return idx;
}

std::string objective_name(Objective o) {
    return o == Objective::TotalSinr ? "sinr" : "rate";
}

namespace {

// Falling factorial n (n-1) ... (n-k+1) with overflow detection.
std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t result = 1;
    for (std::uint64_t t = 0; t < k; ++t) {
        if (__builtin_mul_overflow(result, n - t, &result))
            throw validation_error("action space size overflows 64 bits");
    }
    return result;
}

}  // namespace

ActionSpace ActionSpace::create(std::size_t num_users, std::size_t num_transmitters,
                                std::size_t num_wavelengths) {
    ActionSpace space;
    space.num_users = num_users;
    space.num_transmitters = num_transmitters;
    space.num_wavelengths = num_wavelengths;
    for (std::size_t l = 0; l < num_transmitters; ++l)
        for (std::size_t w = 0; w < num_wavelengths; ++w)
            space.slots.push_back({l, w});

    const std::size_t num_slots = space.slots.size();
    if (num_users > num_slots)
        throw validation_error("infeasible: " + std::to_string(num_users) + " users but only " +
                               std::to_string(num_slots) +
                               " (transmitter, wavelength) slots");
    if (num_users > 63)
        throw validation_error("at most 63 users supported (QoS state index is 64-bit)");
    space.size = falling_factorial(num_slots, num_users);
    return space;
}

Assignment index_to_assignment(std::uint64_t i, const ActionSpace& space) {
    if (i >= space.size)
        throw std::domain_error("action index " + std::to_string(i) + " out of range [0, " +
                                std::to_string(space.size) + ")");

    Assignment a = Assignment::zeros(space.num_users, space.num_transmitters,
                                     space.num_wavelengths);
    std::vector<std::size_t> avail(space.slots.size());
    for (std::size_t k = 0; k < avail.size(); ++k) avail[k] = k;

    const std::size_t num_slots = space.slots.size();
    std::uint64_t rem = i;
    for (std::size_t u = 0; u < space.num_users; ++u) {
        const std::uint64_t per_choice =
            falling_factorial(num_slots - 1 - u, space.num_users - 1 - u);
        const std::size_t pick = static_cast<std::size_t>(rem / per_choice);
        rem %= per_choice;
        const Assignment::Slot slot = space.slots[avail[pick]];
        a.at(u, slot.tx, slot.wavelength) = 1;
        avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return a;
}

std::uint64_t assignment_to_index(const Assignment& a, const ActionSpace& space) {
    a.validate();
    std::vector<std::size_t> avail(space.slots.size());
    for (std::size_t k = 0; k < avail.size(); ++k) avail[k] = k;

    const std::size_t num_slots = space.slots.size();
    std::uint64_t index = 0;
    for (std::size_t u = 0; u < space.num_users; ++u) {
        const Assignment::Slot slot = a.serving(u);
        std::size_t slot_id = 0;
        for (; slot_id < space.slots.size(); ++slot_id)
            if (space.slots[slot_id] == slot) break;
        const auto it = std::find(avail.begin(), avail.end(), slot_id);
        if (it == avail.end())
            throw std::domain_error("assignment reuses slot (tx " + std::to_string(slot.tx) +
                                    ", wavelength " + std::to_string(slot.wavelength) + ")");
        const auto pick = static_cast<std::uint64_t>(it - avail.begin());
        index += pick * falling_factorial(num_slots - 1 - u, space.num_users - 1 - u);
        avail.erase(it);
    }
    return index;
}

double objective_metric(const UserLink& link, Objective objective) {
    return objective == Objective::TotalSinr ? link.sinr_linear : link.rate_bps_hz;
}

QosState encode_state(const LinkReport& report, const RewardConfig& cfg) {
    QosState s = QosState::zeros(report.users.size());
    for (std::size_t u = 0; u < report.users.size(); ++u)
        s.bits[u] = objective_metric(report.users[u], cfg.objective) >= cfg.qos_threshold ? 1 : 0;
    return s;
}

double reward(const LinkReport& report, const RewardConfig& cfg) {
    double total = 0.0;
    std::size_t violations = 0;
    for (const UserLink& link : report.users) {
        const double metric = objective_metric(link, cfg.objective);
        total += metric;
        if (metric < cfg.qos_threshold) ++violations;
    }
    return total - cfg.penalty_weight * static_cast<double>(violations);
}

}  // namespace owc
