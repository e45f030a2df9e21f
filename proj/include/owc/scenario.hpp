#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "owc/agents.hpp"
#include "owc/channel.hpp"
#include "owc/env.hpp"
#include "owc/link.hpp"
#include "owc/vec3.hpp"

namespace owc {

// How seeded user positions were generated; kept so reports can record the
// seed and a saved scenario round-trips.
struct UserPlacement {
    std::size_t count = 0;
    double plane_height = 1.0;
    std::uint64_t seed = 1;
};

struct ReceiverDefaults {
    double area_m2 = 2e-5;
    double fov_deg = 85.0;
    double responsivity_A_per_W = 0.4;
    Vec3 orientation{0.0, 0.0, 1.0};
};

// One threshold per objective so switching the objective keeps QoS sensible.
struct RewardSettings {
    Objective objective = Objective::TotalSinr;
    double qos_threshold_sinr_db = 0.0;
    double qos_threshold_rate_bps_hz = 1.0;
    double penalty_weight = 10.0;
};

struct Scenario {
    std::string name = "unnamed";
    Room room;
    std::vector<std::string> wavelengths = {"red", "yellow"};
    std::vector<Transmitter> transmitters;
    std::vector<Receiver> receivers;  // resolved positions
    std::optional<UserPlacement> placement;
    ReceiverDefaults receiver_defaults;
    NoiseModel noise;
    RewardSettings reward;
    double rate_sinr_scale = 1.0;
    Hyperparams hyperparams;
    SearchOptions search;

    std::size_t num_users() const { return receivers.size(); }
    std::size_t num_slots() const { return transmitters.size() * wavelengths.size(); }

    // Materializes the reward config for the active (or given) objective.
    RewardConfig reward_config() const { return reward_config(reward.objective); }
    RewardConfig reward_config(Objective objective) const;

    // Throws validation_error naming the offending field and constraint.
    void validate() const;
};

// count positions i.i.d. uniform over the room footprint at the given plane
// height; identical across runs for a fixed seed.
std::vector<Vec3> place_users(std::size_t count, std::uint64_t seed, const Room& room,
                              double plane_height = 1.0);

// The bundled default scenario: Table-1-style room, one five-AP angle
// diversity transmitter, two wavelengths, eight seeded users.
Scenario default_scenario();

// JSON (schema 1) serialization. Loading applies documented defaults for
// omitted fields, resolves seeded user placements, and validates.
Scenario scenario_from_json_string(const std::string& text);
std::string scenario_to_json_string(const Scenario& scenario);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace owc
