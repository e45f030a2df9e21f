#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "owc/channel.hpp"

namespace owc {

struct Scenario;

// Binary user x transmitter x wavelength tensor mapping each user to the
// (access point, wavelength) slot serving it.
struct Assignment {
    std::size_t num_users = 0;
    std::size_t num_transmitters = 0;
    std::size_t num_wavelengths = 0;
    std::vector<std::uint8_t> x;  // [user][tx][wavelength]

    static Assignment zeros(std::size_t users, std::size_t txs, std::size_t wavelengths);

    std::uint8_t& at(std::size_t u, std::size_t l, std::size_t w) {
        return x[(u * num_transmitters + l) * num_wavelengths + w];
    }
    std::uint8_t at(std::size_t u, std::size_t l, std::size_t w) const {
        return x[(u * num_transmitters + l) * num_wavelengths + w];
    }

    struct Slot {
        std::size_t tx = 0;
        std::size_t wavelength = 0;
        bool operator==(const Slot&) const = default;
    };

    // The unique slot serving user u; throws validation_error if the user is
    // not served exactly once.
    Slot serving(std::size_t u) const;

    // True when some user is assigned to (tx l, wavelength w). Idle slots are
    // dark and cause no interference.
    bool slot_active(std::size_t l, std::size_t w) const;

    // Checks every tensor invariant; throws validation_error naming the
    // violated constraint.
    void validate() const;

    bool operator==(const Assignment&) const = default;
};

struct NoiseModel {
    double bandwidth_hz = 5e8;
    double thermal_psd_A2_per_Hz = 4.7e-22;
    bool include_shot = true;

    static constexpr double electron_charge = 1.602e-19;  // C

    // Electrical noise power for a given total received photocurrent.
    double variance(double total_current_A) const {
        double v = thermal_psd_A2_per_Hz * bandwidth_hz;
        if (include_shot) v += 2.0 * electron_charge * total_current_A * bandwidth_hz;
        return v;
    }
};

struct UserLink {
    std::size_t user_id = 0;
    std::size_t tx = 0;
    std::size_t wavelength = 0;
    double signal_A = 0.0;
    double interference_A2 = 0.0;
    double noise_A2 = 0.0;
    double sinr_linear = 0.0;
    double sinr_db = 0.0;
    double rate_bps_hz = 0.0;
};

struct LinkReport {
    std::vector<UserLink> users;
    double total_sinr_linear = 0.0;
    double total_sinr_db = 0.0;
    double total_rate = 0.0;
};

// Received signal photocurrent for user u listening to transmitter l on
// wavelength index w: responsivity * P_w(l) * H[u][l]. Throws
// validation_error when the transmitter defines no power for the wavelength.
double signal_current(std::size_t u, std::size_t l, std::size_t w,
                      const ChannelGainMatrix& gains, const Scenario& scenario);

// Linear SINR of user u under assignment a. Interference comes from other
// transmitters that are active on u's serving wavelength; WDMA removes
// same-AP interference entirely.
double sinr(std::size_t u, const Assignment& a, const ChannelGainMatrix& gains,
            const NoiseModel& noise, const Scenario& scenario);

// Shannon spectral efficiency log2(1 + scale * sinr). Throws
// std::domain_error for negative input.
double rate(double sinr_linear, double sinr_scale = 1.0);

// Full per-user report plus totals for a validated assignment.
LinkReport evaluate_assignment(const Assignment& a, const ChannelGainMatrix& gains,
                               const Scenario& scenario);

}  // namespace owc
