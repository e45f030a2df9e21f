#include "owc/link.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "owc/errors.hpp"
#include "owc/scenario.hpp"

namespace owc {

Assignment Assignment::zeros(std::size_t users, std::size_t txs, std::size_t wavelengths) {
    Assignment a;
    a.num_users = users;
    a.num_transmitters = txs;
    a.num_wavelengths = wavelengths;
    a.x.assign(users * txs * wavelengths, 0);
    return a;
}

Assignment::Slot Assignment::serving(std::size_t u) const {
    Slot slot;
    std::size_t count = 0;
    for (std::size_t l = 0; l < num_transmitters; ++l) {
        for (std::size_t w = 0; w < num_wavelengths; ++w) {
            if (at(u, l, w)) {
                slot = {l, w};
                ++count;
            }
        }
    }
    if (count != 1)
        throw validation_error("user " + std::to_string(u) + " is assigned to " +
                               std::to_string(count) + " slots (must be exactly 1)");
    return slot;
}

bool Assignment::slot_active(std::size_t l, std::size_t w) const {
    for (std::size_t u = 0; u < num_users; ++u)
        if (at(u, l, w)) return true;
    return false;
}

void Assignment::validate() const {
    for (const std::uint8_t v : x)
        if (v > 1) throw validation_error("assignment tensor entries must be 0 or 1");
    for (std::size_t u = 0; u < num_users; ++u) (void)serving(u);
    for (std::size_t l = 0; l < num_transmitters; ++l) {
        for (std::size_t w = 0; w < num_wavelengths; ++w) {
            std::size_t users_on_slot = 0;
            for (std::size_t u = 0; u < num_users; ++u) users_on_slot += at(u, l, w);
            if (users_on_slot > 1)
                throw validation_error("slot (tx " + std::to_string(l) + ", wavelength " +
                                       std::to_string(w) + ") serves " +
                                       std::to_string(users_on_slot) +
                                       " users (at most 1 per wavelength per AP)");
        }
    }
}

double signal_current(std::size_t u, std::size_t l, std::size_t w,
                      const ChannelGainMatrix& gains, const Scenario& scenario) {
    const std::string& label = scenario.wavelengths.at(w);
    const Transmitter& tx = scenario.transmitters.at(l);
    const auto it = tx.power_per_wavelength.find(label);
    if (it == tx.power_per_wavelength.end())
        throw validation_error("transmitter '" + tx.id + "' defines no power for wavelength '" +
                               label + "'");
    return scenario.receivers.at(u).responsivity_A_per_W * it->second * gains.at(u, l).total();
}

namespace {

struct SinrParts {
    double signal_A = 0.0;
    double interference_A2 = 0.0;
    double noise_A2 = 0.0;
    double sinr = 0.0;
};

SinrParts sinr_parts(std::size_t u, const Assignment& a, const ChannelGainMatrix& gains,
                     const NoiseModel& noise, const Scenario& scenario) {
    const Assignment::Slot slot = a.serving(u);

    SinrParts parts;
    parts.signal_A = signal_current(u, slot.tx, slot.wavelength, gains, scenario);

    // Other APs radiating on the serving wavelength; the receiver's optical
    // filter passes that wavelength only.
    double total_current = parts.signal_A;
    for (std::size_t l = 0; l < a.num_transmitters; ++l) {
        if (l == slot.tx || !a.slot_active(l, slot.wavelength)) continue;
        const double current = signal_current(u, l, slot.wavelength, gains, scenario);
        parts.interference_A2 += current * current;
        total_current += current;
    }

    parts.noise_A2 = noise.variance(total_current);
    parts.sinr = parts.signal_A * parts.signal_A / (parts.noise_A2 + parts.interference_A2);
    return parts;
}

}  // namespace

double sinr(std::size_t u, const Assignment& a, const ChannelGainMatrix& gains,
            const NoiseModel& noise, const Scenario& scenario) {
    return sinr_parts(u, a, gains, noise, scenario).sinr;
}

double rate(double sinr_linear, double sinr_scale) {
    if (sinr_linear < 0.0)
        throw std::domain_error("rate: sinr must be >= 0, got " + std::to_string(sinr_linear));
    return std::log2(1.0 + sinr_scale * sinr_linear);
}

LinkReport evaluate_assignment(const Assignment& a, const ChannelGainMatrix& gains,
                               const Scenario& scenario) {
    a.validate();

    LinkReport report;
    report.users.reserve(a.num_users);
    for (std::size_t u = 0; u < a.num_users; ++u) {
        const Assignment::Slot slot = a.serving(u);
        const SinrParts parts = sinr_parts(u, a, gains, scenario.noise, scenario);

        UserLink link;
        link.user_id = u;
        link.tx = slot.tx;
        link.wavelength = slot.wavelength;
        link.signal_A = parts.signal_A;
        link.interference_A2 = parts.interference_A2;
        link.noise_A2 = parts.noise_A2;
        link.sinr_linear = parts.sinr;
        link.sinr_db = 10.0 * std::log10(parts.sinr);
        link.rate_bps_hz = rate(parts.sinr, scenario.rate_sinr_scale);
        report.users.push_back(link);

        report.total_sinr_linear += link.sinr_linear;
        report.total_sinr_db += link.sinr_db;
        report.total_rate += link.rate_bps_hz;
    }
    return report;
}

}  // namespace owc
