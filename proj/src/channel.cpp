#include "owc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "owc/errors.hpp"
#include "owc/parallel.hpp"
#include "owc/scenario.hpp"

namespace owc {

double Room::min_dimension() const { return std::min({width, length, height}); }

double Room::surface_area() const {
    return 2.0 * (width * length + width * height + length * height);
}

double lambertian_order(double semi_angle_deg) {
    if (!(semi_angle_deg > 0.0 && semi_angle_deg < 90.0))
        throw std::domain_error("semi_angle_deg must satisfy 0 < angle < 90, got " +
                                std::to_string(semi_angle_deg));
    return -std::log(2.0) / std::log(std::cos(deg_to_rad(semi_angle_deg)));
}

Vec3 boresight_vector(double azimuth_deg, double elevation_deg) {
    const double az = deg_to_rad(azimuth_deg);
    const double el = deg_to_rad(elevation_deg);
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

double los_gain(const Transmitter& tx, const Receiver& rx) {
    const Vec3 d = rx.position - tx.position;
    const double dist_sq = d.norm_sq();
    if (dist_sq == 0.0)
        throw std::domain_error("los_gain: transmitter and receiver positions coincide");

    const Vec3 dir = d * (1.0 / std::sqrt(dist_sq));
    const double cos_emission = boresight_vector(tx.azimuth_deg, tx.elevation_deg).dot(dir);
    if (cos_emission <= 0.0) return 0.0;

    const Vec3 rx_normal = rx.orientation.normalized();
    const double cos_incidence = rx_normal.dot(dir * -1.0);
    if (cos_incidence <= 0.0) return 0.0;
    if (cos_incidence < std::cos(deg_to_rad(rx.fov_deg))) return 0.0;  // outside FOV

    const double m = lambertian_order(tx.semi_angle_deg);
    return (m + 1.0) * rx.area_m2 / (2.0 * kPi * dist_sq) *
           std::pow(cos_emission, m) * cos_incidence;
}

namespace {

struct Face {
    Vec3 origin;
    Vec3 u_axis;  // unit
    Vec3 v_axis;  // unit
    double u_len;
    double v_len;
    Vec3 normal;
    double reflectance;
};

}  // namespace

std::vector<SurfaceElement> discretize_room(const Room& room, double grid_edge) {
    if (!(grid_edge > 0.0))
        throw std::domain_error("grid_edge must be > 0, got " + std::to_string(grid_edge));
    if (grid_edge > room.min_dimension())
        throw std::domain_error("grid_edge " + std::to_string(grid_edge) +
                                " exceeds smallest room dimension " +
                                std::to_string(room.min_dimension()));

    const double w = room.width, l = room.length, h = room.height;
    const Face faces[6] = {
        // floor z=0 and ceiling z=h
        {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, w, l, {0, 0, 1}, room.rho_floor},
        {{0, 0, h}, {1, 0, 0}, {0, 1, 0}, w, l, {0, 0, -1}, room.rho_ceiling},
        // walls y=0, y=l
        {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}, w, h, {0, 1, 0}, room.rho_walls},
        {{0, l, 0}, {1, 0, 0}, {0, 0, 1}, w, h, {0, -1, 0}, room.rho_walls},
        // walls x=0, x=w
        {{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, l, h, {1, 0, 0}, room.rho_walls},
        {{w, 0, 0}, {0, 1, 0}, {0, 0, 1}, l, h, {-1, 0, 0}, room.rho_walls},
    };

    std::vector<SurfaceElement> elements;
    for (const Face& f : faces) {
        const auto nu = static_cast<std::size_t>(std::lround(f.u_len / grid_edge));
        const auto nv = static_cast<std::size_t>(std::lround(f.v_len / grid_edge));
        const double eu = f.u_len / static_cast<double>(std::max<std::size_t>(nu, 1));
        const double ev = f.v_len / static_cast<double>(std::max<std::size_t>(nv, 1));
        for (std::size_t i = 0; i < std::max<std::size_t>(nu, 1); ++i) {
            for (std::size_t j = 0; j < std::max<std::size_t>(nv, 1); ++j) {
                SurfaceElement e;
                e.center = f.origin + f.u_axis * ((i + 0.5) * eu) + f.v_axis * ((j + 0.5) * ev);
                e.normal = f.normal;
                e.area_m2 = eu * ev;
                e.reflectance = f.reflectance;
                elements.push_back(e);
            }
        }
    }
    return elements;
}

namespace {

// Fraction of the transmitter's power absorbed-and-re-emitted by an element:
// Lambertian emission into the element times its reflectance.
double source_to_element(const Transmitter& tx, double m, const Vec3& boresight,
                         const SurfaceElement& e) {
    const Vec3 d = e.center - tx.position;
    const double dist_sq = d.norm_sq();
    if (dist_sq == 0.0) return 0.0;
    const Vec3 dir = d * (1.0 / std::sqrt(dist_sq));
    const double cos_emission = boresight.dot(dir);
    if (cos_emission <= 0.0) return 0.0;
    const double cos_incidence = e.normal.dot(dir * -1.0);
    if (cos_incidence <= 0.0) return 0.0;
    return (m + 1.0) / (2.0 * kPi * dist_sq) * std::pow(cos_emission, m) *
           cos_incidence * e.area_m2 * e.reflectance;
}

// DC gain from an element, re-radiating as a first-order Lambertian source,
// to the receiver. FOV-gated like the direct link.
double element_to_receiver(const SurfaceElement& e, const Receiver& rx,
                           const Vec3& rx_normal, double cos_fov) {
    const Vec3 d = rx.position - e.center;
    const double dist_sq = d.norm_sq();
    if (dist_sq == 0.0) return 0.0;
    const Vec3 dir = d * (1.0 / std::sqrt(dist_sq));
    const double cos_emission = e.normal.dot(dir);
    if (cos_emission <= 0.0) return 0.0;
    const double cos_incidence = rx_normal.dot(dir * -1.0);
    if (cos_incidence <= 0.0 || cos_incidence < cos_fov) return 0.0;
    return cos_emission * cos_incidence * rx.area_m2 / (kPi * dist_sq);
}

// Geometric coupling between two elements (per unit receiving area, without
// reflectance): cos(emission) cos(incidence) / (pi d^2). Zero unless the
// elements face each other.
double element_coupling(const SurfaceElement& a, const SurfaceElement& b) {
    const Vec3 d = b.center - a.center;
    const double dist_sq = d.norm_sq();
    if (dist_sq == 0.0) return 0.0;
    const Vec3 dir = d * (1.0 / std::sqrt(dist_sq));
    const double cos_out = a.normal.dot(dir);
    if (cos_out <= 0.0) return 0.0;
    const double cos_in = b.normal.dot(dir * -1.0);
    if (cos_in <= 0.0) return 0.0;
    return cos_out * cos_in / (kPi * dist_sq);
}

}  // namespace

double first_order_gain(const Transmitter& tx, const Receiver& rx,
                        const std::vector<SurfaceElement>& elements) {
    const double m = lambertian_order(tx.semi_angle_deg);
    const Vec3 boresight = boresight_vector(tx.azimuth_deg, tx.elevation_deg);
    const Vec3 rx_normal = rx.orientation.normalized();
    const double cos_fov = std::cos(deg_to_rad(rx.fov_deg));

    double gain = 0.0;
    for (const SurfaceElement& e : elements)
        gain += source_to_element(tx, m, boresight, e) *
                element_to_receiver(e, rx, rx_normal, cos_fov);
    return gain;
}

double second_order_gain(const Transmitter& tx, const Receiver& rx,
                         const std::vector<SurfaceElement>& elements) {
    const double m = lambertian_order(tx.semi_angle_deg);
    const Vec3 boresight = boresight_vector(tx.azimuth_deg, tx.elevation_deg);
    const Vec3 rx_normal = rx.orientation.normalized();
    const double cos_fov = std::cos(deg_to_rad(rx.fov_deg));
    const std::size_t n = elements.size();

    std::vector<double> src(n), rcv(n);
    for (std::size_t i = 0; i < n; ++i) {
        src[i] = source_to_element(tx, m, boresight, elements[i]);
        rcv[i] = element_to_receiver(elements[i], rx, rx_normal, cos_fov);
    }

    double gain = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (rcv[j] == 0.0) continue;
        const double absorb_j = elements[j].area_m2 * elements[j].reflectance;
        double onto_j = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j || src[i] == 0.0) continue;
            onto_j += src[i] * element_coupling(elements[i], elements[j]);
        }
        gain += onto_j * absorb_j * rcv[j];
    }
    return gain;
}

ChannelGainMatrix compute_gain_matrix(const Scenario& scenario) {
    const auto& txs = scenario.transmitters;
    const auto& rxs = scenario.receivers;
    const std::size_t num_tx = txs.size();
    const std::size_t num_rx = rxs.size();

    ChannelGainMatrix gains;
    gains.num_users = num_rx;
    gains.num_transmitters = num_tx;
    gains.entries.resize(num_rx * num_tx);

    const auto elements_first = discretize_room(scenario.room, scenario.room.grid_first);
    const auto elements_second = discretize_room(scenario.room, scenario.room.grid_second);

    // LOS and first-order bounce, one independent task per (user, tx) pair.
    parallel_chunks(num_rx * num_tx, 1, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t u = k / num_tx;
            const std::size_t l = k % num_tx;
            GainBreakdown& g = gains.at(u, l);
            g.los = los_gain(txs[l], rxs[u]);
            g.first_order = first_order_gain(txs[l], rxs[u], elements_first);
        }
    });

    // Second-order bounce, factored: H2[u][l] = sum_j (sum_i src_l[i] c_ij)
    // * area_j * rho_j * rcv_u[j]. The inner sums run over ascending i for a
    // fixed j, so results do not depend on how columns are partitioned.
    const std::size_t n = elements_second.size();
    std::vector<double> src(num_tx * n);  // [l][i]
    std::vector<double> rcv(num_rx * n);  // [u][j]
    for (std::size_t l = 0; l < num_tx; ++l) {
        const double m = lambertian_order(txs[l].semi_angle_deg);
        const Vec3 boresight = boresight_vector(txs[l].azimuth_deg, txs[l].elevation_deg);
        for (std::size_t i = 0; i < n; ++i)
            src[l * n + i] = source_to_element(txs[l], m, boresight, elements_second[i]);
    }
    for (std::size_t u = 0; u < num_rx; ++u) {
        const Vec3 rx_normal = rxs[u].orientation.normalized();
        const double cos_fov = std::cos(deg_to_rad(rxs[u].fov_deg));
        for (std::size_t j = 0; j < n; ++j)
            rcv[u * n + j] = element_to_receiver(elements_second[j], rxs[u], rx_normal, cos_fov);
    }

    std::vector<double> onto(num_tx * n, 0.0);  // [l][j]
    parallel_chunks(n, 16, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                if (i == j) continue;
                const double c = element_coupling(elements_second[i], elements_second[j]);
                if (c == 0.0) continue;
                for (std::size_t l = 0; l < num_tx; ++l)
                    onto[l * n + j] += src[l * n + i] * c;
            }
        }
    });

    for (std::size_t u = 0; u < num_rx; ++u) {
        for (std::size_t l = 0; l < num_tx; ++l) {
            double h2 = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                h2 += onto[l * n + j] * elements_second[j].area_m2 *
                      elements_second[j].reflectance * rcv[u * n + j];
            gains.at(u, l).second_order = h2;
        }
    }
    return gains;
}

}  // namespace owc
