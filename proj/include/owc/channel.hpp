#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "owc/vec3.hpp"

namespace owc {

struct Scenario;

enum class CellKind { Micro, Pico, Atto };

struct Room {
    double width = 4.0;   // x extent, m
    double length = 4.0;  // y extent, m
    double height = 3.0;  // z extent, m
    double rho_walls = 0.8;
    double rho_ceiling = 0.8;
    double rho_floor = 0.3;
    double grid_first = 0.05;   // reflection element edge, first bounce
    double grid_second = 0.20;  // reflection element edge, second bounce

    double min_dimension() const;
    double surface_area() const;
};

struct Transmitter {
    std::string id;
    CellKind cell_kind = CellKind::Pico;
    Vec3 position;
    double azimuth_deg = 0.0;    // from +x toward +y
    double elevation_deg = -90.0;  // -90 = straight down
    double semi_angle_deg = 42.0;  // semi-angle at half power
    std::map<std::string, double> power_per_wavelength;  // label -> optical W
    int num_emitters = 1;  // metadata only
};

struct Receiver {
    std::size_t user_id = 0;
    Vec3 position;
    double area_m2 = 2e-5;
    double fov_deg = 85.0;  // acceptance half-angle
    double responsivity_A_per_W = 0.4;
    Vec3 orientation{0.0, 0.0, 1.0};  // unit normal, default straight up
};

struct SurfaceElement {
    Vec3 center;
    Vec3 normal;  // unit, inward-facing
    double area_m2 = 0.0;
    double reflectance = 0.0;
};

struct GainBreakdown {
    double los = 0.0;
    double first_order = 0.0;
    double second_order = 0.0;

    double total() const { return los + first_order + second_order; }
};

// DC optical gain from every transmitter to every user.
struct ChannelGainMatrix {
    std::size_t num_users = 0;
    std::size_t num_transmitters = 0;
    std::vector<GainBreakdown> entries;  // row-major [user][transmitter]

    const GainBreakdown& at(std::size_t user, std::size_t tx) const {
        return entries[user * num_transmitters + tx];
    }
    GainBreakdown& at(std::size_t user, std::size_t tx) {
        return entries[user * num_transmitters + tx];
    }
};

// Lambertian mode number m = -ln 2 / ln(cos(semi_angle)).
// Throws std::domain_error unless 0 < semi_angle_deg < 90.
double lambertian_order(double semi_angle_deg);

// Unit boresight vector; azimuth measured from +x toward +y, elevation -90
// pointing straight down.
Vec3 boresight_vector(double azimuth_deg, double elevation_deg);

// Line-of-sight DC gain (m+1) A / (2 pi d^2) cos^m(phi) cos(psi), zero when
// the incidence angle exceeds the receiver FOV or either cosine is negative.
// Throws std::domain_error on coincident positions.
double los_gain(const Transmitter& tx, const Receiver& rx);

// Tiles all six interior faces with square-ish elements of roughly
// grid_edge x grid_edge; element areas are adjusted so they sum exactly to
// each face area. Throws std::domain_error for non-positive or oversized
// grid edges.
std::vector<SurfaceElement> discretize_room(const Room& room, double grid_edge);

// Single-bounce diffuse gain over the given elements, which re-emit as
// first-order Lambertian sources.
double first_order_gain(const Transmitter& tx, const Receiver& rx,
                        const std::vector<SurfaceElement>& elements);

// Two-bounce diffuse gain over ordered element pairs. O(N^2) in the element
// count; compute_gain_matrix uses a factored evaluation of the same sum.
double second_order_gain(const Transmitter& tx, const Receiver& rx,
                         const std::vector<SurfaceElement>& elements);

// Full gain matrix for a scenario: per (user, transmitter) LOS plus first-
// and second-order contributions on the scenario's two reflection grids.
ChannelGainMatrix compute_gain_matrix(const Scenario& scenario);

}  // namespace owc
