#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "owc/channel.hpp"
#include "owc/scenario.hpp"
#include "toy_scenarios.hpp"

using namespace owc;

namespace {

Transmitter downward_tx(Vec3 position, double semi_angle_deg) {
    Transmitter tx;
    tx.id = "tx";
    tx.position = position;
    tx.azimuth_deg = 0.0;
    tx.elevation_deg = -90.0;
    tx.semi_angle_deg = semi_angle_deg;
    tx.power_per_wavelength = {{"red", 1.0}};
    return tx;
}

Receiver upward_rx(Vec3 position, double area_m2 = 1e-4, double fov_deg = 90.0) {
    Receiver rx;
    rx.position = position;
    rx.area_m2 = area_m2;
    rx.fov_deg = fov_deg;
    return rx;
}

}  // namespace

TEST_CASE("lambertian order from semi-angle") {
    CHECK(lambertian_order(60.0) == doctest::Approx(1.0).epsilon(1e-14));
    // frozen from an independent high-precision evaluation of -ln2/ln(cos x)
    CHECK(lambertian_order(42.0) == doctest::Approx(2.3348954476660027).epsilon(1e-14));
    CHECK(lambertian_order(22.0) == doctest::Approx(9.1682011468125175).epsilon(1e-14));

    CHECK_THROWS_AS(lambertian_order(0.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order(90.0), std::domain_error);
    CHECK_THROWS_AS(lambertian_order(-5.0), std::domain_error);

    // strictly decreasing in the semi-angle
    double prev = lambertian_order(1.0);
    for (double a = 2.0; a < 90.0; a += 1.0) {
        const double m = lambertian_order(a);
        CHECK(m < prev);
        CHECK(m > 0.0);
        prev = m;
    }
}

TEST_CASE("boresight vector convention") {
    const Vec3 down = boresight_vector(0.0, -90.0);
    CHECK(down.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(down.z == doctest::Approx(-1.0).epsilon(1e-15));

    const Vec3 v = boresight_vector(45.0, -65.0);
    CHECK(v.x == doctest::Approx(std::cos(deg_to_rad(-65)) * std::cos(deg_to_rad(45))));
    CHECK(v.y == doctest::Approx(std::cos(deg_to_rad(-65)) * std::sin(deg_to_rad(45))));
    CHECK(v.z == doctest::Approx(std::sin(deg_to_rad(-65))));
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("los gain closed form") {
    // boresight-aligned pair, m = 1 (60 deg), A = 1e-4, d = 2
    const Transmitter tx = downward_tx({0, 0, 3}, 60.0);
    const Receiver rx = upward_rx({0, 0, 1});
    CHECK(los_gain(tx, rx) == doctest::Approx(7.9577471545947668e-6).epsilon(1e-14));

    SUBCASE("inverse square: gain at 2d is exactly a quarter") {
        const Receiver far = upward_rx({0, 0, -1});  // d = 4 along the same ray
        const double near_gain = los_gain(tx, rx);
        const double far_gain = los_gain(tx, far);
        CHECK(far_gain == doctest::Approx(near_gain / 4.0).epsilon(1e-12));
        CHECK(far_gain == doctest::Approx(1.9894367886486917e-6).epsilon(1e-14));
    }

    SUBCASE("outside FOV is exactly zero") {
        Receiver narrow = upward_rx({1.0, 0, 1}, 1e-4, 20.0);  // incidence ~26.6 deg > 20
        CHECK(los_gain(tx, narrow) == 0.0);
        narrow.fov_deg = 30.0;  // now inside
        CHECK(los_gain(tx, narrow) > 0.0);
    }

    SUBCASE("receiver behind the source plane sees nothing") {
        const Receiver above = upward_rx({0, 0, 3.5});  // above a downward tx
        CHECK(los_gain(tx, above) == 0.0);
    }

    SUBCASE("receiver facing away sees nothing") {
        Receiver down_facing = upward_rx({0, 0, 1});
        down_facing.orientation = {0, 0, -1};
        CHECK(los_gain(tx, down_facing) == 0.0);
    }

    SUBCASE("coincident positions rejected") {
        const Receiver on_top = upward_rx({0, 0, 3});
        CHECK_THROWS_AS(los_gain(tx, on_top), std::domain_error);
    }
}

TEST_CASE("room discretization") {
    Room room;  // 4 x 4 x 3

    SUBCASE("element counts match face-by-face tiling") {
        CHECK(discretize_room(room, 0.05).size() == 32000);
        CHECK(discretize_room(room, 0.20).size() == 2000);
        Room unit;
        unit.width = unit.length = unit.height = 1.0;
        CHECK(discretize_room(unit, 1.0).size() == 6);
    }

    SUBCASE("areas sum to the interior surface area") {
        for (const double grid : {0.05, 0.20, 0.3}) {
            double total = 0.0;
            for (const auto& e : discretize_room(room, grid)) total += e.area_m2;
            CHECK(total == doctest::Approx(room.surface_area()).epsilon(1e-3));
        }
    }

    SUBCASE("elements carry their face's reflectance and an inward unit normal") {
        for (const auto& e : discretize_room(room, 0.5)) {
            CHECK(e.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
            if (e.center.z == 0.0) CHECK(e.reflectance == room.rho_floor);
            if (e.center.z == room.height) CHECK(e.reflectance == room.rho_ceiling);
            // normals point into the room
            const Vec3 interior{2.0, 2.0, 1.5};
            CHECK((interior - e.center).dot(e.normal) > 0.0);
        }
    }

    SUBCASE("invalid grids rejected") {
        CHECK_THROWS_AS(discretize_room(room, 0.0), std::domain_error);
        CHECK_THROWS_AS(discretize_room(room, -0.1), std::domain_error);
        CHECK_THROWS_AS(discretize_room(room, 3.5), std::domain_error);  // > min dimension
    }
}

TEST_CASE("first-order bounce gain") {
    Room room;
    const Transmitter tx = downward_tx({1, 1, 3}, 42.0);
    const Receiver rx = upward_rx({2.5, 2.5, 1}, 2e-5, 85.0);

    SUBCASE("zero reflectance, zero gain") {
        room.rho_walls = room.rho_ceiling = room.rho_floor = 0.0;
        CHECK(first_order_gain(tx, rx, discretize_room(room, 0.25)) == 0.0);
    }

    SUBCASE("doubling every reflectance doubles the gain exactly") {
        room.rho_walls = room.rho_ceiling = room.rho_floor = 0.4;
        const auto elems = discretize_room(room, 0.25);
        room.rho_walls = room.rho_ceiling = room.rho_floor = 0.8;
        const auto elems2 = discretize_room(room, 0.25);
        const double g1 = first_order_gain(tx, rx, elems);
        const double g2 = first_order_gain(tx, rx, elems2);
        CHECK(g2 == 2.0 * g1);
    }

    SUBCASE("diffuse bounce is weaker than an unobstructed boresight link") {
        const auto elems = discretize_room(room, 0.05);
        const Receiver center = upward_rx({1, 1, 1}, 2e-5, 85.0);  // on the Pico boresight
        CHECK(first_order_gain(tx, center, elems) < los_gain(tx, center));
        CHECK(first_order_gain(tx, center, elems) > 0.0);
    }
}

TEST_CASE("second-order bounce gain") {
    Room room;
    const Transmitter tx = downward_tx({1, 1, 3}, 42.0);
    const Receiver rx = upward_rx({2.5, 2.5, 1}, 2e-5, 85.0);

    SUBCASE("zero reflectance, zero gain") {
        room.rho_walls = room.rho_ceiling = room.rho_floor = 0.0;
        CHECK(second_order_gain(tx, rx, discretize_room(room, 1.0)) == 0.0);
    }

    SUBCASE("quadratic in a uniform reflectance scaling") {
        room.rho_walls = room.rho_ceiling = room.rho_floor = 0.25;
        const auto elems = discretize_room(room, 0.5);
        room.rho_walls = room.rho_ceiling = room.rho_floor = 0.5;
        const auto elems2 = discretize_room(room, 0.5);
        const double g1 = second_order_gain(tx, rx, elems);
        const double g2 = second_order_gain(tx, rx, elems2);
        CHECK(g2 == doctest::Approx(4.0 * g1).epsilon(1e-12));
    }

    SUBCASE("coplanar element pair contributes nothing") {
        SurfaceElement a{{1, 0, 1}, {0, 1, 0}, 0.04, 0.8};
        SurfaceElement b{{3, 0, 1}, {0, 1, 0}, 0.04, 0.8};  // same wall plane
        const Transmitter wall_tx = downward_tx({2, 2, 3}, 42.0);
        Receiver wall_rx = upward_rx({2, 2, 1});
        wall_rx.orientation = {0, -1, 0};  // faces the wall, so each element is visible
        CHECK(first_order_gain(wall_tx, wall_rx, {a, b}) > 0.0);
        CHECK(second_order_gain(wall_tx, wall_rx, {a, b}) == 0.0);
    }

    SUBCASE("bounce ordering depends on beam visibility") {
        // Near the beam the walls carry strong single-bounce power; far from
        // it the twice-reflected ceiling glow dominates, because the floor
        // that takes the direct hit is invisible to an upward detector.
        const auto elems = discretize_room(room, 0.2);
        const Receiver under_beam = upward_rx({1, 1, 1}, 2e-5, 85.0);
        CHECK(second_order_gain(tx, under_beam, elems) <
              first_order_gain(tx, under_beam, elems));
        const Receiver far_corner = upward_rx({2.5, 2.5, 1}, 2e-5, 85.0);
        CHECK(second_order_gain(tx, far_corner, elems) >
              first_order_gain(tx, far_corner, elems));
    }
}

TEST_CASE("gain matrix assembly") {
    using owc::test::toy_scenario;

    SUBCASE("zero reflectance reduces to pure LOS") {
        Scenario s = toy_scenario(2, 2, 1);
        s.room.rho_walls = s.room.rho_ceiling = s.room.rho_floor = 0.0;
        const auto gains = compute_gain_matrix(s);
        for (std::size_t u = 0; u < 2; ++u) {
            for (std::size_t l = 0; l < 2; ++l) {
                CHECK(gains.at(u, l).first_order == 0.0);
                CHECK(gains.at(u, l).second_order == 0.0);
                CHECK(gains.at(u, l).total() ==
                      los_gain(s.transmitters[l], s.receivers[u]));
            }
        }
    }

    SUBCASE("entries are non-negative and decompose") {
        const Scenario s = toy_scenario(3, 2, 2);
        const auto gains = compute_gain_matrix(s);
        for (const auto& g : gains.entries) {
            CHECK(g.los >= 0.0);
            CHECK(g.first_order >= 0.0);
            CHECK(g.second_order >= 0.0);
            CHECK(g.total() == g.los + g.first_order + g.second_order);
        }
    }

    SUBCASE("factored second-order path matches the naive pair sum") {
        const Scenario s = toy_scenario(2, 2, 1);
        const auto gains = compute_gain_matrix(s);
        const auto elems = discretize_room(s.room, s.room.grid_second);
        for (std::size_t u = 0; u < 2; ++u)
            for (std::size_t l = 0; l < 2; ++l)
                CHECK(gains.at(u, l).second_order ==
                      doctest::Approx(second_order_gain(s.transmitters[l], s.receivers[u], elems))
                          .epsilon(1e-10));
    }

    SUBCASE("a user on an Atto beam axis is served best by that Atto") {
        // The narrow 22-degree cells dominate on their own boresight; the
        // wider Pico loses even directly beneath itself because the Atto
        // boresights pass only 25 degrees off vertical with a 10.17x
        // directivity factor against the Pico's 3.33x.
        Scenario s = owc::test::toy_scenario(1, 1, 1);
        s.transmitters = default_scenario().transmitters;
        // z = 1 intersections of the four Atto boresight rays from (1, 1, 3)
        const Vec3 axis_points[4] = {
            {1.6595, 1.6595, 1.0}, // Atto1, azimuth 45
            {0.3405, 1.6595, 1.0}, // Atto2, azimuth 135
            {0.3405, 0.3405, 1.0}, // Atto3, azimuth 225
            {1.6595, 0.3405, 1.0}, // Atto4, azimuth 315
        };
        s.receivers.clear();
        for (std::size_t k = 0; k < 4; ++k) {
            Receiver rx;
            rx.user_id = k;
            rx.position = axis_points[k];
            rx.area_m2 = 2e-5;
            rx.fov_deg = 85.0;
            rx.responsivity_A_per_W = 0.4;
            s.receivers.push_back(rx);
        }
        const auto gains = compute_gain_matrix(s);
        for (std::size_t u = 0; u < 4; ++u) {
            std::size_t best = 0;
            for (std::size_t l = 1; l < 5; ++l)
                if (gains.at(u, l).total() > gains.at(u, best).total()) best = l;
            CHECK(best == u + 1);  // transmitter 0 is the Pico
        }
    }

    SUBCASE("permuting user order permutes rows identically") {
        Scenario s = toy_scenario(3, 2, 2);
        const auto gains = compute_gain_matrix(s);
        Scenario permuted = s;
        std::swap(permuted.receivers[0], permuted.receivers[2]);
        permuted.receivers[0].user_id = 0;
        permuted.receivers[2].user_id = 2;
        const auto gains2 = compute_gain_matrix(permuted);
        for (std::size_t l = 0; l < 2; ++l) {
            CHECK(gains2.at(0, l).total() == gains.at(2, l).total());
            CHECK(gains2.at(2, l).total() == gains.at(0, l).total());
            CHECK(gains2.at(1, l).total() == gains.at(1, l).total());
        }
    }
}
