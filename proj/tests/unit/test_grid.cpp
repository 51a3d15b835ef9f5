#include "bathlab/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace bathlab;

TEST_SUITE("grid")
{
    TEST_CASE("velocity grid geometry")
    {
        const VelocityGrid g = build_velocity_grid(6.0, 10);
        CHECK(g.size() == 1000);
        CHECK(g.spacing() == doctest::Approx(1.2));
        CHECK(g.weight() == doctest::Approx(1.728));
        CHECK(g.coordinate(0) == doctest::Approx(-5.4));
        CHECK(g.coordinate(9) == doctest::Approx(5.4));
        CHECK(g.max_speed() == doctest::Approx(5.4 * std::sqrt(3.0)));
        for (std::size_t idx : {std::size_t{0}, std::size_t{123}, std::size_t{999}}) {
            const auto t = g.triple(idx);
            CHECK(g.index(t[0], t[1], t[2]) == idx);
            CHECK(g.node(idx)[0] == doctest::Approx(g.coordinate(t[0])));
            CHECK(g.node(idx)[2] == doctest::Approx(g.coordinate(t[2])));
        }
    }

    TEST_CASE("invalid grids are configuration errors")
    {
        CHECK_THROWS_AS(build_velocity_grid(0.0, 10), ConfigError);
        CHECK_THROWS_AS(build_velocity_grid(-1.0, 10), ConfigError);
        CHECK_THROWS_AS(build_velocity_grid(6.0, 9), ConfigError);
        CHECK_THROWS_AS(build_velocity_grid(6.0, 0), ConfigError);
    }

    TEST_CASE("midpoint integral of the Maxwellian")
    {
        // Gaussian tails beyond |v| = 6 are below 1e-15; the midpoint rule is spectrally accurate.
        const VelocityGrid g = build_velocity_grid(6.0, 32);
        std::vector<double> m(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            m[i] = std::exp(-norm_sq(g.node(i)));
        CHECK(g.integrate(m) == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-12));
        CHECK(g.l1(m) == doctest::Approx(g.integrate(m)));
    }

    TEST_CASE("sphere quadrature moments")
    {
        for (int polar : {6, 7, 8, 16}) {
            const SphereQuadrature s = build_sphere_quadrature(polar, 2 * polar);
            CHECK(s.size() == static_cast<std::size_t>(polar * 2 * polar));
            CHECK(s.integrate([](const Vec3&) { return 1.0; }) == doctest::Approx(4.0 * pi).epsilon(1e-13));
            CHECK(s.integrate([](const Vec3& w) { return w[2] * w[2]; }) ==
                  doctest::Approx(4.0 * pi / 3.0).epsilon(1e-13));
            CHECK(std::abs(s.integrate([](const Vec3& w) { return w[0]; })) < 1e-13);
            for (const Vec3& w : s.directions)
                CHECK(norm(w) == doctest::Approx(1.0).epsilon(1e-15));
        }
    }

    TEST_CASE("hemisphere rule integrates |e_z . omega| exactly")
    {
        const SphereQuadrature s = build_sphere_quadrature(8, 16);
        CHECK(std::abs(s.integrate([](const Vec3& w) { return std::abs(w[2]); }) - 2.0 * pi) < 1e-10);
    }

    TEST_CASE("antipodal folding preserves even integrands")
    {
        const SphereQuadrature s = build_sphere_quadrature(6, 12);
        const SphereQuadrature f = fold_antipodal(s);
        CHECK(f.size() == s.size() / 2);
        const Vec3 a{0.3, -1.1, 0.7};
        auto even = [&](const Vec3& w) { return std::abs(dot(a, w)) + w[0] * w[1]; };
        CHECK(f.integrate(even) == doctest::Approx(s.integrate(even)).epsilon(1e-13));
        const SphereQuadrature odd_rule = build_sphere_quadrature(5, 9);
        CHECK(fold_antipodal(odd_rule).size() == odd_rule.size());
    }

    TEST_CASE("spatial modes ordering")
    {
        const SpatialModes m = build_spatial_modes(1);
        CHECK(m.size() == 27);
        CHECK(m.mode(m.zero_index()) == Mode{0, 0, 0});
        CHECK(m.points_per_axis() == 3);
        for (std::size_t i = 0; i < m.size(); ++i) {
            const Mode& n = m.mode(i);
            CHECK(m.mode(m.negated(i)) == Mode{-n[0], -n[1], -n[2]});
            CHECK(m.index_of(n) == i);
        }
        CHECK_THROWS(m.index_of(Mode{2, 0, 0}));
        CHECK(build_spatial_modes(0).size() == 1);
    }
}
