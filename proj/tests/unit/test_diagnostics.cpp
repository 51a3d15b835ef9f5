#include "bathlab/diagnostics.hpp"
#include "bathlab/evolution.hpp"

#include <doctest.h>

#include <random>

using namespace bathlab;

TEST_SUITE("diagnostics")
{
    TEST_CASE("exact exponential is recovered")
    {
        std::vector<double> t, v;
        for (int k = 0; k < 20; ++k) {
            t.push_back(0.5 * k);
            v.push_back(3.0 * std::exp(-0.7 * t.back()));
        }
        const FitResult f = fit_exponential_rate(t, v, 0.0, 100.0);
        CHECK(f.c1 == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(f.c0 == doctest::Approx(0.7).epsilon(1e-10));
        CHECK(f.residual <= 1e-12);
        CHECK(f.samples == 20);
    }

    TEST_CASE("constant values give a zero rate")
    {
        const std::vector<double> t{0, 1, 2, 3, 4, 5}, v(6, 2.5);
        const FitResult f = fit_exponential_rate(t, v, 0.0, 5.0);
        CHECK(std::abs(f.c0) <= 1e-14);
        CHECK(f.c1 == doctest::Approx(2.5));
    }

    TEST_CASE("seeded 1% noise keeps the rate within 5%")
    {
        std::mt19937_64 rng(42);
        std::normal_distribution<double> noise(0.0, 0.01);
        std::vector<double> t, v;
        for (int k = 0; k <= 40; ++k) {
            t.push_back(0.25 * k);
            v.push_back(2.0 * std::exp(-0.5 * t.back()) * (1.0 + noise(rng)));
        }
        const FitResult f = fit_exponential_rate(t, v, 0.0, 10.0);
        CHECK(std::abs(f.c0 / 0.5 - 1.0) <= 0.05);
    }

    TEST_CASE("fit is scale equivariant")
    {
        std::vector<double> t, v, w;
        for (int k = 0; k < 10; ++k) {
            t.push_back(k);
            v.push_back(std::exp(-0.3 * k) * (1.0 + 0.01 * (k % 3)));
            w.push_back(4.0 * v.back());
        }
        const FitResult a = fit_exponential_rate(t, v, 0, 9), b = fit_exponential_rate(t, w, 0, 9);
        CHECK(b.c1 == doctest::Approx(4.0 * a.c1).epsilon(1e-13));
        CHECK(b.c0 == doctest::Approx(a.c0).epsilon(1e-12));
    }

    TEST_CASE("fit errors")
    {
        const std::vector<double> t{0, 1, 2, 3, 4}, bad{1, 1, 0, 1, 1}, ok{1, 1, 1, 1, 1};
        CHECK_THROWS_AS(fit_exponential_rate(t, bad, 0, 4), NumericalError);
        CHECK_THROWS_AS(fit_exponential_rate(t, ok, 0, 3), NumericalError);
    }

    TEST_CASE("control functions")
    {
        const std::vector<double> t{0, 0.5, 1.0, 1.5}, plain{2.0, 1.0, 3.0, 0.5}, weighted{1, 2, 3, 4};
        const ControlFunctions c = control_functions(t, plain, weighted, 0.0);
        CHECK(c.integral[0] == 0.0);
        CHECK(c.running_max == std::vector<double>{2.0, 2.0, 3.0, 3.0});
        CHECK(c.integral[3] == doctest::Approx(0.25 * (3 + 5 + 7)));
        const ControlFunctions e = control_functions(t, plain, weighted, 1.0);
        for (std::size_t k = 1; k < t.size(); ++k) {
            CHECK(e.running_max[k] >= e.running_max[k - 1]);
            CHECK(e.integral[k] >= e.integral[k - 1]);
        }
        CHECK(e.running_max[3] == doctest::Approx(3.0 * std::exp(1.0)));
    }

    TEST_CASE("C_infinity definition")
    {
        const VelocityGrid g = build_velocity_grid(6.0, 6);
        const SpatialModes modes = build_spatial_modes(1);
        Eigen::MatrixXcd g0 = Eigen::MatrixXcd::Zero(216, 27);
        g0.col(static_cast<Eigen::Index>(modes.zero_index())) = maxwellian(g).cast<cplx>();
        CHECK(compute_C_infinity(g0, modes, g) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(compute_C_infinity(Eigen::MatrixXcd(2.0 * g0), modes, g) == doctest::Approx(2.0).epsilon(1e-15));
        // unit total mass over torus x velocity: (2 pi)^3 w sum g0 = 1
        const double w = g.weight();
        const Eigen::MatrixXcd unit = g0 / (torus_volume * w * maxwellian(g).sum());
        CHECK(compute_C_infinity(unit, modes, g) ==
              doctest::Approx(1.0 / (torus_volume * w * maxwellian(g).sum())).epsilon(1e-14));
        CHECK_THROWS_AS(compute_C_infinity(Eigen::MatrixXcd(-g0), modes, g), ConfigError);
    }

    TEST_CASE("L1 distance: zero, homogeneity and mode-sum bound")
    {
        const VelocityGrid g = build_velocity_grid(6.0, 6);
        const SpatialModes modes = build_spatial_modes(1);
        const Collocation col(modes, 3);
        DistributionState s;
        s.coeff = Eigen::MatrixXcd::Zero(216, 27);
        CHECK(l1_distance_to_maxwellian(s, col, g) == 0.0);
        const auto p = static_cast<Eigen::Index>(modes.index_of({1, 0, 0}));
        const auto q = static_cast<Eigen::Index>(modes.index_of({-1, 0, 0}));
        for (Eigen::Index i = 0; i < 216; ++i) {
            s.coeff(i, p) = cplx(0.5, 0.1) * std::exp(-norm_sq(g.node(static_cast<std::size_t>(i))));
            s.coeff(i, q) = std::conj(s.coeff(i, p));
        }
        const double d1 = l1_distance_to_maxwellian(s, col, g);
        DistributionState s3 = s;
        s3.coeff *= 3.0;
        CHECK(d1 > 0.0);
        CHECK(l1_distance_to_maxwellian(s3, col, g) == doctest::Approx(3.0 * d1).epsilon(1e-14));
        CHECK(d1 <= mode_sum_norm(s, g));
    }

    TEST_CASE("norms obey the triangle inequality on random pairs")
    {
        const VelocityGrid g = build_velocity_grid(6.0, 6);
        std::mt19937_64 rng(9);
        for (int k = 0; k < 10; ++k) {
            const Eigen::VectorXd a = random_smooth_vector(g, rng), b = random_smooth_vector(g, rng);
            const Eigen::VectorXd c = a + b;
            auto w = [&](const Eigen::VectorXd& f) {
                return weighted_l1(g, std::span<const double>(f.data(), static_cast<std::size_t>(f.size())), 5);
            };
            CHECK(w(c) <= (w(a) + w(b)) * (1.0 + 1e-14)); // roundoff when the supports do not overlap
            CHECK(w(Eigen::VectorXd(-2.0 * a)) == doctest::Approx(2.0 * w(a)).epsilon(1e-15));
        }
    }

    TEST_CASE("inequality probe suite reports positive Lambda and finite ratios")
    {
        const KernelAssembly k = assemble_kernels(build_velocity_grid(6.0, 8), 0.01, 1.0);
        const CollisionWorkspace ws(k.grid, build_sphere_quadrature(4, 8), false);
        const InequalityReport r = inequality_probe_suite(k, ws, 10, 3, 5, 1);
        CHECK(r.points_per_axis == 8);
        CHECK(r.lambda_nu0 > 0.0);
        CHECK(r.lambda_nu1 > 0.0);
        CHECK(std::isfinite(r.k0_ratio));
        CHECK(std::isfinite(r.k1_ratio));
        CHECK(std::isfinite(r.q_ratio));
        CHECK(r.q_ratio > 0.0);
    }

    TEST_CASE("K0 ratio for the Maxwellian equals the detailed-balance value")
    {
        const KernelAssembly k = assemble_kernels(build_velocity_grid(6.0, 8), 0.0, 1.0);
        const auto& g = k.grid;
        auto w = [&](const Eigen::VectorXd& f, double m) {
            return weighted_l1(g, std::span<const double>(f.data(), static_cast<std::size_t>(f.size())), m);
        };
        const Eigen::VectorXd m = k.maxwellian;
        CHECK(w(k.K0 * m, 5) / w(m, 1) == doctest::Approx(w(k.nu0.cwiseProduct(m), 5) / w(m, 1)).epsilon(1e-13));
    }
}
