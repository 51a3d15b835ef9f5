#include "bathlab/linalg.hpp"

#include <doctest.h>

#include <random>

using namespace bathlab;

TEST_SUITE("linalg")
{
    TEST_CASE("induced L1 norm is the maximum absolute column sum")
    {
        Eigen::MatrixXd a(2, 2);
        a << 1, -4, 2, 0.5;
        CHECK(induced_l1_norm(a) == 4.5);
        Eigen::MatrixXcd c(2, 2);
        c << cplx(3, 4), 0, 0, cplx(0, 1);
        CHECK(induced_l1_norm(c) == doctest::Approx(5.0));
        CHECK(induced_l1_norm(Eigen::MatrixXd(0, 0)) == 0.0);
    }

    TEST_CASE("induced norm is homogeneous and subadditive")
    {
        std::mt19937_64 rng(2);
        std::normal_distribution<double> normal;
        for (int s = 0; s < 20; ++s) {
            Eigen::MatrixXd a(5, 5), b(5, 5);
            for (auto* m : {&a, &b})
                for (Eigen::Index i = 0; i < 25; ++i)
                    m->data()[i] = normal(rng);
            CHECK(induced_l1_norm(Eigen::MatrixXd(-3.0 * a)) == doctest::Approx(3.0 * induced_l1_norm(a)));
            CHECK(induced_l1_norm(Eigen::MatrixXd(a + b)) <= induced_l1_norm(a) + induced_l1_norm(b) + 1e-14);
            CHECK(induced_l1_norm(Eigen::MatrixXd(a * b)) <= induced_l1_norm(a) * induced_l1_norm(b) + 1e-12);
        }
    }

    TEST_CASE("expm of diagonal, nilpotent and rotation generators")
    {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
        d.diagonal() << -1.0, 0.5, 20.0;
        const Eigen::MatrixXd ed = expm(d).value;
        CHECK(ed(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
        CHECK(ed(2, 2) == doctest::Approx(std::exp(20.0)).epsilon(1e-13));
        CHECK(std::abs(ed(0, 1)) < 1e-14);

        Eigen::MatrixXd n = Eigen::MatrixXd::Zero(3, 3);
        n(0, 1) = 2.0;
        n(1, 2) = 3.0;
        const Eigen::MatrixXd en = expm(n).value;
        CHECK(en(0, 2) == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(en(0, 1) == doctest::Approx(2.0).epsilon(1e-14));

        Eigen::MatrixXd r(2, 2);
        r << 0, -30, 30, 0;
        const Eigen::MatrixXd er = expm(r).value;
        CHECK(er(0, 0) == doctest::Approx(std::cos(30.0)).epsilon(1e-11));
        CHECK(er(1, 0) == doctest::Approx(std::sin(30.0)).epsilon(1e-11));
    }

    TEST_CASE("complex expm agrees with an eigendecomposition of a normal matrix")
    {
        Eigen::MatrixXcd h(3, 3);
        h << cplx(1, 0), cplx(0.5, 0.2), cplx(0, -1), cplx(0.5, -0.2), cplx(-2, 0), cplx(0.3, 0), cplx(0, 1),
            cplx(0.3, 0), cplx(0.7, 0);
        const Eigen::MatrixXcd a = cplx(0, 1) * h; // anti-Hermitian: e^{A} unitary
        const Eigen::MatrixXcd e = expm(a).value;
        CHECK((e.adjoint() * e - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-13);
        const EigenDecomposition d = eigendecompose(a);
        const Eigen::MatrixXcd ref =
            d.vectors * (d.values.array().exp()).matrix().asDiagonal() * d.vectors.inverse();
        CHECK((ref - e).norm() < 1e-12);
    }

    TEST_CASE("eigenvalues of known matrices")
    {
        Eigen::MatrixXd a(2, 2);
        a << 0, 1, -2, -3; // eigenvalues -1, -2
        Eigen::VectorXcd ev = eigenvalues(a);
        std::vector<double> re{ev[0].real(), ev[1].real()};
        std::sort(re.begin(), re.end());
        CHECK(re[0] == doctest::Approx(-2.0));
        CHECK(re[1] == doctest::Approx(-1.0));
        Eigen::MatrixXd rot(2, 2);
        rot << 0, -1, 1, 0;
        ev = eigenvalues(rot);
        CHECK(std::abs(std::abs(ev[0].imag()) - 1.0) < 1e-14);
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2, 2);
        c(0, 0) = cplx(1, 2);
        c(1, 1) = cplx(-1, 0);
        const Eigen::VectorXcd cv = eigenvalues(c);
        CHECK((std::abs(cv[0] - cplx(1, 2)) < 1e-14 || std::abs(cv[1] - cplx(1, 2)) < 1e-14));
    }

    TEST_CASE("rcond flags singular matrices")
    {
        CHECK(rcond(Eigen::MatrixXcd::Identity(4, 4)) == doctest::Approx(1.0));
        Eigen::MatrixXcd s = Eigen::MatrixXcd::Ones(3, 3);
        CHECK(rcond(s) < 1e-12);
    }
}
