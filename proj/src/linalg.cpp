#include "bathlab/linalg.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <array>
#include <cmath>

namespace bathlab {

double induced_l1_norm(const Eigen::MatrixXd& a)
{
    return a.cols() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

double induced_l1_norm(const Eigen::MatrixXcd& a)
{
    return a.cols() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Higham (2005) scaling-and-squaring with Pade degrees 3, 5, 7, 9, 13.
template <typename Scalar>
ExpmResult<Scalar> pade_expm(const Mat<Scalar>& a)
{
    if (a.rows() != a.cols())
        throw ContractViolation("expm: matrix must be square");
    const Eigen::Index n = a.rows();
    ExpmResult<Scalar> r;
    if (!a.allFinite())
        throw NumericalError("expm: non-finite input");
    const double norm = induced_l1_norm(Mat<Scalar>(a));
    const Mat<Scalar> id = Mat<Scalar>::Identity(n, n);

    static constexpr std::array<double, 4> theta{1.495585217958292e-2, 2.539398330063230e-1,
                                                 9.504178996162932e-1, 2.097847961257068e0};
    static constexpr std::array<int, 4> degree{3, 5, 7, 9};
    static constexpr std::array<std::array<double, 10>, 4> coef{{
        {120., 60., 12., 1.},
        {30240., 15120., 3360., 420., 30., 1.},
        {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.},
        {17643225600., 8821612800., 2075673600., 302702400., 30270240., 2162160., 110880., 3960., 90., 1.},
    }};

    for (int d = 0; d < 4; ++d) {
        if (norm > theta[d])
            continue;
        const auto& b = coef[d];
        const Mat<Scalar> a2 = a * a;
        Mat<Scalar> u = b[1] * id, v = b[0] * id;
        Mat<Scalar> p = id;
        for (int k = 1; 2 * k <= degree[d]; ++k) {
            p = p * a2;
            u += b[2 * k + 1] * p;
            v += b[2 * k] * p;
        }
        u = a * u;
        r.value = (v - u).partialPivLu().solve(v + u);
        r.method = "pade" + std::to_string(degree[d]);
        if (!r.value.allFinite())
            throw NumericalError("expm: non-finite result");
        return r;
    }

    static constexpr std::array<double, 14> b{64764752532480000., 32382376266240000., 7771770303897600.,
                                              1187353796428800., 129060195264000., 10559470521600.,
                                              670442572800., 33522128640., 1323241920., 40840800.,
                                              960960., 16380., 182., 1.};
    const double theta13 = 5.371920351148152;
    int s = 0;
    if (norm > theta13)
        s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    if (s > 1000)
        throw NumericalError("expm: norm too large");
    const Mat<Scalar> as = a * Scalar(std::ldexp(1.0, -s));
    const Mat<Scalar> a2 = as * as;
    const Mat<Scalar> a4 = a2 * a2;
    const Mat<Scalar> a6 = a4 * a2;
    Mat<Scalar> u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    u += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    u = as * u;
    Mat<Scalar> v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    Mat<Scalar> x = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < s; ++k)
        x = x * x;
    if (!x.allFinite())
        throw NumericalError("expm: overflow during squaring");
    r.value = std::move(x);
    r.method = "pade13";
    r.squarings = s;
    return r;
}

} // namespace

ExpmResult<double> expm(const Eigen::MatrixXd& a) { return pade_expm<double>(a); }
ExpmResult<cplx> expm(const Eigen::MatrixXcd& a) { return pade_expm<cplx>(a); }

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a)
{
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXd work = a;
    Eigen::VectorXd wr(n), wi(n);
    const lapack_int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(), wi.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericalError("dgeev failed, info = " + std::to_string(info));
    Eigen::VectorXcd out(n);
    for (lapack_int i = 0; i < n; ++i)
        out[i] = cplx(wr[i], wi[i]);
    return out;
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& a)
{
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXcd work = a;
    Eigen::VectorXcd w(n);
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericalError("zgeev failed, info = " + std::to_string(info));
    return w;
}

EigenDecomposition eigendecompose(const Eigen::MatrixXcd& a)
{
    const lapack_int n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXcd work = a;
    EigenDecomposition d;
    d.values.resize(n);
    d.vectors.resize(n, n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, d.values.data(), nullptr,
                                          1, d.vectors.data(), n);
    if (info != 0)
        throw NumericalError("zgeev failed, info = " + std::to_string(info));
    return d;
}

double rcond(const Eigen::MatrixXcd& a)
{
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    if ((lu.matrixLU().diagonal().array() == cplx(0.0)).any())
        return 0.0;
    const double r = lu.rcond();
    return std::isfinite(r) ? r : 0.0;
}

} // namespace bathlab
