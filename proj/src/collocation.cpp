#include "bathlab/collocation.hpp"

namespace bathlab {

Collocation::Collocation(const SpatialModes& modes, int points_per_axis)
    : max_mode_(modes.max_mode()), p_(points_per_axis)
{
    if (p_ < 2 * max_mode_ + 1)
        throw ConfigError("collocation needs at least 2 max_mode + 1 points per axis");
    root_.resize(p_);
    root_[0] = 1.0;
    for (int k = 1; k < p_; ++k)
        root_[k] = std::polar(1.0, 2.0 * pi * k / p_);
}

Vec3 Collocation::point(std::size_t idx) const
{
    const int c = static_cast<int>(idx % p_);
    const int b = static_cast<int>((idx / p_) % p_);
    const int a = static_cast<int>(idx / (static_cast<std::size_t>(p_) * p_));
    const double h = 2.0 * pi / p_;
    return {a * h, b * h, c * h};
}

Eigen::MatrixXd Collocation::to_points(const Eigen::MatrixXcd& coeff) const
{
    return to_points(coeff, {0, 0, 0});
}

Eigen::MatrixXd Collocation::to_points(const Eigen::MatrixXcd& coeff, const std::array<int, 3>& alpha) const
{
    const int m = 2 * max_mode_ + 1;
    const std::size_t modes = static_cast<std::size_t>(m) * m * m;
    if (static_cast<std::size_t>(coeff.cols()) != modes)
        throw ContractViolation("to_points: coefficient block has the wrong mode count");
    const Eigen::Index nodes = coeff.rows();

    // (i n_a)^alpha_a per axis
    std::array<std::vector<cplx>, 3> mult;
    for (int ax = 0; ax < 3; ++ax) {
        mult[ax].resize(m);
        for (int k = 0; k < m; ++k) {
            cplx f = 1.0;
            for (int r = 0; r < alpha[ax]; ++r)
                f *= cplx(0.0, double(k - max_mode_));
            mult[ax][k] = f;
        }
    }
    const bool plain = alpha[0] == 0 && alpha[1] == 0 && alpha[2] == 0;

    Eigen::MatrixXd out(nodes, static_cast<Eigen::Index>(point_count()));
    const int p = p_;
    std::vector<cplx> a(modes), b(static_cast<std::size_t>(p) * m * m), c(static_cast<std::size_t>(p) * p * m);
#pragma omp parallel for schedule(static) firstprivate(a, b, c)
    for (Eigen::Index i = 0; i < nodes; ++i) {
        for (std::size_t q = 0; q < modes; ++q) {
            const cplx v = coeff(i, static_cast<Eigen::Index>(q));
            if (plain) {
                a[q] = v;
            } else {
                const int k0 = static_cast<int>(q / (m * m)), k1 = static_cast<int>((q / m) % m),
                          k2 = static_cast<int>(q % m);
                a[q] = v * mult[0][k0] * mult[1][k1] * mult[2][k2];
            }
        }
        // axis 0: (k0,k1,k2) -> (p0,k1,k2)
        for (int p0 = 0; p0 < p; ++p0)
            for (int k1 = 0; k1 < m; ++k1)
                for (int k2 = 0; k2 < m; ++k2) {
                    cplx s = 0.0;
                    for (int k0 = 0; k0 < m; ++k0) {
                        const int e = (((k0 - max_mode_) * p0) % p + p) % p;
                        s += a[(static_cast<std::size_t>(k0) * m + k1) * m + k2] * root_[e];
                    }
                    b[(static_cast<std::size_t>(p0) * m + k1) * m + k2] = s;
                }
        for (int p0 = 0; p0 < p; ++p0)
            for (int p1 = 0; p1 < p; ++p1)
                for (int k2 = 0; k2 < m; ++k2) {
                    cplx s = 0.0;
                    for (int k1 = 0; k1 < m; ++k1) {
                        const int e = (((k1 - max_mode_) * p1) % p + p) % p;
                        s += b[(static_cast<std::size_t>(p0) * m + k1) * m + k2] * root_[e];
                    }
                    c[(static_cast<std::size_t>(p0) * p + p1) * m + k2] = s;
                }
        for (int p0 = 0; p0 < p; ++p0)
            for (int p1 = 0; p1 < p; ++p1)
                for (int p2 = 0; p2 < p; ++p2) {
                    cplx s = 0.0;
                    for (int k2 = 0; k2 < m; ++k2) {
                        const int e = (((k2 - max_mode_) * p2) % p + p) % p;
                        s += c[(static_cast<std::size_t>(p0) * p + p1) * m + k2] * root_[e];
                    }
                    out(i, (static_cast<Eigen::Index>(p0) * p + p1) * p + p2) = s.real();
                }
    }
    return out;
}

void Collocation::forward_line(const cplx* in, std::ptrdiff_t stride_in, cplx* out, std::ptrdiff_t stride_out) const
{
    const int m = 2 * max_mode_ + 1;
    bool constant = true;
    for (int q = 1; q < p_ && constant; ++q)
        constant = in[q * stride_in] == in[0];
    if (constant) {
        for (int k = 0; k < m; ++k)
            out[k * stride_out] = k == max_mode_ ? in[0] : cplx(0.0);
        return;
    }
    for (int k = 0; k < m; ++k) {
        cplx s = 0.0;
        for (int q = 0; q < p_; ++q) {
            const int e = ((-(k - max_mode_) * q) % p_ + p_) % p_;
            s += in[q * stride_in] * root_[e];
        }
        out[k * stride_out] = s / double(p_);
    }
}

Eigen::MatrixXcd Collocation::from_points(const Eigen::MatrixXd& values) const
{
    if (static_cast<std::size_t>(values.cols()) != point_count())
        throw ContractViolation("from_points: value block has the wrong point count");
    const int m = 2 * max_mode_ + 1;
    const int p = p_;
    const Eigen::Index nodes = values.rows();
    Eigen::MatrixXcd out(nodes, static_cast<Eigen::Index>(m) * m * m);
    std::vector<cplx> a(point_count()), b(static_cast<std::size_t>(p) * p * m), c(static_cast<std::size_t>(p) * m * m);
#pragma omp parallel for schedule(static) firstprivate(a, b, c)
    for (Eigen::Index i = 0; i < nodes; ++i) {
        for (std::size_t q = 0; q < point_count(); ++q)
            a[q] = values(i, static_cast<Eigen::Index>(q));
        // axis 2: (p0,p1,p2) -> (p0,p1,k2)
        for (int p0 = 0; p0 < p; ++p0)
            for (int p1 = 0; p1 < p; ++p1)
                forward_line(&a[(static_cast<std::size_t>(p0) * p + p1) * p], 1,
                             &b[(static_cast<std::size_t>(p0) * p + p1) * m], 1);
        // axis 1: (p0,p1,k2) -> (p0,k1,k2)
        for (int p0 = 0; p0 < p; ++p0)
            for (int k2 = 0; k2 < m; ++k2)
                forward_line(&b[static_cast<std::size_t>(p0) * p * m + k2], m,
                             &c[static_cast<std::size_t>(p0) * m * m + k2], m);
        // axis 0: (p0,k1,k2) -> (k0,k1,k2)
        for (int k1 = 0; k1 < m; ++k1)
            for (int k2 = 0; k2 < m; ++k2) {
                cplx tmp[64];
                cplx* dst = tmp;
                std::vector<cplx> big;
                if (m > 64) {
                    big.resize(m);
                    dst = big.data();
                }
                forward_line(&c[static_cast<std::size_t>(k1) * m + k2], static_cast<std::ptrdiff_t>(m) * m, dst, 1);
                for (int k0 = 0; k0 < m; ++k0)
                    out(i, (static_cast<Eigen::Index>(k0) * m + k1) * m + k2) = dst[k0];
            }
    }
    return out;
}

void enforce_conjugate_symmetry(const SpatialModes& modes, Eigen::MatrixXcd& coeff)
{
    const std::size_t count = modes.size();
    for (std::size_t q = 0; q < count / 2; ++q) {
        const std::size_t r = modes.negated(q);
        const Eigen::VectorXcd avg = 0.5 * (coeff.col(q) + coeff.col(r).conjugate());
        coeff.col(q) = avg;
        coeff.col(r) = avg.conjugate();
    }
    const std::size_t z = modes.zero_index();
    coeff.col(z) = coeff.col(z).real().cast<cplx>();
}

} // namespace bathlab
