#include "bathlab/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace bathlab {

double r0(const Vec3& u, const Vec3& v)
{
    return std::exp(-norm_sq(u)) * std::sqrt(1.0 + norm_sq(u - v));
}

Eigen::VectorXd maxwellian(const VelocityGrid& grid)
{
    Eigen::VectorXd m(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        m[i] = maxwellian(grid.node(i));
    return m;
}

double detailed_balance_defect(const VelocityGrid& grid, const BathKernel& kernel)
{
    const std::size_t n = grid.size();
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& u = grid.node(i);
        for (std::size_t j = 0; j < n; ++j) {
            const Vec3& v = grid.node(j);
            const double d = std::abs(kernel(u, v) - kernel(v, u) * std::exp(norm_sq(v) - norm_sq(u)));
            worst = std::max(worst, d);
        }
    }
    return worst;
}

Eigen::VectorXd compute_nu0(const VelocityGrid& grid, const BathKernel& kernel)
{
    const std::size_t n = grid.size();
    Eigen::VectorXd nu(n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += kernel(grid.node(j), grid.node(i));
        nu[i] = grid.weight() * s;
    }
    return nu;
}

double nu0_at(const VelocityGrid& grid, const Vec3& v)
{
    double s = 0.0;
    for (const Vec3& u : grid.nodes())
        s += r0(u, v);
    return grid.weight() * s;
}

Eigen::MatrixXd assemble_K0(const VelocityGrid& grid, const BathKernel& kernel)
{
    const std::size_t n = grid.size();
    Eigen::MatrixXd k(n, n);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            k(i, j) = grid.weight() * kernel(grid.node(i), grid.node(j));
    return k;
}

namespace {

// w * sum_k w_k |h delta . omega_k| over offsets delta in [-(N-1), N-1]^3
std::vector<double> relative_rate_table(const VelocityGrid& grid, const SphereQuadrature& sphere)
{
    const SphereQuadrature q = fold_antipodal(sphere);
    const int n = grid.points_per_axis();
    const int span = 2 * n - 1;
    const double h = grid.spacing();
    std::vector<double> t(static_cast<std::size_t>(span) * span * span);
    for (int a = 0; a < span; ++a)
        for (int b = 0; b < span; ++b)
            for (int c = 0; c < span; ++c) {
                const Vec3 d{h * (a - n + 1), h * (b - n + 1), h * (c - n + 1)};
                double r = 0.0;
                for (std::size_t k = 0; k < q.size(); ++k)
                    r += q.weights[k] * std::abs(dot(d, q.directions[k]));
                t[(static_cast<std::size_t>(a) * span + b) * span + c] = grid.weight() * r;
            }
    return t;
}

} // namespace

Nu1 compute_nu1(const VelocityGrid& grid, const SphereQuadrature& sphere)
{
    const std::size_t n = grid.size();
    const int np = grid.points_per_axis();
    const int span = 2 * np - 1;
    const auto table = relative_rate_table(grid, sphere);
    const Eigen::VectorXd m = maxwellian(grid);

    Nu1 r;
    r.sphere_form.resize(n);
    r.reduced_form.resize(n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        const auto ti = grid.triple(i);
        const Vec3& v = grid.node(i);
        double sph = 0.0, red = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto tj = grid.triple(j);
            const std::size_t key =
                (static_cast<std::size_t>(tj[0] - ti[0] + np - 1) * span + (tj[1] - ti[1] + np - 1)) * span +
                (tj[2] - ti[2] + np - 1);
            sph += table[key] * m[j];
            red += norm(grid.node(j) - v) * m[j];
        }
        r.sphere_form[i] = sph;
        r.reduced_form[i] = 2.0 * pi * grid.weight() * red;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(r.sphere_form[i] - r.reduced_form[i]) / r.reduced_form[i]);
    r.max_relative_discrepancy = worst;
    return r;
}

double nu1_at(const VelocityGrid& grid, const Vec3& v)
{
    double s = 0.0;
    for (const Vec3& u : grid.nodes())
        s += norm(u - v) * maxwellian(u);
    return 2.0 * pi * grid.weight() * s;
}

double nu1_sphere_at(const VelocityGrid& grid, const SphereQuadrature& sphere, const Vec3& v)
{
    double s = 0.0;
    for (const Vec3& u : grid.nodes()) {
        const Vec3 d = u - v;
        s += maxwellian(u) * sphere.integrate([&](const Vec3& om) { return std::abs(dot(d, om)); });
    }
    return grid.weight() * s;
}

namespace {

double k1_entry(const VelocityGrid& grid, std::size_t i, std::size_t j)
{
    if (i == j)
        return 0.0;
    const Vec3& v = grid.node(i);
    const Vec3 d = grid.node(j) - v;
    const double r2 = norm_sq(d);
    const double r = std::sqrt(r2);
    const double p = dot(d, v);
    return grid.weight() * (2.0 * pi * r * maxwellian(v) - 4.0 * pi / r * std::exp(-p * p / r2));
}

} // namespace

Eigen::MatrixXd assemble_K1_explicit(const VelocityGrid& grid)
{
    const std::size_t n = grid.size();
    Eigen::MatrixXd k(n, n);
#pragma omp parallel for schedule(static)
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            k(i, j) = k1_entry(grid, i, j);
    return k;
}

Eigen::VectorXd apply_K1_explicit(const VelocityGrid& grid, const Eigen::VectorXd& f)
{
    const std::size_t n = grid.size();
    if (static_cast<std::size_t>(f.size()) != n)
        throw ContractViolation("apply_K1_explicit: size mismatch");
    Eigen::VectorXd out(f.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += k1_entry(grid, i, j) * f[static_cast<Eigen::Index>(j)];
        out[static_cast<Eigen::Index>(i)] = s;
    }
    return out;
}

Eigen::VectorXd apply_K0(const VelocityGrid& grid, const Eigen::VectorXd& f)
{
    const std::size_t n = grid.size();
    if (static_cast<std::size_t>(f.size()) != n)
        throw ContractViolation("apply_K0: size mismatch");
    Eigen::VectorXd out(f.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += r0(grid.node(i), grid.node(j)) * f[static_cast<Eigen::Index>(j)];
        out[static_cast<Eigen::Index>(i)] = grid.weight() * s;
    }
    return out;
}

Eigen::MatrixXd assemble_K1_collision(const VelocityGrid& grid, const SphereQuadrature& sphere)
{
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const CollisionWorkspace ws(grid, sphere, false);
    const auto& dirs = ws.sphere().directions;
    const int n = grid.points_per_axis();
    const std::size_t size = grid.size();
    const Eigen::VectorXd m = maxwellian(grid);
    RowMatrix k = RowMatrix::Zero(size, size);

    auto scatter = [&](double* row, int i0, int i1, int i2, const std::array<std::int16_t, 3>& base,
                       const std::array<double, 8>& wt, double coef) {
        for (int c = 0; c < 8; ++c) {
            const int a = i0 + base[0] + (c >> 2 & 1);
            const int b = i1 + base[1] + (c >> 1 & 1);
            const int d = i2 + base[2] + (c & 1);
            if (a < 0 || a >= n || b < 0 || b >= n || d < 0 || d >= n)
                continue; // zero extension
            row[grid.index(a, b, d)] -= coef * wt[c];
        }
    };

#pragma omp parallel for schedule(dynamic, 1)
    for (int i0 = 0; i0 < n; ++i0) {
        for (const CollisionChannel& ch : ws.channels()) {
            if (i0 < ch.lo[0] || i0 >= ch.hi[0])
                continue;
            const auto wu = trilinear_weights(ch.frac_u);
            const auto wv = trilinear_weights(ch.frac_v);
            const Vec3& om = dirs[ch.direction];
            for (int i1 = ch.lo[1]; i1 < ch.hi[1]; ++i1)
                for (int i2 = ch.lo[2]; i2 < ch.hi[2]; ++i2) {
                    const std::size_t i = grid.index(i0, i1, i2);
                    const std::size_t j = grid.index(i0 + ch.offset[0], i1 + ch.offset[1], i2 + ch.offset[2]);
                    double* row = k.row(i).data();
                    const Vec3& v = grid.node(i);
                    const Vec3 vp = v + ch.s * om;
                    const double mvp = maxwellian(vp);
                    // M(u') M(v') = M(u) M(v) by energy conservation
                    const double mup = m[i] * m[j] / mvp;
                    scatter(row, i0, i1, i2, ch.base_v, wv, ch.rate * mup);
                    scatter(row, i0, i1, i2, ch.base_u, wu, ch.rate * mvp);
                }
        }
    }
    // first term needs no post-collision velocities, so it covers every pair
    const auto table = relative_rate_table(grid, sphere);
    const int span = 2 * n - 1;
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < size; ++i) {
        const auto ti = grid.triple(i);
        for (std::size_t j = 0; j < size; ++j) {
            const auto tj = grid.triple(j);
            const std::size_t key =
                (static_cast<std::size_t>(tj[0] - ti[0] + n - 1) * span + (tj[1] - ti[1] + n - 1)) * span +
                (tj[2] - ti[2] + n - 1);
            k(i, j) += m[i] * table[key];
        }
    }
    return Eigen::MatrixXd(k);
}

KernelAssembly combine(const VelocityGrid& grid, Eigen::VectorXd nu0, Eigen::MatrixXd K0, Eigen::VectorXd nu1,
                       Eigen::MatrixXd K1, double kappa, double c_infinity)
{
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw ConfigError("kappa must be >= 0");
    if (!(c_infinity > 0.0) || !std::isfinite(c_infinity))
        throw ConfigError("C_infinity must be positive");
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (nu0.size() != n || K0.rows() != n || K0.cols() != n || nu1.size() != n)
        throw ContractViolation("combine: operator sizes do not match the grid");
    const double c = c_infinity * kappa;
    if (c != 0.0 && (K1.rows() != n || K1.cols() != n))
        throw ContractViolation("combine: K1 required when kappa > 0");

    KernelAssembly a{grid, kappa, c_infinity, maxwellian(grid), std::move(nu0), std::move(nu1), std::move(K0),
                     std::move(K1), {}, {}};
    a.nu = a.nu0 + c * a.nu1;
    a.K = -a.K0;
    if (c != 0.0)
        a.K.noalias() += c * a.K1;
    return a;
}

KernelAssembly assemble_kernels(const VelocityGrid& grid, double kappa, double c_infinity, K1Form form,
                                const SphereQuadrature* sphere)
{
    if (!(kappa >= 0.0))
        throw ConfigError("kappa must be >= 0");
    Eigen::VectorXd nu0 = compute_nu0(grid);
    Eigen::MatrixXd K0 = assemble_K0(grid);
    Eigen::VectorXd nu1(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        nu1[i] = nu1_at(grid, grid.node(i));
    Eigen::MatrixXd K1;
    if (kappa > 0.0) {
        if (form == K1Form::collision_form) {
            if (!sphere)
                throw ContractViolation("collision form of K1 needs a sphere quadrature");
            K1 = assemble_K1_collision(grid, *sphere);
        } else {
            K1 = assemble_K1_explicit(grid);
        }
    }
    return combine(grid, std::move(nu0), std::move(K0), std::move(nu1), std::move(K1), kappa, c_infinity);
}

} // namespace bathlab
