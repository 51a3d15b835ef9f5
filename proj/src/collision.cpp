#include "bathlab/collision.hpp"

#include <algorithm>
#include <cmath>

namespace bathlab {

std::pair<Vec3, Vec3> post_collision(const Vec3& u, const Vec3& v, const Vec3& omega)
{
    if (std::abs(norm_sq(omega) - 1.0) > 1e-12)
        throw ContractViolation("post_collision: omega must be a unit vector");
    const double s = dot(u - v, omega);
    return {u - s * omega, v + s * omega};
}

std::array<double, 8> trilinear_weights(const std::array<double, 3>& frac)
{
    std::array<double, 8> w{};
    for (int c = 0; c < 8; ++c) {
        const double a = (c & 4) ? frac[0] : 1.0 - frac[0];
        const double b = (c & 2) ? frac[1] : 1.0 - frac[1];
        const double d = (c & 1) ? frac[2] : 1.0 - frac[2];
        w[c] = a * b * d;
    }
    return w;
}

CollisionWorkspace::CollisionWorkspace(const VelocityGrid& grid, const SphereQuadrature& sphere,
                                       bool conservation_projection)
    : grid_(grid), sphere_(fold_antipodal(sphere)), projection_(conservation_projection)
{
    const int n = grid_.points_per_axis();
    const double h = grid_.spacing();
    const double w = grid_.weight();
    const int span = 2 * n - 1;

    loss_rate_.assign(static_cast<std::size_t>(span) * span * span, 0.0);
    for (int a = -(n - 1); a < n; ++a)
        for (int b = -(n - 1); b < n; ++b)
            for (int c = -(n - 1); c < n; ++c) {
                const Vec3 d{h * a, h * b, h * c};
                double r = 0.0;
                for (std::size_t k = 0; k < sphere_.size(); ++k)
                    r += sphere_.weights[k] * std::abs(dot(d, sphere_.directions[k]));
                loss_rate_[(static_cast<std::size_t>(a + n - 1) * span + (b + n - 1)) * span + (c + n - 1)] = w * r;
            }

    for (std::size_t k = 0; k < sphere_.size(); ++k) {
        const Vec3& om = sphere_.directions[k];
        for (int a = -(n - 1); a < n; ++a)
            for (int b = -(n - 1); b < n; ++b)
                for (int c = -(n - 1); c < n; ++c) {
                    const Vec3 delta{double(a), double(b), double(c)};
                    const double proj = dot(delta, om); // in index units
                    if (proj == 0.0)
                        continue;
                    CollisionChannel ch{};
                    ch.offset = {std::int16_t(a), std::int16_t(b), std::int16_t(c)};
                    ch.direction = static_cast<std::uint16_t>(k);
                    ch.s = h * proj;
                    ch.rate = w * sphere_.weights[k] * std::abs(ch.s);
                    bool empty = false;
                    for (int ax = 0; ax < 3; ++ax) {
                        const double tv = proj * om[ax];
                        const double tu = delta[ax] - tv;
                        const double fv = std::floor(tv), fu = std::floor(tu);
                        ch.base_v[ax] = std::int16_t(fv);
                        ch.base_u[ax] = std::int16_t(fu);
                        ch.frac_v[ax] = tv - fv;
                        ch.frac_u[ax] = tu - fu;
                        const int off = ch.offset[ax];
                        const int lo = std::max({0, -off, -1 - ch.base_u[ax], -1 - ch.base_v[ax]});
                        const int hi = std::min({n, n - off, n - ch.base_u[ax], n - ch.base_v[ax]});
                        ch.lo[ax] = std::int16_t(lo);
                        ch.hi[ax] = std::int16_t(hi);
                        if (lo >= hi)
                            empty = true;
                    }
                    if (!empty)
                        channels_.push_back(ch);
                }
    }
}

double CollisionWorkspace::loss_rate(int d0, int d1, int d2) const
{
    const int n = grid_.points_per_axis();
    const int span = 2 * n - 1;
    return loss_rate_[(static_cast<std::size_t>(d0 + n - 1) * span + (d1 + n - 1)) * span + (d2 + n - 1)];
}

namespace {

void pad(const VelocityGrid& grid, const double* f, std::vector<double>& out)
{
    const int n = grid.points_per_axis();
    const int p = n + 2;
    out.assign(static_cast<std::size_t>(p) * p * p, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out[(static_cast<std::size_t>(i + 1) * p + (j + 1)) * p + (k + 1)] = f[grid.index(i, j, k)];
}

} // namespace

void CollisionWorkspace::accumulate(const double* f, const double* g, double* out, std::vector<double>& fpad,
                                    std::vector<double>& gpad) const
{
    const int n = grid_.points_per_axis();
    const long p = n + 2;
    pad(grid_, f, fpad);
    pad(grid_, g, gpad);
    const double* fp = fpad.data();
    const double* gp = gpad.data();

    std::array<long, 8> corner{};
    for (int c = 0; c < 8; ++c)
        corner[c] = ((c >> 2 & 1) * p + (c >> 1 & 1)) * p + (c & 1);

    // Each i0 plane owns its outputs and visits channels in the same order, so
    // results do not depend on the thread count.
#pragma omp parallel for schedule(dynamic, 1)
    for (int i0 = 0; i0 < n; ++i0) {
        for (const CollisionChannel& ch : channels_) {
            if (i0 < ch.lo[0] || i0 >= ch.hi[0])
                continue;
            const auto wu = trilinear_weights(ch.frac_u);
            const auto wv = trilinear_weights(ch.frac_v);
            const long bu = (long(ch.base_u[0]) * p + ch.base_u[1]) * p + ch.base_u[2];
            const long bv = (long(ch.base_v[0]) * p + ch.base_v[1]) * p + ch.base_v[2];
            const double rate = ch.rate;
            for (int i1 = ch.lo[1]; i1 < ch.hi[1]; ++i1) {
                const long row = ((long(i0) + 1) * p + (i1 + 1)) * p + 1;
                const double* fu = fp + row + bu;
                const double* gv = gp + row + bv;
                double* o = out + (static_cast<std::size_t>(i0) * n + i1) * n;
                for (int i2 = ch.lo[2]; i2 < ch.hi[2]; ++i2) {
                    double a = 0.0, b = 0.0;
                    for (int c = 0; c < 8; ++c) {
                        a += wu[c] * fu[corner[c] + i2];
                        b += wv[c] * gv[corner[c] + i2];
                    }
                    o[i2] += rate * a * b;
                }
            }
        }
    }

    // loss term: g(v_i) sum_j a(j - i) f(u_j)
#pragma omp parallel for schedule(static)
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                double acc = 0.0;
                for (int j0 = 0; j0 < n; ++j0)
                    for (int j1 = 0; j1 < n; ++j1) {
                        const double* fr = f + grid_.index(j0, j1, 0);
                        for (int j2 = 0; j2 < n; ++j2)
                            acc += loss_rate(j0 - i0, j1 - i1, j2 - i2) * fr[j2];
                    }
                const std::size_t i = grid_.index(i0, i1, i2);
                out[i] -= g[i] * acc;
            }
}

std::vector<double> CollisionWorkspace::evaluate(std::span<const double> f, std::span<const double> g) const
{
    if (f.size() != grid_.size() || g.size() != grid_.size())
        throw ContractViolation("evaluate_Q: vector length does not match the workspace grid");
    std::vector<double> out(grid_.size(), 0.0);
    std::vector<double> fpad, gpad;
    accumulate(f.data(), g.data(), out.data(), fpad, gpad);
    if (projection_)
        project_mass(grid_, out);
    return out;
}

Eigen::MatrixXd CollisionWorkspace::evaluate_columns(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G) const
{
    if (F.rows() != static_cast<Eigen::Index>(grid_.size()) || G.rows() != F.rows() || G.cols() != F.cols())
        throw ContractViolation("evaluate_Q: column block shape mismatch");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(F.rows(), F.cols());
    std::vector<double> fpad, gpad;
    for (Eigen::Index c = 0; c < F.cols(); ++c) {
        accumulate(F.col(c).data(), G.col(c).data(), out.col(c).data(), fpad, gpad);
        if (projection_)
            project_mass(grid_, std::span<double>(out.col(c).data(), grid_.size()));
    }
    return out;
}

void project_mass(const VelocityGrid& grid, std::span<double> q)
{
    (void)grid; // uniform weight cancels in the ratio
    double total = 0.0, absolute = 0.0;
    for (double x : q) {
        total += x;
        absolute += std::abs(x);
    }
    if (absolute == 0.0)
        return;
    const double c = total / absolute;
    for (double& x : q)
        x -= c * std::abs(x);
}

double weighted_l1(const VelocityGrid& grid, std::span<const double> f, double m)
{
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += std::pow(japanese(grid.node(i)), m) * std::abs(f[i]);
    return grid.weight() * s;
}

BoundProbe weighted_bound_probe(const CollisionWorkspace& ws, std::span<const double> f, std::span<const double> g,
                                int m)
{
    if (m < 0)
        throw ContractViolation("weighted_bound_probe: m must be >= 0");
    const auto& grid = ws.grid();
    const auto q = ws.evaluate(f, g);
    BoundProbe r{};
    r.lhs = weighted_l1(grid, q, m);
    r.rhs = grid.l1(f) * weighted_l1(grid, g, m + 1) + weighted_l1(grid, f, m + 1) * grid.l1(g);
    r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
    return r;
}

} // namespace bathlab
