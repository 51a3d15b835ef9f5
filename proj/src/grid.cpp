#include "bathlab/grid.hpp"

#include "bathlab/quadrature.hpp"

#include <algorithm>

namespace bathlab {

VelocityGrid::VelocityGrid(double extent, int points_per_axis)
    : extent_(extent), n_(points_per_axis)
{
    if (!(extent > 0.0) || !std::isfinite(extent))
        throw ConfigError("velocity extent must be positive, got " + std::to_string(extent));
    if (points_per_axis < 2 || points_per_axis % 2 != 0)
        throw ConfigError("points_per_axis must be even and >= 2, got " + std::to_string(points_per_axis));
    h_ = 2.0 * extent_ / n_;
    weight_ = h_ * h_ * h_;
    nodes_.reserve(static_cast<std::size_t>(n_) * n_ * n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                nodes_.push_back({coordinate(i), coordinate(j), coordinate(k)});
}

double VelocityGrid::max_speed() const
{
    const double c = coordinate(n_ - 1);
    return std::sqrt(3.0) * c;
}

double VelocityGrid::integrate(std::span<const double> f) const
{
    double s = 0.0;
    for (double x : f)
        s += x;
    return weight_ * s;
}

double VelocityGrid::l1(std::span<const double> f) const
{
    double s = 0.0;
    for (double x : f)
        s += std::abs(x);
    return weight_ * s;
}

double VelocityGrid::l1(std::span<const cplx> f) const
{
    double s = 0.0;
    for (const cplx& x : f)
        s += std::abs(x);
    return weight_ * s;
}

VelocityGrid build_velocity_grid(double extent, int points_per_axis)
{
    return VelocityGrid(extent, points_per_axis);
}

SphereQuadrature build_sphere_quadrature(int polar_order, int azimuthal_order)
{
    if (polar_order < 2 || azimuthal_order < 2)
        throw ConfigError("sphere quadrature orders must be >= 2");
    Rule1D polar;
    if (polar_order % 2 == 0) {
        // |cos theta| has a kink at the equator; integrate each hemisphere separately
        const Rule1D lo = gauss_legendre(polar_order / 2, -1.0, 0.0);
        const Rule1D hi = gauss_legendre(polar_order / 2, 0.0, 1.0);
        polar.nodes = lo.nodes;
        polar.weights = lo.weights;
        polar.nodes.insert(polar.nodes.end(), hi.nodes.begin(), hi.nodes.end());
        polar.weights.insert(polar.weights.end(), hi.weights.begin(), hi.weights.end());
    } else {
        polar = gauss_legendre(polar_order);
    }

    SphereQuadrature q;
    q.polar_order = polar_order;
    q.azimuthal_order = azimuthal_order;
    const double dphi = 2.0 * pi / azimuthal_order;
    for (std::size_t p = 0; p < polar.nodes.size(); ++p) {
        const double c = polar.nodes[p];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int a = 0; a < azimuthal_order; ++a) {
            const double phi = (a + 0.5) * dphi;
            q.directions.push_back({s * std::cos(phi), s * std::sin(phi), c});
            q.weights.push_back(polar.weights[p] * dphi);
        }
    }
    return q;
}

SphereQuadrature fold_antipodal(const SphereQuadrature& q)
{
    // Polar nodes are symmetric in cos(theta); phi -> phi + pi maps the
    // azimuthal rule onto itself only for an even azimuthal count.
    if (q.azimuthal_order % 2 != 0)
        return q;
    SphereQuadrature out;
    out.polar_order = q.polar_order;
    out.azimuthal_order = q.azimuthal_order;
    const int half_azimuth = q.azimuthal_order / 2;
    const std::size_t rows = q.size() / q.azimuthal_order;
    for (std::size_t p = 0; p < rows; ++p) {
        for (int a = 0; a < q.azimuthal_order; ++a) {
            const std::size_t k = p * q.azimuthal_order + a;
            const double c = q.directions[k][2];
            // keep the upper hemisphere; on the equator (odd polar order) keep half of the circle
            const bool keep = c > 0.0 || (c == 0.0 && a < half_azimuth);
            if (keep) {
                out.directions.push_back(q.directions[k]);
                out.weights.push_back(2.0 * q.weights[k]);
            }
        }
    }
    return out;
}

SpatialModes::SpatialModes(int max_mode) : max_mode_(max_mode)
{
    if (max_mode < 0)
        throw ConfigError("max_mode must be >= 0");
    // lexicographic order from (-m,-m,-m) to (m,m,m); index reversal is negation
    for (int a = -max_mode; a <= max_mode; ++a)
        for (int b = -max_mode; b <= max_mode; ++b)
            for (int c = -max_mode; c <= max_mode; ++c)
                modes_.push_back({a, b, c});
}

std::size_t SpatialModes::index_of(const Mode& n) const
{
    const int p = points_per_axis();
    for (int a : n)
        if (a < -max_mode_ || a > max_mode_)
            throw ContractViolation("mode outside retained set");
    return (static_cast<std::size_t>(n[0] + max_mode_) * p + (n[1] + max_mode_)) * p + (n[2] + max_mode_);
}

SpatialModes build_spatial_modes(int max_mode) { return SpatialModes(max_mode); }

} // namespace bathlab
