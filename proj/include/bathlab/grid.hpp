#pragma once

#include "bathlab/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bathlab {

// Cell-centred uniform grid on [-V, V]^3. Node (i, j, k) has linear index
// (i * N + j) * N + k and velocity (c_i, c_j, c_k) with c_a = -V + (a + 1/2) h.
class VelocityGrid {
public:
    VelocityGrid(double extent, int points_per_axis);

    double extent() const { return extent_; }
    int points_per_axis() const { return n_; }
    double spacing() const { return h_; }
    double weight() const { return weight_; }
    std::size_t size() const { return nodes_.size(); }

    const Vec3& node(std::size_t idx) const { return nodes_[idx]; }
    std::span<const Vec3> nodes() const { return nodes_; }
    double coordinate(int a) const { return -extent_ + (a + 0.5) * h_; }

    std::size_t index(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }
    std::array<int, 3> triple(std::size_t idx) const
    {
        const int k = static_cast<int>(idx % n_);
        const int j = static_cast<int>((idx / n_) % n_);
        const int i = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
        return {i, j, k};
    }
    double max_speed() const;

    // Weighted sums: integral and L1 norm of a nodal function.
    double integrate(std::span<const double> f) const;
    double l1(std::span<const double> f) const;
    double l1(std::span<const cplx> f) const;

    bool same_as(const VelocityGrid& other) const
    {
        return extent_ == other.extent_ && n_ == other.n_;
    }

private:
    double extent_;
    int n_;
    double h_;
    double weight_;
    std::vector<Vec3> nodes_;
};

VelocityGrid build_velocity_grid(double extent, int points_per_axis);

// Product rule on the unit sphere: Gauss-Legendre in cos(theta) (split per
// hemisphere when polar_order is even) times a uniform rule in phi.
struct SphereQuadrature {
    std::vector<Vec3> directions;
    std::vector<double> weights;
    int polar_order = 0;
    int azimuthal_order = 0;

    std::size_t size() const { return directions.size(); }
    double integrate(auto&& fn) const
    {
        double s = 0.0;
        for (std::size_t k = 0; k < directions.size(); ++k)
            s += weights[k] * fn(directions[k]);
        return s;
    }
};

SphereQuadrature build_sphere_quadrature(int polar_order, int azimuthal_order);

// Keeps one direction of each antipodal pair with doubled weight. Integrands
// even in omega (all collision integrands are) integrate identically.
// Returns the input unchanged when the rule is not antipodally symmetric.
SphereQuadrature fold_antipodal(const SphereQuadrature& q);

// Fourier modes n in Z^3 with |n_i| <= max_mode on the torus of side 2 pi.
class SpatialModes {
public:
    explicit SpatialModes(int max_mode);

    int max_mode() const { return max_mode_; }
    std::size_t size() const { return modes_.size(); }
    const Mode& mode(std::size_t idx) const { return modes_[idx]; }
    std::span<const Mode> modes() const { return modes_; }
    std::size_t index_of(const Mode& n) const;
    std::size_t negated(std::size_t idx) const { return size() - 1 - idx; }
    std::size_t zero_index() const { return size() / 2; }
    // collocation points per axis, 2 * max_mode + 1
    int points_per_axis() const { return 2 * max_mode_ + 1; }
    static constexpr double torus_side = 2.0 * pi;

private:
    int max_mode_;
    std::vector<Mode> modes_;
};

SpatialModes build_spatial_modes(int max_mode);

} // namespace bathlab
