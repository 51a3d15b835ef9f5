#pragma once

#include "bathlab/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace bathlab {

// (u', v') for the pair (u, v) scattered along omega; |omega| must be 1.
std::pair<Vec3, Vec3> post_collision(const Vec3& u, const Vec3& v, const Vec3& omega);

// Trilinear weights for a point at fractional offsets `frac` inside a cell;
// corner c = (c0, c1, c2) is entry 4 c0 + 2 c1 + c2. Always sums to 1.
std::array<double, 8> trilinear_weights(const std::array<double, 3>& frac);

// One (direction, node offset) pair. For u_j = v_i + h*offset the post-collision
// velocities sit at fixed fractional index offsets from node i, so the
// interpolation stencil is shared by every i inside [lo, hi).
struct CollisionChannel {
    std::array<std::int16_t, 3> offset;
    std::array<std::int16_t, 3> base_u; // cell corner of u' relative to i
    std::array<std::int16_t, 3> base_v; // cell corner of v' relative to i
    std::array<std::int16_t, 3> lo;
    std::array<std::int16_t, 3> hi;
    std::uint16_t direction;
    double s; // (u - v) . omega
    double rate; // grid weight * sphere weight * |s|
    std::array<double, 3> frac_u;
    std::array<double, 3> frac_v;
};

class CollisionWorkspace {
public:
    CollisionWorkspace(const VelocityGrid& grid, const SphereQuadrature& sphere, bool conservation_projection);

    const VelocityGrid& grid() const { return grid_; }
    const SphereQuadrature& sphere() const { return sphere_; }
    bool conservation_projection() const { return projection_; }
    void set_conservation_projection(bool on) { projection_ = on; }
    std::span<const CollisionChannel> channels() const { return channels_; }

    // Q(f, g) at every node. Projection (if set) removes the discrete mass.
    std::vector<double> evaluate(std::span<const double> f, std::span<const double> g) const;
    // Column-wise Q(F.col(c), G.col(c)).
    Eigen::MatrixXd evaluate_columns(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G) const;

    // Sum over directions of w_k |(u - v).omega_k| times the grid weight, per offset u - v = h * delta.
    double loss_rate(int d0, int d1, int d2) const;

private:
    void accumulate(const double* f, const double* g, double* out, std::vector<double>& fpad,
                    std::vector<double>& gpad) const;

    VelocityGrid grid_;
    SphereQuadrature sphere_; // folded rule actually used
    bool projection_;
    std::vector<CollisionChannel> channels_;
    std::vector<double> loss_rate_; // (2N-1)^3 table
};

// |Q|-weighted rank-one correction making sum_i w Q_i exactly zero.
void project_mass(const VelocityGrid& grid, std::span<double> q);

struct BoundProbe {
    double lhs; // || <v>^m Q(f, g) ||_1
    double rhs; // ||f|| ||<v>^{m+1} g|| + ||<v>^{m+1} f|| ||g||
    double ratio; // lhs / rhs, 0 when rhs == 0
};

BoundProbe weighted_bound_probe(const CollisionWorkspace& ws, std::span<const double> f, std::span<const double> g,
                                int m);

// ||<v>^m f||_1 on the grid.
double weighted_l1(const VelocityGrid& grid, std::span<const double> f, double m);

} // namespace bathlab
