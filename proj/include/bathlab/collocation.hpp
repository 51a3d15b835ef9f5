#pragma once

#include "bathlab/grid.hpp"

#include <Eigen/Dense>

#include <vector>

namespace bathlab {

// Maps mode coefficients (nodes x modes, SpatialModes order) to values at
// x_p = 2 pi (p0, p1, p2) / P, p lexicographic, and back. P >= 2 max_mode + 1;
// larger P gives an alias-free product for quadratic terms when P >= 3 max_mode + 1.
class Collocation {
public:
    Collocation(const SpatialModes& modes, int points_per_axis);

    int points_per_axis() const { return p_; }
    std::size_t point_count() const { return static_cast<std::size_t>(p_) * p_ * p_; }
    Vec3 point(std::size_t idx) const;

    // Real part of sum_n f_n e^{i n.x_p}.
    Eigen::MatrixXd to_points(const Eigen::MatrixXcd& coeff) const;
    // Same with coefficients multiplied by (i n)^alpha.
    Eigen::MatrixXd to_points(const Eigen::MatrixXcd& coeff, const std::array<int, 3>& alpha) const;
    // f_n = P^{-3} sum_p f(x_p) e^{-i n.x_p}. A line of identical values maps to
    // exactly (c, 0, ..., 0) so that x-independent data stays exactly x-independent.
    Eigen::MatrixXcd from_points(const Eigen::MatrixXd& values) const;

private:
    void forward_line(const cplx* in, std::ptrdiff_t stride_in, cplx* out, std::ptrdiff_t stride_out) const;

    int max_mode_;
    int p_;
    std::vector<cplx> root_; // e^{2 pi i k / P}
};

// f_{-n} = conj(f_n); the zero mode becomes real.
void enforce_conjugate_symmetry(const SpatialModes& modes, Eigen::MatrixXcd& coeff);

} // namespace bathlab
