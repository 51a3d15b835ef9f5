#pragma once

#include "bathlab/collision.hpp"
#include "bathlab/grid.hpp"

#include <Eigen/Dense>

namespace bathlab {

// Bath transition kernel e^{-|u|^2} (1 + |u - v|^2)^{1/2}.
double r0(const Vec3& u, const Vec3& v);

// e^{-|v|^2}
inline double maxwellian(const Vec3& v) { return std::exp(-norm_sq(v)); }
Eigen::VectorXd maxwellian(const VelocityGrid& grid);

// r0, optionally multiplied by e^{asymmetry (u_x - v_x)}. A nonzero asymmetry
// breaks detailed balance; it exists so the verify suite has a negative control.
struct BathKernel {
    double asymmetry = 0.0;
    double operator()(const Vec3& u, const Vec3& v) const
    {
        const double r = r0(u, v);
        return asymmetry == 0.0 ? r : r * std::exp(asymmetry * (u[0] - v[0]));
    }
};

// max over node pairs of |r(u,v) - r(v,u) e^{|v|^2 - |u|^2}|
double detailed_balance_defect(const VelocityGrid& grid, const BathKernel& kernel = {});

// nu0(v) = sum_j w r0(u_j, v)
Eigen::VectorXd compute_nu0(const VelocityGrid& grid, const BathKernel& kernel = {});
double nu0_at(const VelocityGrid& grid, const Vec3& v);

// (K0)_{ij} = w r0(v_i, u_j)
Eigen::MatrixXd assemble_K0(const VelocityGrid& grid, const BathKernel& kernel = {});

struct Nu1 {
    Eigen::VectorXd sphere_form; // sum_j w M(u_j) sum_k w_k |(u_j - v_i).omega_k|
    Eigen::VectorXd reduced_form; // 2 pi sum_j w |u_j - v_i| M(u_j)
    double max_relative_discrepancy = 0.0;
};

Nu1 compute_nu1(const VelocityGrid& grid, const SphereQuadrature& sphere);
// reduced form at an arbitrary velocity
double nu1_at(const VelocityGrid& grid, const Vec3& v);
// sphere form at an arbitrary velocity
double nu1_sphere_at(const VelocityGrid& grid, const SphereQuadrature& sphere, const Vec3& v);

// K1 f(v) = 2 pi M(v) int |u - v| f(u) du - 4 pi int |u - v|^{-1} e^{-((u-v).v)^2/|u-v|^2} f(u) du,
// with the u = v entry set to zero.
Eigen::MatrixXd assemble_K1_explicit(const VelocityGrid& grid);

// Matrix-free products with the same entries, for grids too large to store the operators.
Eigen::VectorXd apply_K1_explicit(const VelocityGrid& grid, const Eigen::VectorXd& f);
Eigen::VectorXd apply_K0(const VelocityGrid& grid, const Eigen::VectorXd& f);

// K1 f(v) = M(v) int int |(u-v).w| f(u) - int int |(u-v).w| [M(u') f(v') + M(v') f(u')],
// f interpolated trilinearly (zero outside the cube), M exact.
Eigen::MatrixXd assemble_K1_collision(const VelocityGrid& grid, const SphereQuadrature& sphere);

enum class K1Form { explicit_form, collision_form };

struct KernelAssembly {
    VelocityGrid grid;
    double kappa = 0.0;
    double c_infinity = 1.0;
    Eigen::VectorXd maxwellian;
    Eigen::VectorXd nu0;
    Eigen::VectorXd nu1;
    Eigen::MatrixXd K0;
    Eigen::MatrixXd K1; // empty when kappa == 0
    Eigen::VectorXd nu; // nu0 + c_inf kappa nu1
    Eigen::MatrixXd K; // -K0 + c_inf kappa K1
};

// Assemble nu and K from precomputed pieces. kappa < 0 or c_infinity <= 0 is a configuration error.
KernelAssembly combine(const VelocityGrid& grid, Eigen::VectorXd nu0, Eigen::MatrixXd K0, Eigen::VectorXd nu1,
                       Eigen::MatrixXd K1, double kappa, double c_infinity);

// Convenience: build everything. The sphere rule is only used for the collision form of K1.
KernelAssembly assemble_kernels(const VelocityGrid& grid, double kappa, double c_infinity,
                                K1Form form = K1Form::explicit_form, const SphereQuadrature* sphere = nullptr);

} // namespace bathlab
