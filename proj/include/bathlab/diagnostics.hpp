#pragma once

#include "bathlab/collision.hpp"
#include "bathlab/collocation.hpp"
#include "bathlab/kernels.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace bathlab {

inline constexpr double torus_volume = 8.0 * pi * pi * pi;

// Perturbation f = g - C_inf M in mode space, nodes x modes.
struct DistributionState {
    Eigen::MatrixXcd coeff;
    double c_infinity = 1.0;
    double time = 0.0;
    std::uint64_t step = 0;
};

// ||g - C_inf M||_{L1(T^3 x R^3)} from the collocation values of f.
double l1_distance_to_maxwellian(const DistributionState& state, const Collocation& colloc, const VelocityGrid& grid);
// (2 pi)^3 sum_n ||f_n||_1, an upper bound for the collocation value
double mode_sum_norm(const DistributionState& state, const VelocityGrid& grid);
// total mass of g = C_inf M + f
double total_mass(const DistributionState& state, const SpatialModes& modes, const KernelAssembly& kernels);
// min over collocation points and nodes of C_inf M + f
double min_reconstructed_g(const DistributionState& state, const Collocation& colloc, const KernelAssembly& kernels);

// Mass of g0 over the torus divided by (2 pi)^3 times the discrete mass of M.
// g0 is given as full mode coefficients.
double compute_C_infinity(const Eigen::MatrixXcd& g0, const SpatialModes& modes, const VelocityGrid& grid);

struct DerivativeNorms {
    double plain = 0.0; // sum_{|alpha| <= order} ||d^alpha f||_1
    double weighted = 0.0; // sum_{|alpha| <= order} ||<v>^weight d^alpha f||_1
};
DerivativeNorms derivative_norms(const DistributionState& state, const Collocation& colloc, const VelocityGrid& grid,
                                 int max_order, double weight_exponent);

struct FitResult {
    double c1 = 0.0;
    double c0 = 0.0;
    double residual = 0.0; // max |ln value - (ln c1 - c0 t)|
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t samples = 0;
};

// Least squares on log values for t in [t_min, t_max]; needs >= 5 positive samples.
FitResult fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values, double t_min,
                               double t_max);

struct ConvergenceReport {
    std::vector<double> times;
    std::vector<double> distances;
    FitResult fit;
};

struct ControlFunctions {
    std::vector<double> times;
    std::vector<double> running_max; // M(t)
    std::vector<double> integral; // I(t)
};

// M(t) = max_{s <= t} e^{c0 s} plain(s); I(t) = trapezoid integral of weighted(s).
ControlFunctions control_functions(const std::vector<double>& times, const std::vector<double>& plain,
                                   const std::vector<double>& weighted, double c0_guess);

// Sum of a few Gaussian bumps with random centres, widths and signs.
Eigen::VectorXd random_smooth_vector(const VelocityGrid& grid, std::mt19937_64& rng);

struct InequalityReport {
    int points_per_axis = 0;
    double lambda_nu0 = 0.0; // min nu0 / (1 + |v|)
    double lambda_nu1 = 0.0; // min nu1 / (1 + |v|)
    double k0_ratio = 0.0; // worst ||<v>^m K0 f|| / ||<v> f||
    double k1_ratio = 0.0; // worst ||<v>^m K1 f|| / ||<v>^{m+1} f||
    double q_ratio = 0.0; // worst collision bound ratio
};

// kernels must carry K1 (kappa > 0). q_samples may be smaller than sample_count; Q is the expensive part.
InequalityReport inequality_probe_suite(const KernelAssembly& kernels, const CollisionWorkspace& workspace,
                                        int sample_count, int q_samples, int m, std::uint64_t seed);

} // namespace bathlab
