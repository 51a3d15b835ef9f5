#pragma once

#include "bathlab/kernels.hpp"
#include "bathlab/linalg.hpp"

#include <cstdint>
#include <vector>

namespace bathlab {

// diag(nu + i n.v) + K
struct ModeOperator {
    Mode n{};
    Eigen::MatrixXcd matrix;
};

ModeOperator assemble_mode_operator(const Mode& n, const KernelAssembly& kernels);
// the real n = 0 operator diag(nu) + K
Eigen::MatrixXd zero_mode_operator(const KernelAssembly& kernels);
// nu + i n.v per node
Eigen::VectorXcd mode_symbol(const Mode& n, const KernelAssembly& kernels);

// e^{|v|^2/2} (nu0 - K0) e^{-|v|^2/2}; symmetric by detailed balance.
Eigen::MatrixXd symmetrized_bath_operator(const KernelAssembly& kernels);

// P0 f = M (sum_i w f_i) / (sum_i w M_i). Projection of the zero-mode
// coefficient onto the Maxwellian direction; nonzero modes project to 0.
Eigen::VectorXd riesz_project(const KernelAssembly& kernels, const Eigen::VectorXd& f);
Eigen::MatrixXd riesz_projector(const KernelAssembly& kernels);
// Spectral projector r l^T / (l^T r) onto the eigenvalue of the zero-mode
// operator nearest 0 (left and right vectors by inverse iteration).
Eigen::MatrixXd spectral_projector(const KernelAssembly& kernels);

struct SpectrumReport {
    Mode n{};
    Eigen::VectorXcd eigenvalues; // sorted by modulus
    cplx nearest_zero{};
    double nearest_distance = 0.0;
    double second_distance = 0.0;
    bool simple = false; // second-nearest at least 10x farther than the nearest
    double gap = 0.0; // min Re over all eigenvalues except the nearest-to-zero one
    double min_real = 0.0; // min Re over all eigenvalues
};

SpectrumReport spectrum(const ModeOperator& op);
SpectrumReport spectrum_real(const Eigen::MatrixXd& op); // n = 0 path

enum class PropagatorMethod { pade, eigen };

struct Propagator {
    Eigen::MatrixXcd value;
    std::string method;
    double eigvec_condition = 0.0; // 1/rcond of the eigenvector matrix, eigen path only
};

// e^{-t L_n}. The eigen path is taken only when the eigenvector matrix is
// well conditioned (cond <= 1e8); otherwise Pade is used and the fallback recorded.
Propagator propagator(const ModeOperator& op, double t, PropagatorMethod method = PropagatorMethod::pade);

enum class DecayProjector { analytic, spectral };

// Induced L1 norms of e^{-t_k L0}(I - P) at t_k = k * step, k = 1..count,
// computed as powers of (I - P) e^{-step L0} (I - P). Exact when P commutes with L0,
// i.e. the analytic P0 at kappa = 0 or the spectral projector at any kappa.
std::vector<double> decay_norms(const KernelAssembly& kernels, double step, int count,
                                DecayProjector projector = DecayProjector::analytic);

// || K diag(e^{-t (nu + i n.v)}) K ||_{L1 -> L1}
double oscillatory_norm(const Mode& n, double t, const KernelAssembly& kernels);

struct DuhamelTerms {
    Eigen::MatrixXcd a0, a1, a2;
};

// A0 = e^{-t a}, A_k = -int_0^t e^{-(t-s) a} K A_{k-1}(s) ds with a = nu + i n.v, by composite Gauss-Legendre
// in s, so that e^{-t L_n} = A0 + A1 + A2 + O(t^3).
DuhamelTerms duhamel_terms(const Mode& n, double t, const KernelAssembly& kernels, int order = 10, int panels = 4);
Eigen::MatrixXcd duhamel_term(int k, const Mode& n, double t, const KernelAssembly& kernels, int order = 10,
                              int panels = 4);

struct ResolventProbe {
    double lower_bound = 0.0; // min of the two estimates below
    double random_min = 0.0; // min ||(I - K_zeta) g|| / ||g|| over random g
    double min_modulus = 0.0; // 1 / ||(I - K_zeta)^{-1}||, exact on the grid
    double multiplier_bound = 0.0; // max (1 + |v|) / |nu0 + i n.v - zeta|
    double kernel_norm = 0.0; // ||K_zeta||
};

// K_zeta = K0 (nu0 + i n.v - zeta)^{-1}; uses only the bath parts nu0, K0 of `kernels`.
ResolventProbe resolvent_lower_bound_probe(cplx zeta, const Mode& n, const KernelAssembly& kernels, int probes = 64,
                                           std::uint64_t seed = 1);

struct ContourSpec {
    double theta = 1.0;
    double psi = 1.0;
    Mode n{};
    double height() const { return psi * (mode_norm(n) + 1.0); }
};

// Theta = gap(L0) / 2, Psi = 2 * max node speed.
ContourSpec calibrate_contour(double zero_mode_gap, const VelocityGrid& grid, const Mode& n);

// Samples of Gamma_1 (bottom to top), Gamma_2 (beta from 0 to ray_length) and
// Gamma_3 (beta from 0 to ray_length), concatenated in that order.
std::vector<cplx> contour_points(const ContourSpec& spec, int samples_per_segment, double ray_length);
// Inside the region bounded by the contour (right of the polyline).
bool contour_contains(const ContourSpec& spec, cplx z);

} // namespace bathlab
