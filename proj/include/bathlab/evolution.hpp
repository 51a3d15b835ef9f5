#pragma once

#include "bathlab/collision.hpp"
#include "bathlab/collocation.hpp"
#include "bathlab/diagnostics.hpp"
#include "bathlab/kernels.hpp"

#include <functional>
#include <optional>
#include <string>

namespace bathlab {

enum class InitialKind { maxwellian, perturbed };
enum class Integrator { etd2, strang };

struct InitialCondition {
    InitialKind kind = InitialKind::perturbed;
    double amplitude = 0.05;
    Mode pattern{1, 0, 0}; // g0 = M + amplitude cos(pattern . x) e^{-width |v|^2}
    double width = 2.0;
};

// Builds g0, computes C_inf from it and returns f = g0 - C_inf M.
// Rejects data whose g0 is negative at a collocation point.
DistributionState initial_condition(const InitialCondition& ic, const VelocityGrid& grid, const SpatialModes& modes,
                                    const Collocation& colloc);

struct SimulationConfig {
    double extent = 6.0;
    int points_per_axis = 10;
    int polar_order = 6;
    int azimuthal_order = 12;
    int max_mode = 1;
    bool dealias = false; // 3 max_mode + 1 collocation points per axis instead of 2 max_mode + 1
    double kappa = 0.01;
    double dt = 0.01;
    double t_end = 10.0;
    InitialCondition initial;
    bool conservation_projection = true;
    double output_every = 0.1;
    Integrator integrator = Integrator::etd2;
    double fit_t_min = 2.0;
    double fit_t_max = -1.0; // < 0 means t_end
    int weight_exponent = 5;
    int derivative_order = 8;
    bool control_diagnostics = true;

    void validate() const;
    int collocation_points() const { return dealias ? 3 * max_mode + 1 : 2 * max_mode + 1; }
};

class Evolver {
public:
    // workspace may be null when kappa == 0 (the collision term is then skipped).
    Evolver(const KernelAssembly& kernels, const CollisionWorkspace* workspace, const SpatialModes& modes,
            const Collocation& colloc, double dt, Integrator integrator, bool conservation_projection);

    // -K f + kappa Q(f, f), Q evaluated pointwise in x
    Eigen::MatrixXcd nonlinear_rhs(const Eigen::MatrixXcd& f) const;
    // kappa Q(f, f) in mode space
    Eigen::MatrixXcd collision_term(const Eigen::MatrixXcd& f) const;
    void step(DistributionState& state) const;
    double dt() const { return dt_; }
    // distinct collocation columns seen in the last collision evaluation
    std::size_t last_distinct_columns() const { return last_distinct_; }

private:
    const KernelAssembly& kernels_;
    const CollisionWorkspace* workspace_;
    const SpatialModes& modes_;
    const Collocation& colloc_;
    double dt_;
    Integrator integrator_;
    bool projection_;
    Eigen::MatrixXcd exp_full_, exp_half_, phi1_, phi2_;
    mutable std::size_t last_distinct_ = 0;
};

struct Sample {
    double t = 0.0;
    double distance = 0.0; // ||g - C_inf M||_1
    double mass = 0.0;
    double min_g = 0.0;
    double derivative_norm = 0.0; // sum_{|alpha|<=8} ||d^alpha f||_1
    double weighted_derivative_norm = 0.0; // with <v>^{2m+2}
    bool norm_guard_exceeded = false; // derivative_norm > kappa^{-1/4}
};

struct RunResult {
    std::vector<Sample> samples;
    ConvergenceReport report;
    ControlFunctions control;
    DistributionState final_state;
    bool failed = false;
    std::string failure;
    bool fit_ok = false;
    std::string fit_error;
};

struct RunHooks {
    // called after every step whose index is a multiple of checkpoint_every (0 disables)
    std::uint64_t checkpoint_every = 0;
    std::function<void(const DistributionState&)> on_checkpoint;
    std::function<void(const Sample&)> on_sample;
};

// Advance from `start` (or the configured initial condition) to t_end.
RunResult run(const SimulationConfig& config, const std::optional<DistributionState>& start = std::nullopt,
              const RunHooks& hooks = {});

} // namespace bathlab
