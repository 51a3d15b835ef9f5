#include "bathlab/evolution.hpp"

#include "bathlab/modal.hpp"

#include <cmath>
#include <cstring>
#include <unordered_map>

namespace bathlab {

DistributionState initial_condition(const InitialCondition& ic, const VelocityGrid& grid, const SpatialModes& modes,
                                    const Collocation& colloc)
{
    if (!std::isfinite(ic.amplitude))
        throw ConfigError("initial amplitude must be finite");
    const auto nodes = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXcd g0 = Eigen::MatrixXcd::Zero(nodes, static_cast<Eigen::Index>(modes.size()));
    const auto z = static_cast<Eigen::Index>(modes.zero_index());
    Eigen::VectorXd m(nodes), bump(nodes);
    for (Eigen::Index i = 0; i < nodes; ++i) {
        const Vec3& v = grid.node(static_cast<std::size_t>(i));
        m[i] = maxwellian(v);
        bump[i] = std::exp(-ic.width * norm_sq(v));
    }
    g0.col(z) = m.cast<cplx>();
    if (ic.kind == InitialKind::perturbed && ic.amplitude != 0.0) {
        for (int a : ic.pattern)
            if (std::abs(a) > modes.max_mode())
                throw ConfigError("initial pattern mode is not among the retained modes");
        const auto p = static_cast<Eigen::Index>(modes.index_of(ic.pattern));
        const Mode neg{-ic.pattern[0], -ic.pattern[1], -ic.pattern[2]};
        const auto q = static_cast<Eigen::Index>(modes.index_of(neg));
        if (p == q) {
            g0.col(p) += (ic.amplitude * bump).cast<cplx>();
        } else {
            g0.col(p) += (0.5 * ic.amplitude * bump).cast<cplx>();
            g0.col(q) += (0.5 * ic.amplitude * bump).cast<cplx>();
        }
    }
    if (colloc.to_points(g0).minCoeff() < 0.0)
        throw ConfigError("initial condition is negative at a collocation point");

    DistributionState s;
    s.c_infinity = compute_C_infinity(g0, modes, grid);
    s.coeff = std::move(g0);
    s.coeff.col(z) -= (s.c_infinity * m).cast<cplx>();
    return s;
}

void SimulationConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw ConfigError("t_end must be positive");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw ConfigError("kappa must be >= 0");
    if (max_mode < 0)
        throw ConfigError("max_mode must be >= 0");
    if (!(output_every > 0.0))
        throw ConfigError("output_every must be positive");
    const double ratio = output_every / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
        throw ConfigError("output_every must be a positive integer multiple of dt");
    const double steps = t_end / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
        throw ConfigError("t_end must be an integer multiple of dt");
    if (weight_exponent < 0 || derivative_order < 0)
        throw ConfigError("weight exponent and derivative order must be >= 0");
    (void)build_velocity_grid(extent, points_per_axis);
    (void)build_sphere_quadrature(polar_order, azimuthal_order);
}

Evolver::Evolver(const KernelAssembly& kernels, const CollisionWorkspace* workspace, const SpatialModes& modes,
                 const Collocation& colloc, double dt, Integrator integrator, bool conservation_projection)
    : kernels_(kernels), workspace_(workspace), modes_(modes), colloc_(colloc), dt_(dt), integrator_(integrator),
      projection_(conservation_projection)
{
    if (kernels.kappa > 0.0 && !workspace)
        throw ContractViolation("Evolver: kappa > 0 needs a collision workspace");
    if (workspace && !workspace->grid().same_as(kernels.grid))
        throw ContractViolation("Evolver: workspace grid differs from the kernel grid");
    const auto nodes = static_cast<Eigen::Index>(kernels.grid.size());
    const auto count = static_cast<Eigen::Index>(modes.size());
    exp_full_.resize(nodes, count);
    exp_half_.resize(nodes, count);
    phi1_.resize(nodes, count);
    phi2_.resize(nodes, count);
    for (Eigen::Index q = 0; q < count; ++q) {
        const Eigen::VectorXcd a = mode_symbol(modes.mode(static_cast<std::size_t>(q)), kernels);
        for (Eigen::Index i = 0; i < nodes; ++i) {
            const cplx z = -dt * a[i];
            const cplx e = std::exp(z);
            exp_full_(i, q) = e;
            exp_half_(i, q) = std::exp(0.5 * z);
            if (std::abs(z) < 1e-4) {
                phi1_(i, q) = 1.0 + z / 2.0 + z * z / 6.0;
                phi2_(i, q) = 0.5 + z / 6.0 + z * z / 24.0;
            } else {
                phi1_(i, q) = (e - 1.0) / z;
                phi2_(i, q) = (e - 1.0 - z) / (z * z);
            }
        }
    }
}

Eigen::MatrixXcd Evolver::collision_term(const Eigen::MatrixXcd& f) const
{
    if (kernels_.kappa == 0.0 || !workspace_)
        return Eigen::MatrixXcd::Zero(f.rows(), f.cols());
    const Eigen::MatrixXd pts = colloc_.to_points(f);
    const Eigen::Index cols = pts.cols();
    const std::size_t bytes = static_cast<std::size_t>(pts.rows()) * sizeof(double);

    // x-independent directions of the data give bitwise-identical columns; evaluate each once
    std::vector<Eigen::Index> rep(static_cast<std::size_t>(cols));
    std::vector<Eigen::Index> distinct;
    std::unordered_multimap<std::size_t, Eigen::Index> seen;
    for (Eigen::Index c = 0; c < cols; ++c) {
        const auto* p = reinterpret_cast<const unsigned char*>(pts.col(c).data());
        std::size_t h = 1469598103934665603ull;
        for (std::size_t b = 0; b < bytes; ++b)
            h = (h ^ p[b]) * 1099511628211ull;
        Eigen::Index found = -1;
        auto range = seen.equal_range(h);
        for (auto it = range.first; it != range.second; ++it)
            if (std::memcmp(pts.col(distinct[static_cast<std::size_t>(it->second)]).data(), p, bytes) == 0) {
                found = it->second;
                break;
            }
        if (found < 0) {
            found = static_cast<Eigen::Index>(distinct.size());
            distinct.push_back(c);
            seen.emplace(h, found);
        }
        rep[static_cast<std::size_t>(c)] = found;
    }
    last_distinct_ = distinct.size();

    Eigen::MatrixXd unique(pts.rows(), static_cast<Eigen::Index>(distinct.size()));
    for (std::size_t k = 0; k < distinct.size(); ++k)
        unique.col(static_cast<Eigen::Index>(k)) = pts.col(distinct[k]);
    const Eigen::MatrixXd q = workspace_->evaluate_columns(unique, unique);
    Eigen::MatrixXd full(pts.rows(), cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        full.col(c) = q.col(rep[static_cast<std::size_t>(c)]);
    return kernels_.kappa * colloc_.from_points(full);
}

Eigen::MatrixXcd Evolver::nonlinear_rhs(const Eigen::MatrixXcd& f) const
{
    Eigen::MatrixXcd out = collision_term(f);
    out.real().noalias() -= kernels_.K * f.real();
    out.imag().noalias() -= kernels_.K * f.imag();
    return out;
}

void Evolver::step(DistributionState& state) const
{
    Eigen::MatrixXcd& f = state.coeff;
    if (integrator_ == Integrator::etd2) {
        const Eigen::MatrixXcd n0 = nonlinear_rhs(f);
        const Eigen::MatrixXcd a = exp_full_.cwiseProduct(f) + dt_ * phi1_.cwiseProduct(n0);
        const Eigen::MatrixXcd n1 = nonlinear_rhs(a);
        f = a + dt_ * phi2_.cwiseProduct(n1 - n0);
    } else {
        f = exp_half_.cwiseProduct(f);
        const Eigen::MatrixXcd mid = f + 0.5 * dt_ * nonlinear_rhs(f);
        f += dt_ * nonlinear_rhs(mid);
        f = exp_half_.cwiseProduct(f);
    }
    enforce_conjugate_symmetry(modes_, f);
    if (projection_) {
        const auto z = static_cast<Eigen::Index>(modes_.zero_index());
        const double c = f.col(z).real().sum() / kernels_.maxwellian.sum();
        f.col(z) -= (c * kernels_.maxwellian).cast<cplx>();
    }
    if (!f.allFinite())
        throw NumericalError("non-finite state after step " + std::to_string(state.step + 1) + " (t = " +
                             std::to_string((state.step + 1) * dt_) + "); reduce dt");
    ++state.step;
    state.time = static_cast<double>(state.step) * dt_;
}

RunResult run(const SimulationConfig& config, const std::optional<DistributionState>& start, const RunHooks& hooks)
{
    config.validate();
    const VelocityGrid grid = build_velocity_grid(config.extent, config.points_per_axis);
    const SphereQuadrature sphere = build_sphere_quadrature(config.polar_order, config.azimuthal_order);
    const SpatialModes modes = build_spatial_modes(config.max_mode);
    const Collocation colloc(modes, config.collocation_points());

    DistributionState state;
    if (start) {
        state = *start;
        if (state.coeff.rows() != static_cast<Eigen::Index>(grid.size()) ||
            state.coeff.cols() != static_cast<Eigen::Index>(modes.size()))
            throw ConfigError("restart state does not match the configured resolution");
    } else {
        state = initial_condition(config.initial, grid, modes, colloc);
    }

    const KernelAssembly kernels = assemble_kernels(grid, config.kappa, state.c_infinity);
    if (config.dt * kernels.nu.maxCoeff() > 10.0)
        throw ConfigError("dt * max(nu) exceeds 10; reduce dt");
    std::optional<CollisionWorkspace> workspace;
    if (config.kappa > 0.0)
        workspace.emplace(grid, sphere, config.conservation_projection);
    const Evolver evolver(kernels, workspace ? &*workspace : nullptr, modes, colloc, config.dt, config.integrator,
                          config.conservation_projection);

    const auto per_sample = static_cast<std::uint64_t>(std::llround(config.output_every / config.dt));
    const auto total = static_cast<std::uint64_t>(std::llround(config.t_end / config.dt));
    const double guard = config.kappa > 0.0 ? std::pow(config.kappa, -0.25) : std::numeric_limits<double>::infinity();

    RunResult result;
    auto sample = [&]() {
        Sample s;
        s.t = state.time;
        s.distance = l1_distance_to_maxwellian(state, colloc, grid);
        s.mass = total_mass(state, modes, kernels);
        s.min_g = min_reconstructed_g(state, colloc, kernels);
        if (config.control_diagnostics) {
            const DerivativeNorms d =
                derivative_norms(state, colloc, grid, config.derivative_order, 2.0 * config.weight_exponent + 2.0);
            s.derivative_norm = d.plain;
            s.weighted_derivative_norm = d.weighted;
            s.norm_guard_exceeded = d.plain > guard;
        }
        result.samples.push_back(s);
        if (hooks.on_sample)
            hooks.on_sample(s);
    };

    try {
        while (true) {
            if (state.step % per_sample == 0)
                sample();
            if (state.step >= total)
                break;
            evolver.step(state);
            if (hooks.checkpoint_every > 0 && state.step % hooks.checkpoint_every == 0 && hooks.on_checkpoint)
                hooks.on_checkpoint(state);
        }
    } catch (const NumericalError& e) {
        result.failed = true;
        result.failure = e.what();
    }
    result.final_state = state;

    for (const Sample& s : result.samples) {
        result.report.times.push_back(s.t);
        result.report.distances.push_back(s.distance);
    }
    const double t_max = config.fit_t_max < 0.0 ? config.t_end : config.fit_t_max;
    try {
        result.report.fit = fit_exponential_rate(result.report.times, result.report.distances, config.fit_t_min, t_max);
        result.fit_ok = true;
    } catch (const NumericalError& e) {
        result.fit_error = e.what();
    }
    std::vector<double> plain, weighted;
    for (const Sample& s : result.samples) {
        plain.push_back(s.derivative_norm);
        weighted.push_back(s.weighted_derivative_norm);
    }
    result.control = control_functions(result.report.times, plain, weighted, result.fit_ok ? result.report.fit.c0 : 0.0);
    return result;
}

} // namespace bathlab
