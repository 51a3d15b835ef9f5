#include "bathlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace bathlab {

double l1_distance_to_maxwellian(const DistributionState& state, const Collocation& colloc, const VelocityGrid& grid)
{
    const Eigen::MatrixXd f = colloc.to_points(state.coeff);
    return torus_volume * grid.weight() * f.cwiseAbs().sum() / double(colloc.point_count());
}

double mode_sum_norm(const DistributionState& state, const VelocityGrid& grid)
{
    return torus_volume * grid.weight() * state.coeff.cwiseAbs().sum();
}

double total_mass(const DistributionState& state, const SpatialModes& modes, const KernelAssembly& kernels)
{
    const auto z = static_cast<Eigen::Index>(modes.zero_index());
    const double w = kernels.grid.weight();
    return torus_volume * w * (state.c_infinity * kernels.maxwellian.sum() + state.coeff.col(z).real().sum());
}

double min_reconstructed_g(const DistributionState& state, const Collocation& colloc, const KernelAssembly& kernels)
{
    Eigen::MatrixXd g = colloc.to_points(state.coeff);
    g.colwise() += state.c_infinity * kernels.maxwellian;
    return g.minCoeff();
}

double compute_C_infinity(const Eigen::MatrixXcd& g0, const SpatialModes& modes, const VelocityGrid& grid)
{
    const auto z = static_cast<Eigen::Index>(modes.zero_index());
    double m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        m += maxwellian(grid.node(i));
    const double mass = g0.col(z).real().sum();
    if (!(mass > 0.0))
        throw ConfigError("initial state must have positive mass");
    return mass / m;
}

DerivativeNorms derivative_norms(const DistributionState& state, const Collocation& colloc, const VelocityGrid& grid,
                                 int max_order, double weight_exponent)
{
    Eigen::VectorXd weight(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        weight[i] = std::pow(japanese(grid.node(i)), weight_exponent);
    const double scale = torus_volume * grid.weight() / double(colloc.point_count());
    DerivativeNorms out;
    for (int a = 0; a <= max_order; ++a)
        for (int b = 0; a + b <= max_order; ++b)
            for (int c = 0; a + b + c <= max_order; ++c) {
                const Eigen::MatrixXd d = colloc.to_points(state.coeff, {a, b, c}).cwiseAbs();
                out.plain += scale * d.sum();
                out.weighted += scale * (weight.asDiagonal() * d).sum();
            }
    return out;
}

FitResult fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values, double t_min,
                               double t_max)
{
    if (times.size() != values.size())
        throw ContractViolation("fit_exponential_rate: length mismatch");
    std::vector<double> t, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_min || times[i] > t_max)
            continue;
        if (!(values[i] > 0.0))
            throw NumericalError("fit_exponential_rate: non-positive value in fit window");
        t.push_back(times[i]);
        y.push_back(std::log(values[i]));
    }
    if (t.size() < 5)
        throw NumericalError("fit_exponential_rate: fewer than 5 samples in window");
    const double n = double(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double mt = st / n, my = sy / n;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
    }
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    const double intercept = my - slope * mt;
    FitResult r;
    r.c0 = -slope;
    r.c1 = std::exp(intercept);
    r.t_min = t.front();
    r.t_max = t.back();
    r.samples = t.size();
    for (std::size_t i = 0; i < t.size(); ++i)
        r.residual = std::max(r.residual, std::abs(y[i] - (intercept + slope * t[i])));
    return r;
}

ControlFunctions control_functions(const std::vector<double>& times, const std::vector<double>& plain,
                                   const std::vector<double>& weighted, double c0_guess)
{
    if (times.size() != plain.size() || times.size() != weighted.size())
        throw ContractViolation("control_functions: length mismatch");
    ControlFunctions cf;
    cf.times = times;
    double running = 0.0, integral = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double v = c0_guess == 0.0 ? plain[i] : std::exp(c0_guess * times[i]) * plain[i];
        running = i == 0 ? v : std::max(running, v);
        if (i > 0)
            integral += 0.5 * (times[i] - times[i - 1]) * (weighted[i] + weighted[i - 1]);
        cf.running_max.push_back(running);
        cf.integral.push_back(integral);
    }
    return cf;
}

Eigen::VectorXd random_smooth_vector(const VelocityGrid& grid, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double reach = 0.5 * grid.extent();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
    const int bumps = 1 + static_cast<int>(unit(rng) * 3.0);
    for (int b = 0; b < bumps; ++b) {
        const Vec3 c{reach * (2.0 * unit(rng) - 1.0), reach * (2.0 * unit(rng) - 1.0), reach * (2.0 * unit(rng) - 1.0)};
        const double width = 0.5 + unit(rng);
        const double amp = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + unit(rng));
        for (std::size_t i = 0; i < grid.size(); ++i)
            f[static_cast<Eigen::Index>(i)] += amp * std::exp(-norm_sq(grid.node(i) - c) / (2.0 * width * width));
    }
    return f;
}

InequalityReport inequality_probe_suite(const KernelAssembly& kernels, const CollisionWorkspace& workspace,
                                        int sample_count, int q_samples, int m, std::uint64_t seed)
{
    const auto& grid = kernels.grid;
    if (kernels.K1.rows() == 0)
        throw ContractViolation("inequality_probe_suite: K1 not assembled (kappa == 0)");
    InequalityReport r;
    r.points_per_axis = grid.points_per_axis();
    r.lambda_nu0 = r.lambda_nu1 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = 1.0 + norm(grid.node(i));
        r.lambda_nu0 = std::min(r.lambda_nu0, kernels.nu0[i] / s);
        r.lambda_nu1 = std::min(r.lambda_nu1, kernels.nu1[i] / s);
    }
    auto wl1 = [&](const Eigen::VectorXd& f, double e) {
        return weighted_l1(grid, std::span<const double>(f.data(), f.size()), e);
    };
    std::mt19937_64 rng(seed);
    for (int s = 0; s < sample_count; ++s) {
        const Eigen::VectorXd f = random_smooth_vector(grid, rng);
        r.k0_ratio = std::max(r.k0_ratio, wl1(kernels.K0 * f, m) / wl1(f, 1));
        r.k1_ratio = std::max(r.k1_ratio, wl1(kernels.K1 * f, m) / wl1(f, m + 1));
    }
    for (int s = 0; s < q_samples; ++s) {
        const Eigen::VectorXd f = random_smooth_vector(grid, rng);
        const Eigen::VectorXd g = random_smooth_vector(grid, rng);
        const BoundProbe p = weighted_bound_probe(workspace, std::span<const double>(f.data(), f.size()),
                                                  std::span<const double>(g.data(), g.size()), m);
        r.q_ratio = std::max(r.q_ratio, p.ratio);
    }
    return r;
}

} // namespace bathlab
