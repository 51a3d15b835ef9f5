#include "bathlab/commands.hpp"

#include "bathlab/checkpoint.hpp"
#include "bathlab/csv.hpp"
#include "bathlab/evolution.hpp"
#include "bathlab/modal.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace bathlab {

namespace {

namespace fs = std::filesystem;

void write_manifest(const RunConfig& config, const CommandContext& ctx, const std::string& status,
                    const std::string& failure = {})
{
    std::ofstream out(ctx.out_dir / "manifest.txt", std::ios::trunc);
    out << "command = " << config.command() << "\n";
    out << config.resolved_text();
    out << "seed = " << ctx.seed << "\n";
    out << "threads = " << ctx.threads << "\n";
    out << "status = " << status << "\n";
    if (!failure.empty())
        out << "failure = " << failure << "\n";
}

void prepare_out_dir(const CommandContext& ctx)
{
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec || !fs::is_directory(ctx.out_dir))
        throw ConfigError("cannot create output directory " + ctx.out_dir.string());
}

VelocityGrid grid_from(const RunConfig& c)
{
    return build_velocity_grid(c.get_double("extent"), c.get_int("points_per_axis"));
}

double kappa_from(const RunConfig& c)
{
    const double kappa = c.get_double("kappa");
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw ConfigError("kappa must be >= 0");
    return kappa;
}

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

double l1_of(const VelocityGrid& grid, const Eigen::VectorXd& f)
{
    return grid.l1(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
}

void write_summary(const fs::path& path, const std::vector<std::pair<std::string, std::string>>& entries)
{
    std::ofstream out(path, std::ios::trunc);
    for (const auto& [k, v] : entries)
        out << k << " = " << v << "\n";
}

std::string num(double x) { return format_number(x); }

} // namespace

std::string mode_tag(const Mode& n)
{
    return "n" + std::to_string(n[0]) + "_" + std::to_string(n[1]) + "_" + std::to_string(n[2]);
}

namespace {

struct StationarityResiduals {
    double collision = 0.0; // ||Q(M, M)|| / ||nu1 M||
    double linear = 0.0; // ||(nu + K) M|| / ||nu M||
    double cross_form = 0.0; // ||(K1_explicit - K1_collision) M|| / ||K1_collision M||
};

StationarityResiduals stationarity_residuals(const VelocityGrid& grid, const SphereQuadrature& sphere, double kappa)
{
    const Eigen::VectorXd m = maxwellian(grid);
    const std::span<const double> ms(m.data(), static_cast<std::size_t>(m.size()));
    const CollisionWorkspace ws(grid, sphere, false);
    const std::vector<double> qmm = ws.evaluate(ms, ms);
    const Nu1 nu1 = compute_nu1(grid, sphere);
    const Eigen::MatrixXd K1 = assemble_K1_explicit(grid);
    const Eigen::VectorXd k1c = assemble_K1_collision(grid, sphere) * m;
    const KernelAssembly kernels = combine(grid, compute_nu0(grid), assemble_K0(grid), nu1.reduced_form, K1, kappa, 1.0);
    StationarityResiduals r;
    r.collision = relative(grid.l1(qmm), l1_of(grid, nu1.reduced_form.cwiseProduct(m)));
    r.linear = relative(l1_of(grid, kernels.nu.cwiseProduct(m) + kernels.K * m), l1_of(grid, kernels.nu.cwiseProduct(m)));
    r.cross_form = relative(l1_of(grid, K1 * m - k1c), l1_of(grid, k1c));
    return r;
}

} // namespace

std::vector<CheckResult> verify_checks(const RunConfig& config, std::uint64_t seed)
{
    const double extent = config.get_double("extent");
    const int n = config.get_int("points_per_axis");
    const VelocityGrid grid = build_velocity_grid(extent, n);
    const SphereQuadrature sphere = build_sphere_quadrature(config.get_int("polar_order"), config.get_int("azimuthal_order"));
    const double kappa = kappa_from(config);
    if (!(kappa > 0.0))
        throw ConfigError("verify needs kappa > 0");
    const int samples = config.get_int("samples");
    if (samples < 1)
        throw ConfigError("samples must be >= 1");
    const BathKernel bath{config.get_double("r0_asymmetry")};

    std::vector<CheckResult> out;
    auto add = [&](std::string name, double value, const std::string& tol_key, std::string detail = {}) {
        const double tol = config.get_double(tol_key);
        out.push_back({std::move(name), value, tol, std::isfinite(value) && value <= tol, std::move(detail)});
    };

    add("detailed_balance", detailed_balance_defect(grid, bath), "tol_detailed_balance");

    const Eigen::VectorXd m = maxwellian(grid);
    const Eigen::VectorXd nu0m = compute_nu0(grid, bath).cwiseProduct(m);
    add("bath_stationarity", relative(l1_of(grid, assemble_K0(grid, bath) * m - nu0m), l1_of(grid, nu0m)),
        "tol_bath_stationarity");

    // resolution-dependent residuals must shrink from points_per_axis to points_per_axis + 4
    const StationarityResiduals coarse = stationarity_residuals(grid, sphere, kappa);
    const StationarityResiduals fine = stationarity_residuals(build_velocity_grid(extent, n + 4), sphere, kappa);
    auto pair = [](double c, double f) { return "coarse=" + num(c) + " fine=" + num(f); };
    add("collision_stationarity_refinement", relative(fine.collision, coarse.collision), "tol_refinement",
        pair(coarse.collision, fine.collision));
    add("linear_stationarity_refinement", relative(fine.linear, coarse.linear), "tol_refinement",
        pair(coarse.linear, fine.linear));
    add("cross_form_k1_refinement", relative(fine.cross_form, coarse.cross_form), "tol_refinement",
        pair(coarse.cross_form, fine.cross_form));

    const KernelAssembly kernels = assemble_kernels(grid, kappa, 1.0);
    const Eigen::MatrixXd P = riesz_projector(kernels);
    const double idem = induced_l1_norm(Eigen::MatrixXd(P * P - P));
    const double fixes = relative(l1_of(grid, P * m - m), l1_of(grid, m));
    add("projection", std::max(idem, fixes), "tol_projection");

    // discrete collision mass against ||f||_1 for random smooth f
    std::mt19937_64 rng(seed);
    double drift = 0.0, drift_projected = 0.0;
    const CollisionWorkspace ws(grid, sphere, false);
    const CollisionWorkspace wsp(grid, sphere, true);
    for (int s = 0; s < samples; ++s) {
        const Eigen::VectorXd f = random_smooth_vector(grid, rng);
        const std::span<const double> fs(f.data(), static_cast<std::size_t>(f.size()));
        drift = std::max(drift, std::abs(grid.integrate(ws.evaluate(fs, fs))) / grid.l1(fs));
        const std::vector<double> qp = wsp.evaluate(fs, fs);
        drift_projected = std::max(drift_projected, relative(std::abs(grid.integrate(qp)), grid.l1(qp)));
    }
    add("conservation", drift, "tol_conservation");
    out.push_back({"conservation_projected", drift_projected, 1e-13, drift_projected <= 1e-13, {}});
    return out;
}

int cmd_verify(const RunConfig& config, const CommandContext& ctx)
{
    (void)grid_from(config);
    prepare_out_dir(ctx);
    write_manifest(config, ctx, "running");
    const auto checks = verify_checks(config, ctx.seed);
    CsvWriter csv(ctx.out_dir / "verify.csv", {"check", "value", "tolerance", "status", "detail"});
    bool ok = true;
    for (const auto& c : checks) {
        csv.cell(c.name).cell(c.value).cell(c.tolerance).cell(std::string(c.pass ? "PASS" : "FAIL")).cell(c.detail);
        csv.end_row();
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << num(c.value) << " tol=" << num(c.tolerance)
                  << "\n";
        ok = ok && c.pass;
    }
    write_manifest(config, ctx, ok ? "ok" : "failed", ok ? "" : "one or more checks failed");
    return ok ? 0 : 1;
}

int cmd_spectrum(const RunConfig& config, const CommandContext& ctx)
{
    const VelocityGrid grid = grid_from(config);
    const double kappa = kappa_from(config);
    const auto modes = config.get_modes("modes");
    const int samples = config.get_int("contour_samples");
    const double ray = config.get_double("ray_length");
    const bool compare = config.get_bool("compare_kappa0");
    if (modes.empty())
        throw ConfigError("modes must list at least one mode");
    if (samples < 2 || !(ray > 0.0))
        throw ConfigError("contour_samples must be >= 2 and ray_length > 0");
    prepare_out_dir(ctx);
    write_manifest(config, ctx, "running");

    const KernelAssembly kernels = assemble_kernels(grid, kappa, 1.0);
    std::optional<KernelAssembly> bath;
    if (compare)
        bath = assemble_kernels(grid, 0.0, 1.0);

    const SpectrumReport zero = spectrum_real(zero_mode_operator(kernels));
    std::optional<ContourSpec> base;
    try {
        base = calibrate_contour(zero.gap, grid, Mode{0, 0, 0});
    } catch (const NumericalError&) {
    }

    std::vector<std::string> header{"n0", "n1", "n2", "status", "nearest_re", "nearest_im", "nearest_distance",
                                    "simple", "gap", "min_real", "theta", "psi", "outside_contour"};
    if (compare)
        header.insert(header.end(), {"gap_kappa0", "gap_difference"});
    header.push_back("zero_mode");
    CsvWriter summary(ctx.out_dir / "spectrum_summary.csv", header);
    bool ok = true;
    for (const Mode& n : modes) {
        const bool is_zero = n == Mode{0, 0, 0};
        try {
            const SpectrumReport r = is_zero ? zero : spectrum(assemble_mode_operator(n, kernels));
            {
                CsvWriter ev(ctx.out_dir / ("eigenvalues_" + mode_tag(n) + ".csv"), {"index", "re", "im"});
                for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) {
                    ev.cell(static_cast<long long>(k)).cell(r.eigenvalues[k].real()).cell(r.eigenvalues[k].imag());
                    ev.end_row();
                }
            }
            long long outside = -1;
            if (base) {
                ContourSpec spec = *base;
                spec.n = n;
                CsvWriter cc(ctx.out_dir / ("contour_" + mode_tag(n) + ".csv"), {"segment", "re", "im"});
                const auto pts = contour_points(spec, samples, ray);
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    cc.cell(static_cast<long long>(k / samples + 1)).cell(pts[k].real()).cell(pts[k].imag());
                    cc.end_row();
                }
                outside = 0;
                for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k)
                    if (!(is_zero && k == 0) && !contour_contains(spec, r.eigenvalues[k]))
                        ++outside;
            }
            summary.cell(n[0]).cell(n[1]).cell(n[2]).cell(std::string("ok"));
            summary.cell(r.nearest_zero.real()).cell(r.nearest_zero.imag()).cell(r.nearest_distance);
            summary.cell(r.simple ? 1 : 0).cell(r.gap).cell(r.min_real);
            summary.cell(base ? base->theta : std::nan("")).cell(base ? base->psi : std::nan("")).cell(outside);
            if (compare) {
                const SpectrumReport b = is_zero ? spectrum_real(zero_mode_operator(*bath))
                                                 : spectrum(assemble_mode_operator(n, *bath));
                summary.cell(b.gap).cell(r.gap - b.gap);
            }
            summary.cell(is_zero ? 1 : 0);
            summary.end_row();
        } catch (const NumericalError& e) {
            ok = false;
            summary.cell(n[0]).cell(n[1]).cell(n[2]).cell(std::string("error: ") + e.what());
            for (std::size_t k = 4; k < header.size(); ++k)
                summary.cell(std::string());
            summary.end_row();
        }
    }
    write_manifest(config, ctx, ok ? "ok" : "failed", ok ? "" : "eigensolver failure for at least one mode");
    return ok ? 0 : 1;
}

int cmd_propagator(const RunConfig& config, const CommandContext& ctx)
{
    const VelocityGrid grid = grid_from(config);
    const double kappa = kappa_from(config);
    const double step = config.get_double("decay_step");
    const int count = config.get_int("decay_count");
    const std::string proj_name = config.get_string("decay_projector");
    const auto osc_modes = config.get_modes("osc_modes");
    const double osc_t = config.get_double("osc_sweep_t");
    const Mode env_mode = config.get_mode("envelope_mode");
    const auto env_times = config.get_doubles("envelope_times");
    if (!(step > 0.0) || count < 5)
        throw ConfigError("decay_step must be positive and decay_count >= 5");
    if (proj_name != "analytic" && proj_name != "spectral")
        throw ConfigError("decay_projector must be analytic or spectral");
    if (!(osc_t >= 0.0) || env_times.empty())
        throw ConfigError("osc_sweep_t must be >= 0 and envelope_times nonempty");
    for (double t : env_times)
        if (!(t > 0.0))
            throw ConfigError("envelope_times must be positive");
    prepare_out_dir(ctx);
    write_manifest(config, ctx, "running");

    const KernelAssembly kernels = assemble_kernels(grid, kappa, 1.0);
    const DecayProjector projector = proj_name == "analytic" ? DecayProjector::analytic : DecayProjector::spectral;

    const Eigen::MatrixXd P = projector == DecayProjector::analytic ? riesz_projector(kernels) : spectral_projector(kernels);
    const double baseline = induced_l1_norm(Eigen::MatrixXd(Eigen::MatrixXd::Identity(P.rows(), P.cols()) - P));
    const std::vector<double> norms = decay_norms(kernels, step, count, projector);
    std::vector<double> times;
    {
        CsvWriter csv(ctx.out_dir / "decay.csv", {"t", "norm"});
        csv.cell(0.0).cell(baseline);
        csv.end_row();
        for (int k = 0; k < count; ++k) {
            times.push_back((k + 1) * step);
            csv.cell(times.back()).cell(norms[k]);
            csv.end_row();
        }
    }
    std::vector<std::pair<std::string, std::string>> summary{{"baseline_norm", num(baseline)}};
    bool ok = true;
    try {
        const FitResult fit = fit_exponential_rate(times, norms, times.front(), times.back());
        summary.insert(summary.end(), {{"decay_c0", num(fit.c0)}, {"decay_c1", num(fit.c1)},
                                       {"decay_residual", num(fit.residual)}});
    } catch (const NumericalError& e) {
        ok = false;
        summary.emplace_back("decay_fit_error", e.what());
    }
    bool monotone = true;
    for (std::size_t k = 1; k < norms.size(); ++k)
        monotone = monotone && norms[k] < norms[k - 1];
    summary.emplace_back("decay_monotone", monotone ? "true" : "false");

    {
        CsvWriter csv(ctx.out_dir / "oscillatory.csv", {"n0", "n1", "n2", "abs_n", "t", "norm", "scaled_norm"});
        double prev = std::numeric_limits<double>::infinity();
        bool decreasing = true;
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const Mode& n : osc_modes) {
            const double v = oscillatory_norm(n, osc_t, kernels);
            const double scaled = v * (1.0 + mode_norm(n) * osc_t);
            csv.cell(n[0]).cell(n[1]).cell(n[2]).cell(mode_norm(n)).cell(osc_t).cell(v).cell(scaled);
            csv.end_row();
            decreasing = decreasing && v < prev;
            prev = v;
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        summary.emplace_back("oscillatory_decreasing", decreasing ? "true" : "false");
        summary.emplace_back("oscillatory_scaled_ratio", num(hi / lo));
    }

    {
        CsvWriter csv(ctx.out_dir / "envelope.csv", {"t", "norm", "method"});
        std::vector<double> values;
        for (double t : env_times) {
            const Propagator p = propagator(assemble_mode_operator(env_mode, kernels), t);
            values.push_back(induced_l1_norm(p.value));
            csv.cell(t).cell(values.back()).cell(p.method);
            csv.end_row();
        }
        if (env_times.size() >= 5) {
            try {
                const FitResult fit = fit_exponential_rate(env_times, values, env_times.front(), env_times.back());
                // shift C1 up so that the envelope C1 e^{-C0 t} bounds every sample
                summary.insert(summary.end(), {{"envelope_c0", num(fit.c0)},
                                               {"envelope_c1", num(fit.c1 * std::exp(fit.residual))},
                                               {"envelope_residual", num(fit.residual)}});
            } catch (const NumericalError& e) {
                summary.emplace_back("envelope_fit_error", e.what());
            }
        }
    }
    write_summary(ctx.out_dir / "propagator_summary.txt", summary);
    write_manifest(config, ctx, ok ? "ok" : "failed", ok ? "" : "decay fit failed");
    return ok ? 0 : 1;
}

namespace {

SimulationConfig simulation_config(const RunConfig& c)
{
    SimulationConfig s;
    s.extent = c.get_double("extent");
    s.points_per_axis = c.get_int("points_per_axis");
    s.polar_order = c.get_int("polar_order");
    s.azimuthal_order = c.get_int("azimuthal_order");
    s.max_mode = c.get_int("max_mode");
    s.dealias = c.get_bool("dealias");
    s.kappa = c.get_double("kappa");
    s.dt = c.get_double("dt");
    s.t_end = c.get_double("t_end");
    const std::string kind = c.get_string("initial");
    if (kind == "maxwellian")
        s.initial.kind = InitialKind::maxwellian;
    else if (kind == "perturbed")
        s.initial.kind = InitialKind::perturbed;
    else
        throw ConfigError("initial must be maxwellian or perturbed");
    s.initial.amplitude = c.get_double("amplitude");
    s.initial.pattern = c.get_mode("pattern");
    s.initial.width = c.get_double("width");
    s.conservation_projection = c.get_bool("conservation_projection");
    s.output_every = c.get_double("output_every");
    const std::string integ = c.get_string("integrator");
    if (integ == "etd2")
        s.integrator = Integrator::etd2;
    else if (integ == "strang")
        s.integrator = Integrator::strang;
    else
        throw ConfigError("integrator must be etd2 or strang");
    s.fit_t_min = c.get_double("fit_t_min");
    s.fit_t_max = c.get_double("fit_t_max");
    s.weight_exponent = c.get_int("weight_exponent");
    s.derivative_order = c.get_int("derivative_order");
    s.control_diagnostics = c.get_bool("control_diagnostics");
    s.validate();
    return s;
}

} // namespace

int cmd_evolve(const RunConfig& config, const CommandContext& ctx)
{
    const SimulationConfig sim = simulation_config(config);
    const int every = config.get_int("checkpoint_every");
    if (every < 0)
        throw ConfigError("checkpoint_every must be >= 0");
    const std::string restart = config.get_string("restart_from");
    std::optional<DistributionState> start;
    const CheckpointHeader header{sim.extent, sim.points_per_axis, sim.max_mode, sim.dt};
    if (!restart.empty()) {
        Checkpoint c = load_checkpoint(restart);
        if (c.header.extent != header.extent || c.header.points_per_axis != header.points_per_axis ||
            c.header.max_mode != header.max_mode || c.header.dt != header.dt)
            throw ConfigError("checkpoint resolution or dt differs from the configuration");
        start = std::move(c.state);
    }
    prepare_out_dir(ctx);
    write_manifest(config, ctx, "running");

    CsvWriter csv(ctx.out_dir / "diagnostics.csv",
                  {"t", "distance", "mass", "min_g", "derivative_norm", "weighted_derivative_norm", "norm_guard"});
    RunHooks hooks;
    hooks.checkpoint_every = static_cast<std::uint64_t>(every);
    hooks.on_checkpoint = [&](const DistributionState& s) {
        save_checkpoint(ctx.out_dir / ("checkpoint_" + std::to_string(s.step) + ".bin"), header, s);
    };
    hooks.on_sample = [&](const Sample& s) {
        csv.cell(s.t).cell(s.distance).cell(s.mass).cell(s.min_g).cell(s.derivative_norm);
        csv.cell(s.weighted_derivative_norm).cell(s.norm_guard_exceeded ? 1 : 0);
        csv.end_row();
    };
    const RunResult r = run(sim, start, hooks);
    save_checkpoint(ctx.out_dir / "final.bin", header, r.final_state);

    {
        CsvWriter cf(ctx.out_dir / "control.csv", {"t", "M", "I"});
        for (std::size_t k = 0; k < r.control.times.size(); ++k) {
            cf.cell(r.control.times[k]).cell(r.control.running_max[k]).cell(r.control.integral[k]);
            cf.end_row();
        }
    }

    std::vector<std::pair<std::string, std::string>> summary{
        {"c_infinity", num(r.final_state.c_infinity)},
        {"final_time", num(r.final_state.time)},
        {"steps", std::to_string(r.final_state.step)},
        {"samples", std::to_string(r.samples.size())},
    };
    if (r.fit_ok) {
        summary.insert(summary.end(), {{"fitted_C0", num(r.report.fit.c0)},
                                       {"fitted_C1", num(r.report.fit.c1)},
                                       {"residual", num(r.report.fit.residual)},
                                       {"fit_t_min", num(r.report.fit.t_min)},
                                       {"fit_t_max", num(r.report.fit.t_max)},
                                       {"fit_samples", std::to_string(r.report.fit.samples)}});
    } else {
        summary.emplace_back("fit_error", r.fit_error);
    }
    if (!r.samples.empty()) {
        double min_g = r.samples.front().min_g, drift = 0.0;
        bool guard = false, monotone = true;
        for (std::size_t k = 0; k < r.samples.size(); ++k) {
            const Sample& s = r.samples[k];
            min_g = std::min(min_g, s.min_g);
            drift = std::max(drift, std::abs(s.mass - r.samples.front().mass) / std::abs(r.samples.front().mass));
            guard = guard || s.norm_guard_exceeded;
            if (k > 0 && r.samples[k - 1].t >= 1.0 && s.distance > r.samples[k - 1].distance)
                monotone = false;
        }
        summary.insert(summary.end(), {{"min_g", num(min_g)},
                                       {"max_relative_mass_drift", num(drift)},
                                       {"monotone_after_t1", monotone ? "true" : "false"},
                                       {"norm_guard_exceeded", guard ? "true" : "false"}});
    }
    summary.emplace_back("status", r.failed ? "failed" : "ok");
    if (r.failed)
        summary.emplace_back("failure", r.failure);
    write_summary(ctx.out_dir / "summary.txt", summary);
    write_manifest(config, ctx, r.failed ? "failed" : "ok", r.failure);
    return r.failed ? 1 : 0;
}

int run_command(const RunConfig& config, const CommandContext& ctx)
{
    const std::string& c = config.command();
    if (c == "verify")
        return cmd_verify(config, ctx);
    if (c == "spectrum")
        return cmd_spectrum(config, ctx);
    if (c == "propagator")
        return cmd_propagator(config, ctx);
    if (c == "evolve")
        return cmd_evolve(config, ctx);
    throw ConfigError("unknown command '" + c + "'");
}

} // namespace bathlab
