#include "bathlab/modal.hpp"

#include "bathlab/quadrature.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace bathlab {

Eigen::VectorXcd mode_symbol(const Mode& n, const KernelAssembly& kernels)
{
    const auto& grid = kernels.grid;
    Eigen::VectorXcd a(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3& v = grid.node(i);
        a[i] = cplx(kernels.nu[i], n[0] * v[0] + n[1] * v[1] + n[2] * v[2]);
    }
    return a;
}

ModeOperator assemble_mode_operator(const Mode& n, const KernelAssembly& kernels)
{
    ModeOperator op;
    op.n = n;
    op.matrix = kernels.K.cast<cplx>();
    op.matrix.diagonal() += mode_symbol(n, kernels);
    return op;
}

Eigen::MatrixXd zero_mode_operator(const KernelAssembly& kernels)
{
    Eigen::MatrixXd l = kernels.K;
    l.diagonal() += kernels.nu;
    return l;
}

Eigen::MatrixXd symmetrized_bath_operator(const KernelAssembly& kernels)
{
    const auto& grid = kernels.grid;
    const std::size_t n = grid.size();
    Eigen::VectorXd half(n);
    for (std::size_t i = 0; i < n; ++i)
        half[i] = 0.5 * norm_sq(grid.node(i));
    Eigen::MatrixXd s(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            s(i, j) = -kernels.K0(i, j) * std::exp(half[i] - half[j]);
    s.diagonal() += kernels.nu0;
    return s;
}

Eigen::VectorXd riesz_project(const KernelAssembly& kernels, const Eigen::VectorXd& f)
{
    if (f.size() != kernels.maxwellian.size())
        throw ContractViolation("riesz_project: size mismatch");
    return kernels.maxwellian * (f.sum() / kernels.maxwellian.sum());
}

Eigen::MatrixXd riesz_projector(const KernelAssembly& kernels)
{
    const auto n = kernels.maxwellian.size();
    return kernels.maxwellian * Eigen::RowVectorXd::Constant(n, 1.0 / kernels.maxwellian.sum());
}

Eigen::MatrixXd spectral_projector(const KernelAssembly& kernels)
{
    Eigen::MatrixXd l = zero_mode_operator(kernels);
    const double shift = 1e-9 * induced_l1_norm(l);
    l.diagonal().array() += shift;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(l);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lut(l.transpose());
    Eigen::VectorXd r = kernels.maxwellian;
    Eigen::VectorXd left = Eigen::VectorXd::Ones(r.size());
    for (int it = 0; it < 8; ++it) {
        r = lu.solve(r);
        r /= r.norm();
        left = lut.solve(left);
        left /= left.norm();
    }
    if (!r.allFinite() || !left.allFinite())
        throw NumericalError("spectral_projector: inverse iteration failed");
    return r * left.transpose() / left.dot(r);
}

namespace {

SpectrumReport summarize(const Mode& n, Eigen::VectorXcd ev)
{
    std::vector<cplx> v(ev.data(), ev.data() + ev.size());
    std::stable_sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb)
            return ma < mb;
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    SpectrumReport r;
    r.n = n;
    r.eigenvalues = Eigen::Map<Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
    r.nearest_zero = v.front();
    r.nearest_distance = std::abs(v.front());
    r.second_distance = v.size() > 1 ? std::abs(v[1]) : 0.0;
    r.simple = v.size() > 1 && r.second_distance > 10.0 * r.nearest_distance;
    r.min_real = v.front().real();
    r.gap = v.size() > 1 ? v[1].real() : 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        r.min_real = std::min(r.min_real, v[i].real());
        if (i > 0)
            r.gap = std::min(r.gap, v[i].real());
    }
    return r;
}

} // namespace

SpectrumReport spectrum(const ModeOperator& op)
{
    return summarize(op.n, eigenvalues(op.matrix));
}

SpectrumReport spectrum_real(const Eigen::MatrixXd& op)
{
    return summarize({0, 0, 0}, eigenvalues(op));
}

Propagator propagator(const ModeOperator& op, double t, PropagatorMethod method)
{
    if (!(t >= 0.0))
        throw ContractViolation("propagator: t must be >= 0");
    Propagator p;
    if (method == PropagatorMethod::eigen) {
        const EigenDecomposition d = eigendecompose(op.matrix);
        const double rc = rcond(d.vectors);
        p.eigvec_condition = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
        if (p.eigvec_condition <= 1e8) {
            const Eigen::VectorXcd e = (-t * d.values.array()).exp();
            const Eigen::MatrixXcd scaled = d.vectors * e.asDiagonal();
            p.value = d.vectors.transpose().partialPivLu().solve(scaled.transpose()).transpose();
            p.method = "eigen";
            if (!p.value.allFinite())
                throw NumericalError("propagator: non-finite result");
            return p;
        }
        auto r = expm(Eigen::MatrixXcd(-t * op.matrix));
        p.value = std::move(r.value);
        p.method = r.method + " (eigen rejected)";
        return p;
    }
    auto r = expm(Eigen::MatrixXcd(-t * op.matrix));
    p.value = std::move(r.value);
    p.method = r.method;
    return p;
}

std::vector<double> decay_norms(const KernelAssembly& kernels, double step, int count, DecayProjector projector)
{
    if (!(step > 0.0) || count < 1)
        throw ContractViolation("decay_norms: need step > 0 and count >= 1");
    const Eigen::MatrixXd l0 = zero_mode_operator(kernels);
    const Eigen::MatrixXd p =
        projector == DecayProjector::analytic ? riesz_projector(kernels) : spectral_projector(kernels);
    const auto n = l0.rows();
    const Eigen::MatrixXd comp = Eigen::MatrixXd::Identity(n, n) - p;
    const Eigen::MatrixXd e = expm(Eigen::MatrixXd(-step * l0)).value;
    const Eigen::MatrixXd d = comp * e * comp;
    std::vector<double> out;
    Eigen::MatrixXd x = d;
    out.push_back(induced_l1_norm(x));
    for (int k = 2; k <= count; ++k) {
        x = d * x;
        out.push_back(induced_l1_norm(x));
    }
    return out;
}

double oscillatory_norm(const Mode& n, double t, const KernelAssembly& kernels)
{
    const Eigen::VectorXcd e = (-t * mode_symbol(n, kernels).array()).exp();
    const Eigen::MatrixXd re = e.real().asDiagonal() * kernels.K;
    const Eigen::MatrixXd im = e.imag().asDiagonal() * kernels.K;
    Eigen::MatrixXcd out(kernels.K.rows(), kernels.K.cols());
    out.real() = kernels.K * re;
    out.imag() = kernels.K * im;
    return induced_l1_norm(out);
}

namespace {

// int_0^tau e^{-(tau - s) a_i} K_ij e^{-s a_j} ds by quadrature, as K o (X W Y^T).
Eigen::MatrixXcd first_term(const Eigen::VectorXcd& a, const Eigen::MatrixXd& k, double tau, int order, int panels)
{
    const auto n = a.size();
    if (tau == 0.0)
        return Eigen::MatrixXcd::Zero(n, n);
    const Rule1D rule = composite_gauss_legendre(order, panels, 0.0, tau);
    const auto q = static_cast<Eigen::Index>(rule.nodes.size());
    Eigen::MatrixXcd x(n, q), y(n, q);
    for (Eigen::Index c = 0; c < q; ++c) {
        const double s = rule.nodes[c];
        x.col(c) = (-(tau - s) * a.array()).exp() * rule.weights[c];
        y.col(c) = (-s * a.array()).exp();
    }
    Eigen::MatrixXcd s = x * y.transpose();
    return s.cwiseProduct(k.cast<cplx>());
}

Eigen::MatrixXcd real_times_complex(const Eigen::MatrixXd& k, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(k.rows(), b.cols());
    out.real() = k * b.real();
    out.imag() = k * b.imag();
    return out;
}

} // namespace

DuhamelTerms duhamel_terms(const Mode& n, double t, const KernelAssembly& kernels, int order, int panels)
{
    if (!(t >= 0.0))
        throw ContractViolation("duhamel_terms: t must be >= 0");
    const Eigen::VectorXcd a = mode_symbol(n, kernels);
    const auto dim = a.size();
    DuhamelTerms d;
    d.a0 = Eigen::MatrixXcd((-t * a.array()).exp().matrix().asDiagonal());
    d.a1 = -first_term(a, kernels.K, t, order, panels);
    d.a2 = Eigen::MatrixXcd::Zero(dim, dim);
    if (t == 0.0)
        return d;
    const Rule1D rule = composite_gauss_legendre(order, panels, 0.0, t);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = rule.nodes[q];
        const Eigen::MatrixXcd inner = real_times_complex(kernels.K, first_term(a, kernels.K, s, order, panels));
        const Eigen::VectorXcd left = (-(t - s) * a.array()).exp() * rule.weights[q];
        d.a2.noalias() += left.asDiagonal() * inner;
    }
    return d;
}

Eigen::MatrixXcd duhamel_term(int k, const Mode& n, double t, const KernelAssembly& kernels, int order, int panels)
{
    if (k < 0 || k > 2)
        throw ContractViolation("duhamel_term: k must be 0, 1 or 2");
    DuhamelTerms d = duhamel_terms(n, t, kernels, order, panels);
    return k == 0 ? d.a0 : (k == 1 ? d.a1 : d.a2);
}

ResolventProbe resolvent_lower_bound_probe(cplx zeta, const Mode& n, const KernelAssembly& kernels, int probes,
                                           std::uint64_t seed)
{
    const auto& grid = kernels.grid;
    const std::size_t dim = grid.size();
    Eigen::VectorXcd inv(dim);
    ResolventProbe r;
    for (std::size_t i = 0; i < dim; ++i) {
        const Vec3& v = grid.node(i);
        const cplx d = cplx(kernels.nu0[i], n[0] * v[0] + n[1] * v[1] + n[2] * v[2]) - zeta;
        if (std::abs(d) < 1e-12 * (1.0 + std::abs(zeta)))
            throw NumericalError("resolvent probe: singular shift at node " + std::to_string(i));
        inv[i] = 1.0 / d;
        r.multiplier_bound = std::max(r.multiplier_bound, (1.0 + norm(v)) * std::abs(inv[i]));
    }
    Eigen::MatrixXcd kz = kernels.K0.cast<cplx>() * inv.asDiagonal();
    r.kernel_norm = induced_l1_norm(kz);
    Eigen::MatrixXcd a = -kz;
    a.diagonal().array() += 1.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    r.random_min = std::numeric_limits<double>::infinity();
    for (int p = 0; p < probes; ++p) {
        Eigen::VectorXcd g(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g[i] = cplx(re, im);
        }
        const double ratio = (a * g).cwiseAbs().sum() / g.cwiseAbs().sum();
        r.random_min = std::min(r.random_min, ratio);
    }
    const Eigen::MatrixXcd ainv = a.partialPivLu().inverse();
    r.min_modulus = 1.0 / induced_l1_norm(ainv);
    r.lower_bound = std::min(r.random_min, r.min_modulus);
    return r;
}

ContourSpec calibrate_contour(double zero_mode_gap, const VelocityGrid& grid, const Mode& n)
{
    if (!(zero_mode_gap > 0.0))
        throw NumericalError("contour calibration needs a positive gap");
    return ContourSpec{0.5 * zero_mode_gap, 2.0 * grid.max_speed(), n};
}

std::vector<cplx> contour_points(const ContourSpec& spec, int samples_per_segment, double ray_length)
{
    if (samples_per_segment < 2)
        throw ContractViolation("contour_points: need at least 2 samples per segment");
    const double p = spec.height();
    std::vector<cplx> out;
    out.reserve(3 * static_cast<std::size_t>(samples_per_segment));
    for (int k = 0; k < samples_per_segment; ++k) {
        const double b = -p + 2.0 * p * k / (samples_per_segment - 1);
        out.emplace_back(spec.theta, b);
    }
    for (int sign : {1, -1})
        for (int k = 0; k < samples_per_segment; ++k) {
            const double b = ray_length * k / (samples_per_segment - 1);
            out.emplace_back(spec.theta + b, sign * (p + p * b));
        }
    return out;
}

bool contour_contains(const ContourSpec& spec, cplx z)
{
    const double x = z.real() - spec.theta;
    if (x < 0.0)
        return false;
    const double p = spec.height();
    return std::abs(z.imag()) <= p + p * x;
}

} // namespace bathlab
