#include "bathlab/quadrature.hpp"

#include "bathlab/types.hpp"

#include <cmath>

namespace bathlab {

Rule1D gauss_legendre(int order, double a, double b)
{
    if (order < 1)
        throw ConfigError("Gauss-Legendre order must be >= 1");
    const unsigned n = static_cast<unsigned>(order);
    std::vector<double> x(n), w(n);
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double p = std::legendre(n, z);
            const double pm = n > 1 ? std::legendre(n - 1, z) : 1.0;
            dp = n * (z * p - pm) / (z * z - 1.0);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16)
                break;
        }
        {
            const double p = std::legendre(n, z);
            const double pm = n > 1 ? std::legendre(n - 1, z) : 1.0;
            dp = n * (z * p - pm) / (z * z - 1.0);
        }
        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if (n % 2 == 1)
        x[n / 2] = 0.0;

    Rule1D r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (unsigned i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * x[i];
        r.weights[i] = half * w[i];
    }
    return r;
}

Rule1D composite_gauss_legendre(int order, int panels, double a, double b)
{
    if (panels < 1)
        throw ConfigError("panel count must be >= 1");
    Rule1D out;
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const Rule1D r = gauss_legendre(order, a + p * width, a + (p + 1) * width);
        out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
        out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
    }
    return out;
}

} // namespace bathlab
