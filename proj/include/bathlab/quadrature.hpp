#pragma once

#include <vector>

namespace bathlab {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule with `order` nodes on [a, b].
Rule1D gauss_legendre(int order, double a = -1.0, double b = 1.0);

// `panels` equal sub-intervals of [a, b], each with a Gauss-Legendre rule of `order` nodes.
Rule1D composite_gauss_legendre(int order, int panels, double a, double b);

} // namespace bathlab
