#pragma once

#include <vector>

namespace decoh {

enum class QuadratureRule { trapezoid, gauss_legendre };

/// One-dimensional quadrature nodes and weights on [lo, hi].
struct Axis {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    double max_spacing() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
Axis gauss_legendre(int n);

Axis make_axis(double lo, double hi, int n, QuadratureRule rule);

} // namespace decoh
