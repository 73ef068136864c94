#include "decoh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decoh/errors.hpp"

namespace decoh {

double Axis::max_spacing() const {
    double h = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        h = std::max(h, nodes[i] - nodes[i - 1]);
    return h;
}

Axis gauss_legendre(int n) {
    if (n < 1)
        throw ConfigError("Gauss-Legendre rule needs at least one node");
    Axis a;
    a.nodes.assign(static_cast<std::size_t>(n), 0.0);
    a.weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1)
                p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        a.nodes[lo] = -x;
        a.nodes[hi] = x;
        a.weights[lo] = w;
        a.weights[hi] = w;
    }
    return a;
}

Axis make_axis(double lo, double hi, int n, QuadratureRule rule) {
    if (!(hi > lo))
        throw ConfigError("axis extent must satisfy lo < hi");
    if (n < 2)
        throw ConfigError("axis needs at least two points");
    Axis a;
    if (rule == QuadratureRule::trapezoid) {
        const double h = (hi - lo) / (n - 1);
        a.nodes.resize(static_cast<std::size_t>(n));
        a.weights.assign(static_cast<std::size_t>(n), h);
        for (int i = 0; i < n; ++i)
            a.nodes[static_cast<std::size_t>(i)] = lo + h * i;
        a.weights.front() = a.weights.back() = 0.5 * h;
        return a;
    }
    a = gauss_legendre(n);
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a.nodes[i] = mid + half * a.nodes[i];
        a.weights[i] *= half;
    }
    return a;
}

} // namespace decoh
