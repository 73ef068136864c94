#pragma once

#include <cmath>
#include <functional>

namespace decoh {

struct MinimizeResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Golden-section search for a minimum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than `tol` (absolute, in x).
MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                       double tol, int max_iterations = 500);

} // namespace decoh
