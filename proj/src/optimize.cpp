#include "decoh/optimize.hpp"

#include <utility>

namespace decoh {

MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                       double tol, int max_iterations) {
    constexpr double inv_phi = 0.6180339887498949;
    if (lo > hi)
        std::swap(lo, hi);
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);

    MinimizeResult r;
    while (hi - lo > tol && r.iterations < max_iterations) {
        ++r.iterations;
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    r.converged = hi - lo <= tol;
    r.x = fc <= fd ? c : d;
    r.fx = fc <= fd ? fc : fd;
    return r;
}

} // namespace decoh
