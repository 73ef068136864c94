#include "decoh/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "decoh/errors.hpp"
#include "decoh/optimize.hpp"

namespace decoh {

std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::small_k_sigma: return "small";
    case Regime::crossover: return "crossover";
    case Regime::large_k_sigma: return "large";
    }
    return "unknown";
}

Regime classify_regime(double k_sigma) {
    const double a = std::abs(k_sigma);
    if (a < 0.5)
        return Regime::small_k_sigma;
    if (a > 2.0)
        return Regime::large_k_sigma;
    return Regime::crossover;
}

double log_inverse_overlap_squared(double lambda, double k_sigma, const CollisionParams& p) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("spread ratio lambda must be positive, got " + std::to_string(lambda));
    const double root = std::sqrt(lambda);
    const double mismatch = p.gamma * root - p.delta / root;
    const double ks2 = k_sigma * k_sigma;
    return std::log1p(mismatch * mismatch) + 4.0 * ks2 * lambda / (1.0 + lambda);
}

double overlap_amplitude(double lambda, double k_sigma, const CollisionParams& p) {
    return std::exp(-0.5 * log_inverse_overlap_squared(lambda, k_sigma, p));
}

double overlap_defect(double lambda, double k_sigma, const CollisionParams& p) {
    return -std::expm1(-0.5 * log_inverse_overlap_squared(lambda, k_sigma, p));
}

ErrorReport error_report(double lambda, double k_sigma, const CollisionParams& p) {
    ErrorReport r;
    r.lambda = lambda;
    r.k_sigma = k_sigma;
    r.delta = p.delta;
    r.one_minus_A = overlap_defect(lambda, k_sigma, p);
    r.A = 1.0 - r.one_minus_A;
    return r;
}

Optimum optimal_lambda(double k_sigma, const CollisionParams& p) {
    if (!(k_sigma >= 0.0) || !std::isfinite(k_sigma))
        throw DomainError("k sigma must be non-negative, got " + std::to_string(k_sigma));

    Optimum opt;
    opt.regime = classify_regime(k_sigma);
    const double matched = p.delta / p.gamma;
    if (k_sigma == 0.0) {
        opt.lambda_max = matched;
    } else {
        // Once delta k sigma >> 1 the optimum leaves delta^2 / 2k sigma and
        // settles near 1 / 4 k^2 sigma^2, so the bracket must reach both.
        const double floor = std::min(p.delta * p.delta, 1.0 / (1.0 + 4.0 * k_sigma * k_sigma));
        const double lo = std::log(floor * 1e-3);
        const double hi = std::log(std::max(1e3, 1e3 * matched));
        // sqrt keeps the objective V-shaped where ln(A^-2) touches zero.
        auto objective = [&](double log_lambda) {
            return std::sqrt(log_inverse_overlap_squared(std::exp(log_lambda), k_sigma, p));
        };
        const MinimizeResult r = golden_section_minimize(objective, lo, hi, 1e-10);
        if (!r.converged || r.x - lo < 1e-6 || hi - r.x < 1e-6) {
            std::ostringstream msg;
            msg << "lambda optimizer failed: converged=" << r.converged << " iterations=" << r.iterations
                << " ln(lambda)=" << r.x << " bracket=[" << lo << ", " << hi << "] k_sigma=" << k_sigma
                << " delta=" << p.delta;
            throw NumericError(msg.str());
        }
        opt.lambda_max = std::exp(r.x);
        opt.iterations = r.iterations;
    }
    opt.one_minus_A = overlap_defect(opt.lambda_max, k_sigma, p);
    opt.A_max = 1.0 - opt.one_minus_A;
    return opt;
}

AsymptoticError error_asymptotic(double k_sigma, double delta, Regime regime) {
    if (!(k_sigma >= 0.0))
        throw DomainError("k sigma must be non-negative");
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("delta must lie in (0, 1)");
    switch (regime) {
    case Regime::small_k_sigma:
        return {delta / (1.0 - delta), 2.0 * delta * k_sigma * k_sigma};
    case Regime::large_k_sigma:
        if (k_sigma == 0.0)
            throw DomainError("large-k sigma asymptotics are undefined at k sigma = 0");
        return {delta / (2.0 * k_sigma), 2.0 * delta * k_sigma};
    case Regime::crossover:
        break;
    }
    throw DomainError("asymptotic forms exist only for the small and large regimes");
}

double mismatch_penalty(double y, double k_sigma) {
    // cosh y - 1 written as 2 sinh^2(y/2) to stay accurate near y = 0.
    const double s = std::sinh(0.5 * y);
    return 2.0 * s * s + 2.0 * k_sigma * k_sigma * std::exp(y);
}

bool mismatch_penalty_valid(double penalty, double delta) {
    return penalty * delta < 0.1;
}

} // namespace decoh
