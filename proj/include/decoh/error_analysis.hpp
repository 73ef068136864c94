#pragma once

#include <string_view>

#include "decoh/kinematics.hpp"

namespace decoh {

enum class Regime { small_k_sigma, crossover, large_k_sigma };

std::string_view to_string(Regime r);

/// Classification used in reports: small below k sigma = 0.5, large above 2.
Regime classify_regime(double k_sigma);

struct ErrorReport {
    double lambda = 0.0;  // Sigma^2 / sigma^2
    double k_sigma = 0.0;
    double delta = 0.0;
    double A = 0.0;
    double one_minus_A = 0.0;
};

/// ln(A^-2) for the overlap of the outgoing state with the fixed-wall image.
/// The bracket gamma^2 + delta^2 + gamma^2 lambda + delta^2 / lambda is
/// evaluated as 1 + (gamma sqrt(lambda) - delta / sqrt(lambda))^2, which keeps
/// full relative precision near the matched ratio.
double log_inverse_overlap_squared(double lambda, double k_sigma, const CollisionParams& p);

double overlap_amplitude(double lambda, double k_sigma, const CollisionParams& p);

/// 1 - A without cancellation.
double overlap_defect(double lambda, double k_sigma, const CollisionParams& p);

ErrorReport error_report(double lambda, double k_sigma, const CollisionParams& p);

struct Optimum {
    double lambda_max = 0.0;
    double A_max = 0.0;
    double one_minus_A = 0.0;
    Regime regime = Regime::small_k_sigma;
    int iterations = 0;
};

/// Spread ratio maximizing A at fixed k sigma. Golden-section search over
/// ln(lambda); for k sigma = 0 the matched ratio delta/gamma is returned.
Optimum optimal_lambda(double k_sigma, const CollisionParams& p);

struct AsymptoticError {
    double lambda_max = 0.0;
    double one_minus_A = 0.0;
};

/// Limiting forms of the optimum: small -> (delta/gamma, 2 delta (k sigma)^2),
/// large -> (delta / 2 k sigma, 2 delta k sigma). `crossover` is rejected.
AsymptoticError error_asymptotic(double k_sigma, double delta, Regime regime);

/// (1 - A) / delta for Sigma^2 / sigma^2 = delta e^y, to first order in delta:
///   cosh y - 1 + 2 (k sigma)^2 e^y
double mismatch_penalty(double y, double k_sigma);

/// The first-order penalty is trusted while penalty * delta < 0.1.
bool mismatch_penalty_valid(double penalty, double delta);

} // namespace decoh
