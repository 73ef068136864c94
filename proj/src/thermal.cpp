#include "decoh/thermal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "decoh/errors.hpp"

namespace decoh::thermal {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be positive and finite");
}

void require_fraction(double F0) {
    if (!(F0 > 0.0 && F0 <= 1.0))
        throw DomainError("largest eigenvalue F0 must lie in (0, 1], got " + std::to_string(F0));
}

} // namespace

double thermal_spread(double mu, double T) {
    require_positive(mu, "mass mu");
    require_positive(T, "temperature T");
    return hbar / std::sqrt(mu * boltzmann * T);
}

double thermal_length(double T) {
    require_positive(T, "temperature T");
    return hbar * speed_of_light / (boltzmann * T);
}

double compton_wavelength(double mu) {
    require_positive(mu, "mass mu");
    return hbar / (mu * speed_of_light);
}

double thermal_k_sigma(double mu, double T) {
    const double k = std::sqrt(mu * boltzmann * T) / hbar;
    return k * thermal_spread(mu, T);
}

ThermalDesign thermal_design(double mu, double T) {
    ThermalDesign d;
    d.mu = mu;
    d.T = T;
    d.sigma_mu = thermal_spread(mu, T);
    d.compton_wavelength = compton_wavelength(mu);
    d.thermal_length = thermal_length(T);
    d.k_sigma_est = thermal_k_sigma(mu, T);
    return d;
}

CollisionBudget amplitude_budget(std::span<const double> F0s) {
    CollisionBudget b;
    b.n = static_cast<int>(F0s.size());
    double log_amp = 0.0;
    for (double F0 : F0s) {
        require_fraction(F0);
        b.amplitude *= std::sqrt(F0);
        log_amp += 0.5 * std::log(F0);
    }
    const double per = b.n > 0 ? log_amp / b.n : 0.0;
    b.collisions_to_half = per < 0.0 ? std::log(0.5) / per : std::numeric_limits<double>::infinity();
    return b;
}

CollisionBudget amplitude_budget(double F0, int n) {
    require_fraction(F0);
    if (n < 0)
        throw DomainError("collision count must be non-negative");
    CollisionBudget b;
    b.n = n;
    b.amplitude = std::pow(F0, 0.5 * n);
    const double per = 0.5 * std::log(F0);
    b.collisions_to_half = per < 0.0 ? std::log(0.5) / per : std::numeric_limits<double>::infinity();
    return b;
}

double backaction_ratio(double m, double M) {
    require_positive(m, "particle mass m");
    require_positive(M, "wall mass M");
    return std::sqrt(m / M);
}

} // namespace decoh::thermal
