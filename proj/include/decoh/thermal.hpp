#pragma once

#include <span>

namespace decoh::thermal {

// CODATA 2018 values; h, k_B and c are exact by definition of the SI.
inline constexpr double planck_h = 6.62607015e-34;          // J s
inline constexpr double hbar = 1.05457181764616e-34;        // J s, h / 2 pi
inline constexpr double boltzmann = 1.380649e-23;           // J / K
inline constexpr double speed_of_light = 299792458.0;       // m / s
inline constexpr double electron_mass = 9.1093837015e-31;   // kg

/// Order-of-magnitude packet design for a mass mu at temperature T, with the
/// proportionality constant of sigma_mu^2 ~ hbar^2 / (mu k_B T) set to 1.
struct ThermalDesign {
    double mu = 0.0;                // kg
    double T = 0.0;                 // K
    double sigma_mu = 0.0;          // m
    double compton_wavelength = 0.0; // hbar / (mu c), m
    double thermal_length = 0.0;     // hbar c / (k_B T), m
    double k_sigma_est = 0.0;
};

/// sigma_mu = hbar / sqrt(mu k_B T).
double thermal_spread(double mu, double T);

/// hbar c / (k_B T), the temperature length scale.
double thermal_length(double T);

/// hbar / (mu c).
double compton_wavelength(double mu);

/// k sigma_mu with k from 1-D equipartition, hbar^2 k^2 / 2 mu = k_B T / 2.
double thermal_k_sigma(double mu, double T);

ThermalDesign thermal_design(double mu, double T);

struct CollisionBudget {
    int n = 0;
    double amplitude = 1.0;            // prod sqrt(F0_i)
    double collisions_to_half = 0.0;   // ln(1/2) / ln sqrt(F0), +inf when F0 = 1
};

CollisionBudget amplitude_budget(std::span<const double> F0s);
CollisionBudget amplitude_budget(double F0, int n);

/// (Delta p)' / (Delta p)_usual ~ sqrt(m / M) under matched spreads.
double backaction_ratio(double m, double M);

} // namespace decoh::thermal
