#pragma once

#include <vector>

#include "decoh/kinematics.hpp"

namespace decoh {

/// Spectral parameters of the reduced kernel: w = 2 sinh(u/2), z = e^{-u/2}.
/// `matched` marks the product-state case rho = 0 (w = infinity); u and z are
/// then +inf and 0 and are never fed into the formulas.
struct SpectralParams {
    double w = 0.0;
    double u = 0.0;
    double z = 1.0;
    bool matched = false;
};

SpectralParams spectral_params(double w);

struct KernelParams {
    double D = 0.0;   // Omega (gamma - delta)^2 + 4 omega gamma^2
    double rho = 0.0; // |(gamma - delta)(Omega delta - omega gamma)|
    SpectralParams spectral;
};

KernelParams kernel_params(const PostCollisionState& s);

/// Reduced kernel F(x', x) = \int dX Psi_F^*(x', X) Psi_F(x, X) in closed form.
/// `e2_over_rho2` is the coefficient of rho^2 / D on (x - x')^2; the exact
/// reduction gives 2.
cplx reduced_kernel(const PostCollisionState& s, double x_prime, double x, double e2_over_rho2 = 2.0);

/// asinh via the logarithmic form, with a series near zero.
double spectral_asinh(double t);

/// Largest eigenvalue F0 = 1 - z^2 of the reduced kernel; w may be +inf.
double largest_eigenvalue(double w);

/// F_k = (1 - e^{-u}) e^{-k u}, k = 0 .. n-1.
std::vector<double> spectrum(double w, int n);

/// Oscillator kernel sqrt(beta / pi sinh u) exp[-beta/sinh u ((x^2+y^2) cosh u - 2 x y)].
double oscillator_kernel(double beta, double u, double x, double y);

/// Eigenvalues G_k = exp(-u (k + 1/2)) of the oscillator kernel, any beta.
std::vector<double> oscillator_kernel_spectrum(double beta, double u, int n);

struct EntanglementReport {
    KernelParams kernel;
    double F0 = 1.0;
    double measure = 0.0; // 1 - F0
    std::vector<double> spectrum_prefix;
    double tail_bound = 0.0; // e^{-n u}, mass beyond the reported prefix
};

EntanglementReport entanglement_report(const PostCollisionState& s, int n = 64);

double entanglement_measure(const PostCollisionState& s);

/// Wall spread Sigma = sigma sqrt(delta / gamma) at which the outgoing state
/// is a product and the k = 0 error vanishes.
double optimal_spreads(double sigma, const CollisionParams& p);

} // namespace decoh
