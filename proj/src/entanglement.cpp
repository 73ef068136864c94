#include "decoh/entanglement.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "decoh/errors.hpp"

namespace decoh {

double spectral_asinh(double t) {
    if (t < 0.0)
        return -spectral_asinh(-t);
    if (t < 1e-4) {
        const double t2 = t * t;
        return t * (1.0 - t2 / 6.0 + 3.0 * t2 * t2 / 40.0);
    }
    if (t > 1e8)
        return std::log(2.0 * t) + 1.0 / (4.0 * t * t);
    // ln(t + sqrt(t^2 + 1)) rewritten for log1p
    return std::log1p(t + t * t / (1.0 + std::sqrt(t * t + 1.0)));
}

SpectralParams spectral_params(double w) {
    if (!(w >= 0.0))
        throw DomainError("spectral parameter w must be non-negative, got " + std::to_string(w));
    SpectralParams sp;
    sp.w = w;
    if (std::isinf(w)) {
        sp.matched = true;
        sp.u = std::numeric_limits<double>::infinity();
        sp.z = 0.0;
        return sp;
    }
    const double half = 0.5 * w;
    sp.u = 2.0 * spectral_asinh(half);
    sp.z = 1.0 / (std::hypot(half, 1.0) + half);
    return sp;
}

KernelParams kernel_params(const PostCollisionState& s) {
    KernelParams kp;
    const double diff = s.gamma - s.delta;
    kp.D = s.Omega * diff * diff + 4.0 * s.omega * s.gamma * s.gamma;
    kp.rho = std::abs(diff * (s.Omega * s.delta - s.omega * s.gamma));
    const double scale = std::sqrt(s.omega * s.Omega);
    // Below this rho, F0 = 1 - 1/w^2 rounds to 1.
    if (kp.rho <= 4.0 * std::numeric_limits<double>::epsilon() * scale)
        kp.spectral = spectral_params(std::numeric_limits<double>::infinity());
    else
        kp.spectral = spectral_params(scale / kp.rho);
    return kp;
}

cplx reduced_kernel(const PostCollisionState& s, double x_prime, double x, double e2_over_rho2) {
    const KernelParams kp = kernel_params(s);
    const double oO = s.omega * s.Omega;
    const double pref = std::sqrt(2.0 * oO / (std::numbers::pi * kp.D));
    const double dx = x - x_prime;
    const double re = -(x * x + x_prime * x_prime) * oO / kp.D - dx * dx * e2_over_rho2 * kp.rho * kp.rho / kp.D;
    const double im = s.k * (1.0 - 2.0 * s.gamma) * dx;
    return pref * std::exp(cplx(re, im));
}

double largest_eigenvalue(double w) {
    const SpectralParams sp = spectral_params(w);
    if (sp.matched)
        return 1.0;
    // 1 - z^2 with z^2 = e^{-u}
    return -std::expm1(-sp.u);
}

std::vector<double> spectrum(double w, int n) {
    if (n < 1)
        throw DomainError("spectrum length must be at least 1");
    if (w == 0.0)
        throw DomainError("w = 0 gives u = 0: the spectrum is not normalizable");
    const SpectralParams sp = spectral_params(w);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (sp.matched) {
        out[0] = 1.0;
        return out;
    }
    const double lead = -std::expm1(-sp.u);
    for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] = lead * std::exp(-k * sp.u);
    return out;
}

double oscillator_kernel(double beta, double u, double x, double y) {
    const double sh = std::sinh(u);
    return std::sqrt(beta / (std::numbers::pi * sh)) *
           std::exp(-beta / sh * ((x * x + y * y) * std::cosh(u) - 2.0 * x * y));
}

std::vector<double> oscillator_kernel_spectrum(double beta, double u, int n) {
    if (!(beta > 0.0) || !(u > 0.0))
        throw DomainError("oscillator kernel requires beta > 0 and u > 0");
    if (n < 1)
        throw DomainError("spectrum length must be at least 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(k)] = std::exp(-u * (k + 0.5));
    return out;
}

EntanglementReport entanglement_report(const PostCollisionState& s, int n) {
    EntanglementReport r;
    r.kernel = kernel_params(s);
    const SpectralParams& sp = r.kernel.spectral;
    r.F0 = largest_eigenvalue(sp.w);
    r.measure = sp.matched ? 0.0 : std::exp(-sp.u);
    r.spectrum_prefix = spectrum(sp.w, n);
    r.tail_bound = sp.matched ? 0.0 : std::exp(-n * sp.u);
    return r;
}

double entanglement_measure(const PostCollisionState& s) {
    return entanglement_report(s, 1).measure;
}

double optimal_spreads(double sigma, const CollisionParams& p) {
    if (!(sigma > 0.0))
        throw DomainError("particle spread sigma must be positive");
    return sigma * std::sqrt(p.delta / p.gamma);
}

} // namespace decoh
