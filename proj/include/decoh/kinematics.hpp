#pragma once

#include <complex>
#include <functional>

namespace decoh {

using cplx = std::complex<double>;

// Two-dimensional wave function evaluated at (x, X): particle then wall.
using WaveFunction = std::function<cplx(double x, double X)>;

/// Masses of the particle (m) and the wall (M) in model units, with the
/// derived mass fractions delta = m/(M+m) and gamma = M/(M+m).
struct CollisionParams {
    double m = 0.0;
    double M = 0.0;
    double total_mass = 0.0;
    double delta = 0.0;
    double gamma = 0.0;

    double reduced_mass() const { return m * M / total_mass; }
};

CollisionParams collision_params(double m, double M);

/// Parameters with unit total mass and the given particle fraction.
CollisionParams collision_params_from_fraction(double delta);

struct ComCoordinates {
    double R = 0.0; // center of mass
    double u = 0.0; // x - X
};

struct LabCoordinates {
    double x = 0.0;
    double X = 0.0;
};

ComCoordinates com_transform(double x, double X, const CollisionParams& p);
LabCoordinates lab_transform(const ComCoordinates& c, const CollisionParams& p);

/// Incoming product of Gaussians, both centered at the origin:
///   Psi_I(x, X) = sqrt(norm) exp(-X^2 / 4 Sigma^2) exp(-x^2 / 4 sigma^2 + i k x)
struct GaussianProductState {
    double Sigma = 0.0; // wall spread
    double sigma = 0.0; // particle spread
    double k = 0.0;
    double norm = 0.0;  // 1 / (2 pi sigma Sigma)

    // Unnormalized packet factors.
    double wall(double X) const;
    cplx particle(double x) const;

    cplx operator()(double x, double X) const;
};

GaussianProductState initial_state(double Sigma, double sigma, double k);

/// Outgoing state after the u -> -u reflection, written in (x, X):
///   Psi_F = sqrt(norm) exp{-Omega a^2 - omega b^2 + i k b}
///   a = X(1 - 2 delta) + 2 delta x,  b = x(1 - 2 gamma) + 2 gamma X
struct PostCollisionState {
    double Omega = 0.0; // 1 / (4 Sigma^2)
    double omega = 0.0; // 1 / (4 sigma^2)
    double delta = 0.0;
    double gamma = 0.0;
    double k = 0.0;
    double norm = 0.0;  // (2 / pi) sqrt(Omega omega)

    double Sigma() const;
    double sigma() const;

    // Argument of the wall factor (a) and of the particle factor (b).
    double wall_argument(double x, double X) const;
    double particle_argument(double x, double X) const;

    cplx operator()(double x, double X) const;

    // Standard deviations of the |Psi_F|^2 marginals.
    double std_x() const;
    double std_X() const;
};

PostCollisionState post_collision_state(const GaussianProductState& s, const CollisionParams& p);

/// Fixed-wall idealization Psi_test(x, X) = Gamma(X) Phi(-x).
struct ReflectedTestState {
    GaussianProductState source;
    cplx operator()(double x, double X) const { return source(-x, X); }
};

ReflectedTestState ideal_reflected_state(const GaussianProductState& s);

} // namespace decoh
