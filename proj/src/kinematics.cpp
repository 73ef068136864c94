#include "decoh/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "decoh/errors.hpp"

namespace decoh {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw DomainError(std::string(name) + " must be positive and finite, got " + std::to_string(value));
}

} // namespace

CollisionParams collision_params(double m, double M) {
    require_positive(m, "particle mass m");
    require_positive(M, "wall mass M");
    CollisionParams p;
    p.m = m;
    p.M = M;
    p.total_mass = m + M;
    p.delta = m / p.total_mass;
    p.gamma = M / p.total_mass;
    return p;
}

CollisionParams collision_params_from_fraction(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("mass fraction delta must lie in (0, 1), got " + std::to_string(delta));
    return collision_params(delta, 1.0 - delta);
}

ComCoordinates com_transform(double x, double X, const CollisionParams& p) {
    return {p.gamma * X + p.delta * x, x - X};
}

LabCoordinates lab_transform(const ComCoordinates& c, const CollisionParams& p) {
    return {c.R + p.gamma * c.u, c.R - p.delta * c.u};
}

double GaussianProductState::wall(double X) const {
    return std::exp(-X * X / (4.0 * Sigma * Sigma));
}

cplx GaussianProductState::particle(double x) const {
    return std::exp(cplx(-x * x / (4.0 * sigma * sigma), k * x));
}

cplx GaussianProductState::operator()(double x, double X) const {
    return std::sqrt(norm) * wall(X) * particle(x);
}

GaussianProductState initial_state(double Sigma, double sigma, double k) {
    require_positive(Sigma, "wall spread Sigma");
    require_positive(sigma, "particle spread sigma");
    if (!std::isfinite(k))
        throw DomainError("wavenumber k must be finite");
    return {Sigma, sigma, k, 1.0 / (2.0 * std::numbers::pi * sigma * Sigma)};
}

double PostCollisionState::Sigma() const { return 0.5 / std::sqrt(Omega); }
double PostCollisionState::sigma() const { return 0.5 / std::sqrt(omega); }

double PostCollisionState::wall_argument(double x, double X) const {
    return X * (1.0 - 2.0 * delta) + 2.0 * delta * x;
}

double PostCollisionState::particle_argument(double x, double X) const {
    return x * (1.0 - 2.0 * gamma) + 2.0 * gamma * X;
}

cplx PostCollisionState::operator()(double x, double X) const {
    const double a = wall_argument(x, X);
    const double b = particle_argument(x, X);
    return std::sqrt(norm) * std::exp(cplx(-Omega * a * a - omega * b * b, k * b));
}

// (x, X) = T^-1 (a, b) with det T = 1; a and b have variances Sigma^2, sigma^2.
double PostCollisionState::std_x() const {
    const double S2 = Sigma() * Sigma();
    const double s2 = sigma() * sigma();
    const double c = 1.0 - 2.0 * delta;
    return std::sqrt(4.0 * gamma * gamma * S2 + c * c * s2);
}

double PostCollisionState::std_X() const {
    const double S2 = Sigma() * Sigma();
    const double s2 = sigma() * sigma();
    const double c = 1.0 - 2.0 * gamma;
    return std::sqrt(c * c * S2 + 4.0 * delta * delta * s2);
}

PostCollisionState post_collision_state(const GaussianProductState& s, const CollisionParams& p) {
    PostCollisionState f;
    f.Omega = 1.0 / (4.0 * s.Sigma * s.Sigma);
    f.omega = 1.0 / (4.0 * s.sigma * s.sigma);
    f.delta = p.delta;
    f.gamma = p.gamma;
    f.k = s.k;
    f.norm = 2.0 / std::numbers::pi * std::sqrt(f.Omega * f.omega);
    return f;
}

ReflectedTestState ideal_reflected_state(const GaussianProductState& s) {
    return ReflectedTestState{s};
}

} // namespace decoh
