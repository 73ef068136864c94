#include "decoh/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "decoh/entanglement.hpp"
#include "decoh/errors.hpp"

namespace decoh::oracles {

namespace {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::Vector2cd;

const char* rule_name(QuadratureRule r) {
    return r == QuadratureRule::trapezoid ? "trapezoid" : "gauss_legendre";
}

std::string describe(const GridSpec& g) {
    std::ostringstream os;
    os << "x=[" << g.x_min << ", " << g.x_max << "] nx=" << g.nx << " X=[" << g.X_min << ", " << g.X_max
       << "] nX=" << g.nX << " rule=" << rule_name(g.rule);
    return os.str();
}

MatrixXcd weighted_samples(const WaveFunction& psi, const Axis& xs, const Axis& Xs) {
    MatrixXcd M(static_cast<Eigen::Index>(Xs.size()), static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < Xs.size(); ++i) {
        const double wX = std::sqrt(Xs.weights[i]);
        for (std::size_t j = 0; j < xs.size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                psi(xs.nodes[j], Xs.nodes[i]) * (wX * std::sqrt(xs.weights[j]));
    }
    return M;
}

SchmidtResult singular_values_of(const MatrixXcd& M, const GridSpec& g) {
    if (!M.allFinite())
        throw NumericError("non-finite samples in Schmidt oracle; grid " + describe(g));
    Eigen::BDCSVD<MatrixXcd> svd(M);
    const auto& sv = svd.singularValues();
    SchmidtResult r;
    r.singular_values.assign(sv.data(), sv.data() + sv.size());
    std::sort(r.singular_values.begin(), r.singular_values.end(), std::greater<>());
    for (double s : r.singular_values)
        r.total += s * s;
    if (!std::isfinite(r.total))
        throw NumericError("Schmidt decomposition failed; grid " + describe(g));
    return r;
}

std::vector<double> hermitian_eigenvalues(MatrixXcd K) {
    const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
    const double asym = (K - K.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "discretized kernel is not Hermitian: max |K - K^H| = " << asym;
        throw NumericError(msg.str());
    }
    K = 0.5 * (K + K.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(K, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericError("Hermitian eigensolve did not converge");
    const auto& ev = es.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

Matrix2cd to_eigen(const cplx A[2][2]) {
    Matrix2cd m;
    m << A[0][0], A[0][1], A[1][0], A[1][1];
    return m;
}

void from_eigen(const Matrix2cd& m, cplx A[2][2]) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            A[i][j] = m(i, j);
}

} // namespace

void GridSpec::validate(double kx, double kX) const {
    if (nx < kMinPoints || nX < kMinPoints)
        throw ConfigError("grid needs at least 64 points per axis; " + describe(*this));
    if (!(x_max > x_min) || !(X_max > X_min))
        throw ConfigError("grid extents must be increasing; " + describe(*this));
    const double hx = x_axis().max_spacing();
    const double hX = X_axis().max_spacing();
    const double slack = 1.0 + 1e-12;
    if (hx * std::abs(kx) > kMaxPhaseStep * slack || hX * std::abs(kX) > kMaxPhaseStep * slack) {
        std::ostringstream msg;
        msg << "grid does not resolve the phase: dx*kx=" << hx * std::abs(kx) << " dX*kX=" << hX * std::abs(kX)
            << " (limit 0.3); " << describe(*this);
        throw ConfigError(msg.str());
    }
}

int resolved_points(double lo, double hi, int n, double k, QuadratureRule rule) {
    n = std::max(n, kMinPoints);
    k = std::abs(k);
    if (k == 0.0)
        return n;
    const double span = hi - lo;
    if (rule == QuadratureRule::trapezoid)
        return std::max(n, static_cast<int>(std::ceil(span * k / kMaxPhaseStep)) + 1);
    // Gauss-Legendre spacing peaks at the center, about pi span / 2n.
    int m = std::max(n, static_cast<int>(std::ceil(std::numbers::pi * span * k / (2.0 * kMaxPhaseStep))));
    while (make_axis(lo, hi, m, rule).max_spacing() * k > kMaxPhaseStep)
        m += std::max(1, m / 64);
    return m;
}

GridSpec grid_for(const PostCollisionState& s, int n, QuadratureRule rule) {
    GridSpec g;
    g.rule = rule;
    const double ex = kStdCoverage * s.std_x();
    const double eX = kStdCoverage * s.std_X();
    g.x_min = -ex;
    g.x_max = ex;
    g.X_min = -eX;
    g.X_max = eX;
    g.nx = resolved_points(g.x_min, g.x_max, n, s.k * (1.0 - 2.0 * s.gamma), rule);
    g.nX = resolved_points(g.X_min, g.X_max, n, 2.0 * s.gamma * s.k, rule);
    return g;
}

GridSpec grid_for_overlap(const GaussianProductState& s, const CollisionParams& p, int n, QuadratureRule rule) {
    const PostCollisionState f = post_collision_state(s, p);
    GridSpec g;
    g.rule = rule;
    const double ex = kStdCoverage * std::max(f.std_x(), s.sigma);
    const double eX = kStdCoverage * std::max(f.std_X(), s.Sigma);
    g.x_min = -ex;
    g.x_max = ex;
    g.X_min = -eX;
    g.X_max = eX;
    g.nx = resolved_points(g.x_min, g.x_max, n, s.k, rule);
    g.nX = resolved_points(g.X_min, g.X_max, n, 2.0 * p.gamma * s.k, rule);
    return g;
}

bool covers(const GridSpec& g, const PostCollisionState& s) {
    const double ex = kStdCoverage * s.std_x() * (1.0 - 1e-12);
    const double eX = kStdCoverage * s.std_X() * (1.0 - 1e-12);
    return g.x_min <= -ex && g.x_max >= ex && g.X_min <= -eX && g.X_max >= eX;
}

OverlapResult quadrature_overlap(const WaveFunction& a, const WaveFunction& b, const GridSpec& g, double kx,
                                 double kX) {
    g.validate(kx, kX);
    auto integrate = [&](const Axis& xs, const Axis& Xs, double* abs_sum) {
        cplx sum = 0.0;
        double mag = 0.0;
        for (std::size_t i = 0; i < Xs.size(); ++i) {
            const double X = Xs.nodes[i];
            cplx row = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const cplx term = std::conj(a(xs.nodes[j], X)) * b(xs.nodes[j], X) * xs.weights[j];
                row += term;
                mag += std::abs(term) * Xs.weights[i];
            }
            sum += row * Xs.weights[i];
        }
        if (abs_sum)
            *abs_sum = mag;
        return sum;
    };
    double mag = 0.0;
    OverlapResult r;
    r.value = integrate(g.x_axis(), g.X_axis(), &mag);
    const cplx coarse = integrate(make_axis(g.x_min, g.x_max, std::max(2, g.nx / 2), g.rule),
                                  make_axis(g.X_min, g.X_max, std::max(2, g.nX / 2), g.rule), nullptr);
    r.truncation_estimate = std::abs(r.value - coarse) + 64.0 * std::numeric_limits<double>::epsilon() * mag;
    return r;
}

SchmidtResult schmidt_decompose(const WaveFunction& psi, const GridSpec& g) {
    g.validate();
    return singular_values_of(weighted_samples(psi, g.x_axis(), g.X_axis()), g);
}

SchmidtResult schmidt_decompose(const PostCollisionState& s, const GridSpec& g) {
    g.validate(s.k * (1.0 - 2.0 * s.gamma), 2.0 * s.gamma * s.k);
    return singular_values_of(weighted_samples(s, g.x_axis(), g.X_axis()), g);
}

std::vector<double> kernel_eigensolve(const Kernel& kernel, const Axis& axis) {
    const auto n = static_cast<Eigen::Index>(axis.size());
    MatrixXcd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            K(i, j) = kernel(axis.nodes[ui], axis.nodes[uj]) * std::sqrt(axis.weights[ui] * axis.weights[uj]);
        }
    }
    return hermitian_eigenvalues(std::move(K));
}

std::vector<double> kernel_eigensolve(const PostCollisionState& s, const GridSpec& g) {
    g.validate(s.k * (1.0 - 2.0 * s.gamma), 2.0 * s.gamma * s.k);
    return kernel_eigensolve([&](double xp, double x) { return reduced_kernel(s, xp, x); }, g.x_axis());
}

std::vector<double> reduced_density_eigenvalues(const WaveFunction& psi, const GridSpec& g, TraceOut which) {
    g.validate();
    const MatrixXcd M = weighted_samples(psi, g.x_axis(), g.X_axis());
    if (which == TraceOut::wall)
        return hermitian_eigenvalues(M.adjoint() * M);
    return hermitian_eigenvalues(M * M.adjoint());
}

KIndependence k_independence_check(const PostCollisionState& s, int n, double tol) {
    PostCollisionState s0 = s;
    s0.k = 0.0;
    KIndependence r;
    r.F0_with_k = schmidt_decompose(s, grid_for(s, n)).top_weight();
    r.F0_without_k = schmidt_decompose(s0, grid_for(s0, n)).top_weight();
    r.agree = std::abs(r.F0_with_k - r.F0_without_k) <= tol;
    return r;
}

// ---- image propagation ----

cplx FreePacket::operator()(double y, double t) const {
    const cplx spread_factor(1.0, t / (2.0 * mass * spread * spread));
    const double shift = y - center - k / mass * t;
    const cplx exponent = -shift * shift / (4.0 * spread * spread * spread_factor) +
                          cplx(0.0, k * (y - center) - k * k * t / (2.0 * mass));
    return std::exp(exponent) / std::sqrt(spread_factor);
}

cplx ComplexGaussian2::operator()(double x, double X) const {
    const cplx d0 = x - c[0];
    const cplx d1 = X - c[1];
    const cplx q = A[0][0] * d0 * d0 + 2.0 * A[0][1] * d0 * d1 + A[1][1] * d1 * d1;
    return std::exp(log_amp - 0.5 * q);
}

ComplexGaussian2 ComplexGaussian2::evolved(double t, double m, double M) const {
    const Matrix2cd A0 = to_eigen(A);
    Matrix2cd inv_mass = Matrix2cd::Zero();
    inv_mass(0, 0) = 1.0 / m;
    inv_mass(1, 1) = 1.0 / M;
    const cplx it(0.0, t);
    const Matrix2cd At = (A0.inverse() + it * inv_mass).inverse();
    const cplx det = (Matrix2cd::Identity() + it * inv_mass * A0).determinant();

    ComplexGaussian2 out = *this;
    from_eigen(0.5 * (At + At.transpose()), out.A);
    out.log_amp = log_amp - 0.5 * std::log(det);
    return out;
}

void ComplexGaussian2::mean(double& x, double& X) const {
    const Matrix2cd Am = to_eigen(A);
    const Eigen::Matrix2d Ar = Am.real();
    const Eigen::Matrix2d Ai = Am.imag();
    const Eigen::Vector2d cr(c[0].real(), c[1].real());
    const Eigen::Vector2d ci(c[0].imag(), c[1].imag());
    const Eigen::Vector2d mu = cr - Ar.inverse() * (Ai * ci);
    x = mu(0);
    X = mu(1);
}

void ComplexGaussian2::covariance(double cov[2][2]) const {
    const Eigen::Matrix2d C = (2.0 * to_eigen(A).real()).inverse();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            cov[i][j] = C(i, j);
}

void ComplexGaussian2::wavenumber(double x, double X, double& kx, double& kX) const {
    const cplx d0 = x - c[0];
    const cplx d1 = X - c[1];
    kx = -(A[0][0] * d0 + A[0][1] * d1).imag();
    kX = -(A[1][0] * d0 + A[1][1] * d1).imag();
}

double round_trip_time(const PropagatorSetup& setup) {
    if (setup.packets.k == 0.0)
        throw DomainError("a packet at rest never reaches the wall (k = 0)");
    return 2.0 * std::abs(setup.x0) * setup.masses.m / std::abs(setup.packets.k);
}

double separation_check(const PropagatorSetup& setup) {
    const double k = std::abs(setup.packets.k);
    if (k == 0.0)
        throw DomainError("traversal time is undefined for k = 0");
    const double sigma_rel2 = setup.packets.sigma * setup.packets.sigma + setup.packets.Sigma * setup.packets.Sigma;
    // traversal |x0| mu / k over spreading 2 mu sigma_rel^2; the reduced mass cancels
    return std::abs(setup.x0) / (2.0 * k * sigma_rel2);
}

ComplexGaussian2 reflected_reference(const PropagatorSetup& setup) {
    const CollisionParams& p = setup.masses;
    const GaussianProductState& s = setup.packets;
    const double Omega = 1.0 / (4.0 * s.Sigma * s.Sigma);
    const double omega = 1.0 / (4.0 * s.sigma * s.sigma);
    const Eigen::Vector2d a(2.0 * p.delta, 1.0 - 2.0 * p.delta);
    const Eigen::Vector2d b(1.0 - 2.0 * p.gamma, 2.0 * p.gamma);

    // -Omega (a.v)^2 - omega (b.v - x0)^2 + i k (b.v - x0) = -v^T A v / 2 + J.v + c0
    const Eigen::Matrix2d A = 2.0 * (Omega * a * a.transpose() + omega * b * b.transpose());
    const Vector2cd J = cplx(2.0 * omega * setup.x0, s.k) * b.cast<cplx>();
    const cplx c0(-omega * setup.x0 * setup.x0, -s.k * setup.x0);
    const Vector2cd center = A.cast<cplx>().inverse() * J;

    ComplexGaussian2 g;
    for (int i = 0; i < 2; ++i) {
        g.c[i] = center(i);
        for (int j = 0; j < 2; ++j)
            g.A[i][j] = A(i, j);
    }
    g.log_amp = 0.5 * std::log(s.norm) + c0 + 0.5 * J.cwiseProduct(center).sum();
    const double t = setup.t > 0.0 ? setup.t : round_trip_time(setup);
    return g.evolved(t, p.m, p.M);
}

cplx SampledWave::value(std::size_t iX, std::size_t ix) const {
    return demodulated(iX, ix) * std::exp(cplx(0.0, carrier_x * x_axis.nodes[ix] + carrier_X * X_axis.nodes[iX]));
}

PropagatedWave image_propagate(const PropagatorSetup& setup, int n, const std::optional<GridSpec>& grid) {
    PropagatedWave out;
    out.separation_ratio = separation_check(setup);
    out.time = setup.t > 0.0 ? setup.t : round_trip_time(setup);
    if (setup.x0 >= 0.0)
        out.warning = "initial offset x0 must be negative (particle left of the wall)";
    else if (out.separation_ratio >= kSeparationThreshold)
        out.warning = "separation ratio " + std::to_string(out.separation_ratio) +
                      " >= 0.1: incoming and outgoing waves may not separate before spreading";

    // The reflected packet sets the sampling window and the carrier.
    PropagatorSetup at_t = setup;
    at_t.t = out.time;
    const ComplexGaussian2 ref = reflected_reference(at_t);
    double mx = 0.0, mX = 0.0;
    ref.mean(mx, mX);
    ref.wavenumber(mx, mX, out.wave.carrier_x, out.wave.carrier_X);

    if (grid) {
        out.wave.grid = *grid;
    } else {
        double cov[2][2];
        ref.covariance(cov);
        const double ex = kStdCoverage * std::sqrt(cov[0][0]);
        const double eX = kStdCoverage * std::sqrt(cov[1][1]);
        GridSpec& g = out.wave.grid;
        g.x_min = mx - ex;
        g.x_max = mx + ex;
        g.X_min = mX - eX;
        g.X_max = mX + eX;
        // Residual wavenumber after demodulation is linear in position; bound it at the corners.
        double kx_res = 0.0, kX_res = 0.0;
        for (double x : {g.x_min, g.x_max})
            for (double X : {g.X_min, g.X_max}) {
                double kx = 0.0, kX = 0.0;
                ref.wavenumber(x, X, kx, kX);
                kx_res = std::max(kx_res, std::abs(kx - out.wave.carrier_x));
                kX_res = std::max(kX_res, std::abs(kX - out.wave.carrier_X));
            }
        g.nx = resolved_points(g.x_min, g.x_max, n, kx_res, g.rule);
        g.nX = resolved_points(g.X_min, g.X_max, n, kX_res, g.rule);
    }
    const GridSpec& g = out.wave.grid;
    g.validate();
    out.wave.x_axis = g.x_axis();
    out.wave.X_axis = g.X_axis();

    const CollisionParams& p = setup.masses;
    const FreePacket wall{p.M, setup.packets.Sigma, 0.0, 0.0};
    const FreePacket particle{p.m, setup.packets.sigma, setup.x0, setup.packets.k};
    const double amp = std::sqrt(setup.packets.norm);
    const double t = out.time;

    const auto& xs = out.wave.x_axis.nodes;
    const auto& Xs = out.wave.X_axis.nodes;
    out.wave.samples.assign(xs.size() * Xs.size(), 0.0);
    for (std::size_t i = 0; i < Xs.size(); ++i) {
        const double X = Xs[i];
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double x = xs[j];
            if (x >= X)
                continue; // outside the physical region u < 0
            const double X_img = X * (1.0 - 2.0 * p.delta) + 2.0 * p.delta * x;
            const double x_img = x * (1.0 - 2.0 * p.gamma) + 2.0 * p.gamma * X;
            const cplx direct = wall(X, t) * particle(x, t);
            const cplx image = wall(X_img, t) * particle(x_img, t);
            const cplx demod = std::exp(cplx(0.0, -(out.wave.carrier_x * x + out.wave.carrier_X * X)));
            out.wave.samples[i * xs.size() + j] = amp * (direct - image) * demod;
        }
    }
    return out;
}

double l2_distance_phase_fixed(const SampledWave& psi, const WaveFunction& ref) {
    const auto& xs = psi.x_axis;
    const auto& Xs = psi.X_axis;
    std::vector<cplx> r(psi.samples.size());
    cplx overlap = 0.0;
    for (std::size_t i = 0; i < Xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double x = xs.nodes[j];
            const double X = Xs.nodes[i];
            const cplx demod = std::exp(cplx(0.0, -(psi.carrier_x * x + psi.carrier_X * X)));
            const std::size_t idx = i * xs.size() + j;
            r[idx] = ref(x, X) * demod;
            overlap += std::conj(r[idx]) * psi.samples[idx] * (xs.weights[j] * Xs.weights[i]);
        }
    const cplx unphase = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : cplx(1.0);
    double d2 = 0.0;
    for (std::size_t i = 0; i < Xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const std::size_t idx = i * xs.size() + j;
            d2 += std::norm(psi.samples[idx] * unphase - r[idx]) * xs.weights[j] * Xs.weights[i];
        }
    return std::sqrt(d2);
}

SchmidtResult schmidt_decompose(const SampledWave& psi) {
    const auto nX = static_cast<Eigen::Index>(psi.X_axis.size());
    const auto nx = static_cast<Eigen::Index>(psi.x_axis.size());
    MatrixXcd M(nX, nx);
    for (Eigen::Index i = 0; i < nX; ++i)
        for (Eigen::Index j = 0; j < nx; ++j) {
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            M(i, j) = psi.demodulated(ui, uj) * std::sqrt(psi.X_axis.weights[ui] * psi.x_axis.weights[uj]);
        }
    return singular_values_of(M, psi.grid);
}

void write_csv(std::ostream& os, const SampledWave& psi) {
    const GridSpec& g = psi.grid;
    char buf[160];
    os << "# grid x_min=" << g.x_min << " x_max=" << g.x_max << " nx=" << g.nx << " X_min=" << g.X_min
       << " X_max=" << g.X_max << " nX=" << g.nX << " rule=" << rule_name(g.rule) << "\n";
    os << "iX,ix,X,x,re,im\n";
    for (std::size_t i = 0; i < psi.X_axis.size(); ++i)
        for (std::size_t j = 0; j < psi.x_axis.size(); ++j) {
            const cplx v = psi.value(i, j);
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.12g,%.12g,%.12g,%.12g\n", i, j, psi.X_axis.nodes[i],
                          psi.x_axis.nodes[j], v.real(), v.imag());
            os << buf;
        }
}

void write_kernel_csv(std::ostream& os, const Kernel& kernel, const Axis& axis) {
    char buf[160];
    os << "# kernel n=" << axis.size() << " x_min=" << axis.nodes.front() << " x_max=" << axis.nodes.back() << "\n";
    os << "i,j,x_i,x_j,re,im\n";
    for (std::size_t i = 0; i < axis.size(); ++i)
        for (std::size_t j = 0; j < axis.size(); ++j) {
            const cplx v = kernel(axis.nodes[i], axis.nodes[j]);
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.12g,%.12g,%.12g,%.12g\n", i, j, axis.nodes[i], axis.nodes[j],
                          v.real(), v.imag());
            os << buf;
        }
}

} // namespace decoh::oracles
