#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "decoh/kinematics.hpp"
#include "decoh/quadrature.hpp"

namespace decoh::oracles {

/// Tensor-product grid over (x, X). Extents should cover 8 standard
/// deviations of the target state; at least 64 points per axis, and the
/// largest node spacing times the resolved wavenumber must stay <= 0.3.
struct GridSpec {
    double x_min = -1.0, x_max = 1.0;
    double X_min = -1.0, X_max = 1.0;
    int nx = 512, nX = 512;
    QuadratureRule rule = QuadratureRule::trapezoid;

    Axis x_axis() const { return make_axis(x_min, x_max, nx, rule); }
    Axis X_axis() const { return make_axis(X_min, X_max, nX, rule); }

    /// Throws ConfigError when the point counts or the resolution of
    /// wavenumbers kx, kX are inadequate.
    void validate(double kx = 0.0, double kX = 0.0) const;
};

inline constexpr double kStdCoverage = 8.0;
inline constexpr double kMaxPhaseStep = 0.3;
inline constexpr int kMinPoints = 64;

/// Smallest point count >= n resolving wavenumber k over [lo, hi] for the rule.
int resolved_points(double lo, double hi, int n, double k, QuadratureRule rule);

/// 8-sigma grid for |Psi_F|^2, with point counts raised to resolve its phase.
GridSpec grid_for(const PostCollisionState& s, int n = 512, QuadratureRule rule = QuadratureRule::trapezoid);

/// Grid covering both Psi_F and the fixed-wall test state, resolving the
/// oscillation of the overlap integrand.
GridSpec grid_for_overlap(const GaussianProductState& s, const CollisionParams& p, int n = 512,
                          QuadratureRule rule = QuadratureRule::trapezoid);

bool covers(const GridSpec& g, const PostCollisionState& s);

struct OverlapResult {
    cplx value;
    double truncation_estimate = 0.0;
};

/// \int\int a^* b dx dX on the grid. The truncation estimate compares with the
/// same rule on half the points per axis.
OverlapResult quadrature_overlap(const WaveFunction& a, const WaveFunction& b, const GridSpec& g,
                                 double kx = 0.0, double kX = 0.0);

struct SchmidtResult {
    std::vector<double> singular_values; // descending
    double total = 0.0;                  // sum of squares

    double top_weight() const { return singular_values.empty() ? 0.0 : singular_values.front() * singular_values.front(); }
};

/// Singular values of the weighted sample matrix (row = X node, column = x node).
SchmidtResult schmidt_decompose(const WaveFunction& psi, const GridSpec& g);
SchmidtResult schmidt_decompose(const PostCollisionState& s, const GridSpec& g);

using Kernel = std::function<cplx(double x_prime, double x)>;

/// Eigenvalues (descending) of the Nystrom discretization sqrt(w_i) K(x_i, x_j) sqrt(w_j).
/// Throws NumericError when the discretized kernel is not Hermitian to 1e-10.
std::vector<double> kernel_eigensolve(const Kernel& kernel, const Axis& axis);

/// Closed-form reduced kernel of Psi_F (wall traced out) on the grid's x axis.
std::vector<double> kernel_eigensolve(const PostCollisionState& s, const GridSpec& g);

enum class TraceOut { wall, particle };

/// Eigenvalues of the reduced density built numerically from samples of psi.
std::vector<double> reduced_density_eigenvalues(const WaveFunction& psi, const GridSpec& g, TraceOut which);

struct KIndependence {
    double F0_with_k = 0.0;
    double F0_without_k = 0.0;
    bool agree = false;
};

/// Schmidt oracle at the state's k and at k = 0.
KIndependence k_independence_check(const PostCollisionState& s, int n = 512, double tol = 1e-6);

// ---- time-domain image propagation ----

/// Free evolution (hbar = 1) of exp(-(y - center)^2 / 4 spread^2 + i k (y - center)).
struct FreePacket {
    double mass = 1.0;
    double spread = 1.0;
    double center = 0.0;
    double k = 0.0;

    cplx operator()(double y, double t) const;
};

/// Complex Gaussian exp(log_amp - (v - c)^T A (v - c) / 2) over v = (x, X).
struct ComplexGaussian2 {
    cplx A[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    cplx c[2] = {0.0, 0.0};
    cplx log_amp = 0.0;

    cplx operator()(double x, double X) const;

    /// Exact free evolution for masses m (x) and M (X).
    ComplexGaussian2 evolved(double t, double m, double M) const;

    void mean(double& x, double& X) const;
    void covariance(double cov[2][2]) const;
    /// Local wavenumber (d phase / dx, d phase / dX) at (x, X).
    void wavenumber(double x, double X, double& kx, double& kX) const;
};

/// Incoming product packet offset to x0 < 0, evolved for time t with the
/// exact hard-wall propagator (method of images in the relative coordinate).
struct PropagatorSetup {
    CollisionParams masses;
    GaussianProductState packets;
    double x0 = -10.0;
    double t = 0.0;
};

/// Time for the packet center to reach the wall and come back to |x0|.
double round_trip_time(const PropagatorSetup& setup);

/// Traversal time over relative-coordinate spreading time,
/// |x0| / (2 |k| (sigma^2 + Sigma^2)). Valid setups have ratio < 0.1.
double separation_check(const PropagatorSetup& setup);

inline constexpr double kSeparationThreshold = 0.1;

/// Outgoing state written at the symmetric instant, moved to offset x0 and
/// freely evolved to time t. Built from a 2-D Gaussian independent of the
/// per-coordinate packet route used by image_propagate.
ComplexGaussian2 reflected_reference(const PropagatorSetup& setup);

/// Sampled wave function on a grid. `samples` hold psi(x, X) e^{-i(kx x + kX X)}
/// for the stored carrier (a product of local phases), row-major with one row
/// per X node.
struct SampledWave {
    GridSpec grid;
    Axis x_axis;
    Axis X_axis;
    std::vector<cplx> samples;
    double carrier_x = 0.0;
    double carrier_X = 0.0;

    cplx demodulated(std::size_t iX, std::size_t ix) const { return samples[iX * x_axis.size() + ix]; }
    cplx value(std::size_t iX, std::size_t ix) const;
};

struct PropagatedWave {
    SampledWave wave;
    double time = 0.0;
    double separation_ratio = 0.0;
    std::optional<std::string> warning;
};

/// Exact hard-wall solution at setup.t (or the round-trip time when t <= 0)
/// on the physical half-plane x < X. The default grid follows the reflected
/// packet with `n` points per axis before resolution adjustments.
PropagatedWave image_propagate(const PropagatorSetup& setup, int n = 256,
                               const std::optional<GridSpec>& grid = std::nullopt);

/// Phase-fixed L2 distance min_theta || psi e^{-i theta} - ref ||.
double l2_distance_phase_fixed(const SampledWave& psi, const WaveFunction& ref);

SchmidtResult schmidt_decompose(const SampledWave& psi);

/// Long-format CSV dump: header comments with grid metadata, then
/// `iX,ix,X,x,re,im` rows in row-major order (carrier restored).
void write_csv(std::ostream& os, const SampledWave& psi);

/// Square matrix dump, e.g. a discretized kernel: `i,j,x_i,x_j,re,im`.
void write_kernel_csv(std::ostream& os, const Kernel& kernel, const Axis& axis);

} // namespace decoh::oracles
