#include "decoh/verify.hpp"

#include <algorithm>
#include <cmath>

#include "decoh/entanglement.hpp"
#include "decoh/error_analysis.hpp"
#include "decoh/kinematics.hpp"
#include "decoh/oracles.hpp"

namespace decoh::verify {

namespace {

void add(std::vector<Check>& out, std::string name, double tol, double dev) {
    out.push_back({std::move(name), tol, dev, std::isfinite(dev) && dev <= tol});
}

} // namespace

std::vector<Check> run_oracle_suite(const Options& opt) {
    using namespace oracles;
    std::vector<Check> out;

    const CollisionParams p = collision_params(opt.m, opt.M);
    const GaussianProductState in = initial_state(opt.Sigma, opt.sigma, opt.k);
    const PostCollisionState f = post_collision_state(in, p);
    const double lambda = opt.Sigma * opt.Sigma / (opt.sigma * opt.sigma);

    // Overlap integral against the closed-form amplitude.
    {
        const OverlapResult ov = quadrature_overlap(ideal_reflected_state(in), f,
                                                    grid_for_overlap(in, p, opt.grid), opt.k, 2.0 * p.gamma * opt.k);
        add(out, "quadrature_overlap_vs_closed_form", opt.quadrature_tol,
            std::abs(std::abs(ov.value) - overlap_amplitude(lambda, opt.k * opt.sigma, p)));
    }
    {
        const GaussianProductState matched = initial_state(optimal_spreads(opt.sigma, p), opt.sigma, 0.0);
        const OverlapResult ov = quadrature_overlap(ideal_reflected_state(matched), post_collision_state(matched, p),
                                                    grid_for_overlap(matched, p, opt.grid));
        add(out, "quadrature_overlap_matched_is_one", opt.quadrature_tol, std::abs(std::abs(ov.value) - 1.0));
    }

    // Schmidt and kernel routes against the closed-form spectrum.
    const GridSpec g = grid_for(f, opt.grid);
    const KernelParams kp = kernel_params(f);
    const std::vector<double> closed = spectrum(kp.spectral.w, 5);
    const SchmidtResult sv = schmidt_decompose(f, g);
    add(out, "schmidt_top_weight_vs_F0", opt.schmidt_tol, std::abs(sv.top_weight() - closed[0]));
    add(out, "schmidt_total_weight", opt.trace_tol, std::abs(sv.total - 1.0));
    {
        double worst = 0.0;
        const double q = std::exp(-kp.spectral.u);
        for (std::size_t i = 1; i < 5; ++i) {
            const double r = std::pow(sv.singular_values[i] / sv.singular_values[i - 1], 2);
            worst = std::max(worst, std::abs(r - q));
        }
        add(out, "schmidt_level_ratios_vs_exp_minus_u", opt.ratio_tol, worst);
    }
    const std::vector<double> ev = kernel_eigensolve(f, g);
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < 5; ++i)
            worst = std::max(worst, std::abs(ev[i] - closed[i]));
        add(out, "kernel_eigensolve_vs_spectrum", opt.eigensolve_tol, worst);
        double trace = 0.0;
        for (double e : ev)
            trace += e;
        add(out, "kernel_trace", opt.trace_tol, std::abs(trace - 1.0));
    }
    {
        const std::vector<double> other = reduced_density_eigenvalues(f, g, TraceOut::particle);
        add(out, "kernel_vs_transposed_schmidt_route", opt.route_tol, std::abs(ev[0] - other[0]));
    }

    // Closed-form kernel against the 1-D reduction of sampled Psi_F over X.
    {
        const Axis Xs = make_axis(g.X_min, g.X_max, std::max(g.nX, 1024), QuadratureRule::gauss_legendre);
        double worst = 0.0;
        for (double xp : {-1.5, -0.5, 0.0, 0.5, 1.5})
            for (double x : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
                const double xs_p = xp * f.std_x();
                const double xs = x * f.std_x();
                cplx sum = 0.0;
                for (std::size_t i = 0; i < Xs.size(); ++i)
                    sum += std::conj(f(xs_p, Xs.nodes[i])) * f(xs, Xs.nodes[i]) * Xs.weights[i];
                worst = std::max(worst, std::abs(sum - reduced_kernel(f, xs_p, xs)));
            }
        add(out, "reduced_kernel_reconstruction", opt.kernel_tol, worst);
    }

    // Oscillator kernel lemma at two widths.
    {
        const double u = 0.7;
        const std::vector<double> lemma = oscillator_kernel_spectrum(1.0, u, 5);
        double worst = 0.0;
        for (double beta : {0.1, 10.0}) {
            const double L = 10.0 / std::sqrt(2.0 * beta);
            const std::vector<double> e = kernel_eigensolve(
                [&](double xp, double x) { return cplx(oscillator_kernel(beta, u, xp, x)); },
                make_axis(-L, L, opt.grid, QuadratureRule::trapezoid));
            for (std::size_t i = 0; i < 5; ++i)
                worst = std::max(worst, std::abs(e[i] - lemma[i]));
        }
        add(out, "oscillator_kernel_spectrum", opt.eigensolve_tol, worst);
    }

    // Matched spreads with momentum stay a product state.
    {
        const GaussianProductState matched = initial_state(optimal_spreads(opt.sigma, p), opt.sigma, 10.0 / opt.sigma);
        const PostCollisionState fm = post_collision_state(matched, p);
        const SchmidtResult s = schmidt_decompose(fm, grid_for(fm, opt.grid));
        add(out, "matched_spreads_with_momentum_product", opt.schmidt_tol, std::max(0.0, 1.0 - s.top_weight()));
    }

    // Time-domain image propagation against the outgoing state.
    {
        PropagatorSetup setup;
        setup.masses = p;
        const double k_prop = 60.0 / opt.sigma;
        setup.packets = initial_state(opt.Sigma, opt.sigma, k_prop);
        setup.x0 = -10.0 * std::hypot(opt.sigma, opt.Sigma);
        const PropagatedWave wave = image_propagate(setup, std::max(kMinPoints, opt.grid / 2));
        PropagatorSetup at = setup;
        at.t = wave.time;
        const ComplexGaussian2 ref = reflected_reference(at);
        const double l2 = l2_distance_phase_fixed(wave.wave, [&](double x, double X) { return ref(x, X); });
        add(out, "image_propagation_l2", opt.propagation_tol, wave.warning ? INFINITY : l2);
        const double F0 = largest_eigenvalue(kernel_params(post_collision_state(setup.packets, p)).spectral.w);
        add(out, "image_propagation_schmidt_F0", opt.propagation_tol,
            std::abs(schmidt_decompose(wave.wave).top_weight() - F0));
    }
    return out;
}

bool all_passed(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

} // namespace decoh::verify
