// Acceptance checks: one PASS/FAIL line each, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "decoh/entanglement.hpp"
#include "decoh/error_analysis.hpp"
#include "decoh/kinematics.hpp"
#include "decoh/optimize.hpp"
#include "decoh/oracles.hpp"
#include "decoh/quadrature.hpp"
#include "decoh/thermal.hpp"
#include "test_support.hpp"

using namespace decoh;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass)
        ++failures;
    std::printf("%s %2d %-34s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CollisionParams random_masses(std::mt19937& gen, double lo = -6, double hi = 6) {
    std::uniform_real_distribution<double> lm(lo, hi);
    return collision_params(std::exp(lm(gen)), std::exp(lm(gen)));
}

Outcome zero_error_matching() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 gen(20240101);
    double worst_closed = 0, worst_quad = 0;
    for (int i = 0; i < 100; ++i) {
        const auto p = random_masses(gen);
        const double lambda = p.delta / p.gamma;
        worst_closed = std::max(worst_closed, std::abs(overlap_amplitude(lambda, 0, p) - 1));
        const auto in = initial_state(std::sqrt(lambda), 1, 0);
        const auto g = oracles::grid_for_overlap(in, p, 128, QuadratureRule::gauss_legendre);
        const auto r = oracles::quadrature_overlap(ideal_reflected_state(in), post_collision_state(in, p), g);
        worst_quad = std::max(worst_quad, std::abs(std::abs(r.value) - 1));
    }
    const double secs = seconds_since(t0);
    return {worst_closed <= 1e-12 && worst_quad <= 1e-8 && secs < 10,
            fmt("max|A-1| closed=%.2e quadrature=%.2e in %.2fs", worst_closed, worst_quad, secs)};
}

Outcome small_k_law() {
    const auto p = collision_params_from_fraction(1e-3);
    double lo = 1e9, hi = -1e9;
    for (double ks : {1e-3, 1e-2}) {
        const double r = optimal_lambda(ks, p).one_minus_A / (2 * p.delta * ks * ks);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return {lo >= 0.95 && hi <= 1.05, fmt("ratio in [%.5f, %.5f]", lo, hi)};
}

Outcome large_k_law() {
    const auto p = collision_params_from_fraction(1e-6);
    bool ok = true;
    std::string d;
    for (double ks : {50.0, 100.0}) {
        const auto o = optimal_lambda(ks, p);
        const double r = o.one_minus_A / (2 * p.delta * ks);
        const double rl = o.lambda_max / (p.delta / (2 * ks));
        ok = ok && r >= 0.95 && r <= 1.05 && rl >= 0.9 && rl <= 1.1;
        d += (d.empty() ? "" : "; ") + fmt("ks=%g: defect %.5f lambda %.5f", ks, r, rl);
    }
    return {ok, d};
}

Outcome crossover_anchor() {
    const auto p = collision_params_from_fraction(1e-4);
    const double r = optimal_lambda(1, p).one_minus_A / (1.2 * p.delta);
    return {std::abs(r - 1) <= 0.1, fmt("(1-A)/(1.2 delta) = %.5f", r)};
}

Outcome mismatch_penalty_check() {
    // Relative comparison, floored at delta^2 where both sides vanish to
    // first order (y = 0, k = 0).
    const double d = 1e-5;
    const auto p = collision_params_from_fraction(d);
    double worst = 0;
    for (double ks : {0.0, 0.5, 1.0})
        for (int i = 0; i <= 60; ++i) {
            const double y = -3 + 0.1 * i;
            const double exact = overlap_defect(p.delta / p.gamma * std::exp(y), ks, p);
            const double approx = mismatch_penalty(y, ks) * d;
            worst = std::max(worst, std::abs(approx - exact) / std::max(exact, d * d));
        }
    return {worst <= 0.05, fmt("max relative deviation %.2e over 183 points", worst)};
}

Outcome spectrum_identity() {
    double worst_w = 0, worst_z = 0, worst_sum = 0;
    for (int i = 0; i <= 240; ++i) {
        const double w = std::pow(10.0, -6 + 0.05 * i);
        const auto s = spectral_params(w);
        worst_w = std::max(worst_w, std::abs(2 * std::sinh(s.u / 2) - w) / w);
        worst_z = std::max(worst_z, std::abs(s.z * s.z - std::exp(-s.u)));
        double sum = 0;
        for (double f : spectrum(w, 64))
            sum += f;
        worst_sum = std::max(worst_sum, std::abs(sum - (1 - std::exp(-64 * s.u))));
    }
    return {worst_w <= 1e-12 && worst_z <= 1e-12 && worst_sum <= 1e-12,
            fmt("sinh rel %.1e, z^2 %.1e, 64-term sum %.1e", worst_w, worst_z, worst_sum)};
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 gen(777);
    std::uniform_real_distribution<double> shift(-3, 3), spread(0.5, 2.0), kd(0, 3);
    double svd = 0, eig = 0, ratio = 0;
    int accepted = 0;
    while (accepted < 20) {
        const auto p = random_masses(gen, -4, 2);
        const double sigma = spread(gen);
        const double Sigma = sigma * std::sqrt(p.delta / p.gamma * std::exp(shift(gen)));
        const auto f = post_collision_state(initial_state(Sigma, sigma, kd(gen) / sigma), p);
        const auto kp = kernel_params(f);
        // Keep states whose first five levels are resolvable in double precision.
        if (kp.spectral.matched || kp.spectral.w < 0.2 || kp.spectral.w > 5)
            continue;
        ++accepted;
        const double F0 = largest_eigenvalue(kp.spectral.w);
        const auto g = oracles::grid_for(f, 512);
        const auto sv = oracles::schmidt_decompose(f, g);
        const auto ev = oracles::kernel_eigensolve(f, g);
        svd = std::max(svd, std::abs(sv.top_weight() - F0));
        eig = std::max(eig, std::abs(ev[0] - F0));
        const double r = std::exp(-kp.spectral.u);
        for (std::size_t k = 1; k <= 4; ++k)
            ratio = std::max(ratio, std::abs(ev[k] / ev[k - 1] - r));
    }
    const double secs = seconds_since(t0);
    return {svd <= 1e-6 && eig <= 1e-6 && ratio <= 1e-4 && secs < 120,
            fmt("SVD %.1e, eigensolve %.1e, level ratios %.1e", svd, eig, ratio) + fmt(" in %.1fs", secs)};
}

Outcome matched_with_momentum() {
    double worst = 1;
    for (double M : {4.0, 99.0, 1e4}) {
        const auto p = collision_params(1, M);
        const double sigma = 1.3;
        const auto f = post_collision_state(initial_state(optimal_spreads(sigma, p), sigma, 10 / sigma), p);
        worst = std::min(worst, oracles::schmidt_decompose(f, oracles::grid_for(f, 512)).top_weight());
    }
    return {worst >= 1 - 1e-6, fmt("min SVD F0 = 1 - %.1e", 1 - worst)};
}

Outcome oscillator_lemma() {
    const double u = 0.7;
    std::vector<std::vector<double>> spectra;
    double dev = 0;
    for (double beta : {0.1, 10.0}) {
        const double L = 12 / std::sqrt(beta);
        const Axis axis = make_axis(-L, L, 400, QuadratureRule::gauss_legendre);
        const auto ev = oracles::kernel_eigensolve(
            [&](double a, double b) { return cplx(oscillator_kernel(beta, u, a, b)); }, axis);
        for (int n = 0; n < 5; ++n)
            dev = std::max(dev, std::abs(ev[static_cast<std::size_t>(n)] - std::exp(-u * (n + 0.5))));
        spectra.push_back(ev);
    }
    double across = 0;
    for (std::size_t n = 0; n < 5; ++n)
        across = std::max(across, std::abs(spectra[0][n] - spectra[1][n]));
    return {dev <= 1e-6 && across <= 1e-8, fmt("eigensolve vs exp(-u(n+1/2)) %.1e, across beta %.1e", dev, across)};
}

Outcome e2_reconstruction() {
    const auto p = collision_params_from_fraction(0.01);
    const auto f = post_collision_state(initial_state(1, 1, 0), p); // Omega = omega = 1/4
    const double pts[] = {-3, -1.5, 0, 1.5, 3};
    std::vector<std::complex<double>> numeric;
    for (double xp : pts)
        for (double x : pts)
            numeric.push_back(testsupport::trapezoid1([&](double X) { return std::conj(f(xp, X)) * f(x, X); }, -40,
                                                      40, 8001));
    const auto max_dev = [&](double c) {
        double dev = 0;
        std::size_t i = 0;
        for (double xp : pts)
            for (double x : pts)
                dev = std::max(dev, std::abs(reduced_kernel(f, xp, x, c) - numeric[i++]));
        return dev;
    };
    const double at2 = max_dev(2.0);
    double closest_other = 1e300;
    for (double c : {0.0, 1.0, 1.9, 2.1, 3.0, 4.0, 8.0})
        closest_other = std::min(closest_other, max_dev(c));
    return {at2 <= 1e-8 && closest_other >= 1e-3,
            fmt("E^2 = 2 rho^2: %.1e; nearest alternative %.1e", at2, closest_other)};
}

Outcome image_propagation() {
    struct Case {
        double m, M, Sigma, sigma, k, x0;
    };
    double worst = 0, worst_ratio = 0;
    for (const Case c : {Case{1, 20, 1, 1, 60, -14.142135623730951}, Case{1, 4, 2, 1, 50, -25},
                         Case{2, 3, 0.7, 1.2, 45, -15}}) {
        oracles::PropagatorSetup s;
        s.masses = collision_params(c.m, c.M);
        s.packets = initial_state(c.Sigma, c.sigma, c.k);
        s.x0 = c.x0;
        const auto w = oracles::image_propagate(s, 256);
        if (w.separation_ratio >= oracles::kSeparationThreshold)
            return {false, fmt("separation ratio %.3f outside validity", w.separation_ratio)};
        auto at = s;
        at.t = w.time;
        const auto ref = oracles::reflected_reference(at);
        worst = std::max(worst, oracles::l2_distance_phase_fixed(w.wave, [&](double x, double X) { return ref(x, X); }));
        worst_ratio = std::max(worst_ratio, w.separation_ratio);
    }
    return {worst < 1e-3, fmt("max L2 %.1e at separation ratio <= %.3f", worst, worst_ratio)};
}

Outcome thermal_anchor() {
    const double L_cm = thermal::thermal_length(1.0) * 100;
    const double rel = std::abs(L_cm - 0.2) / 0.2;
    double gm = 0;
    for (double mu : {thermal::electron_mass, 1.67262192e-27, 1e-22})
        for (double T : {1e-3, 1.0, 300.0, 1e4}) {
            const double s = thermal::thermal_spread(mu, T);
            gm = std::max(gm, std::abs(s - std::sqrt(thermal::compton_wavelength(mu) * thermal::thermal_length(T))) / s);
        }
    return {std::abs(L_cm - 0.229) < 0.0005 && rel <= 0.15 && gm <= 1e-12,
            fmt("hbar c/k_B = %.4f cm K (%.1f%% from 0.2), geometric mean %.1e", L_cm, 100 * rel, gm)};
}

Outcome argmax_coincidence() {
    std::mt19937 gen(4242);
    double worst_A = 0, worst_F = 0;
    for (int i = 0; i < 10; ++i) {
        const auto p = random_masses(gen, -5, 5);
        const double target = p.delta / p.gamma;
        const double l0 = std::log(target);
        // sqrt(ln A^-2) and z are V-shaped around the maximum, which golden
        // section resolves to the bracket tolerance.
        const auto negA = [&](double l) { return std::sqrt(log_inverse_overlap_squared(std::exp(l), 0, p)); };
        const auto z = [&](double l) {
            const auto f = post_collision_state(initial_state(std::exp(l / 2), 1, 0), p);
            return kernel_params(f).spectral.z;
        };
        const auto a = golden_section_minimize(negA, l0 - 5, l0 + 4, 1e-11);
        const auto b = golden_section_minimize(z, l0 - 4, l0 + 5, 1e-11);
        if (!a.converged || !b.converged)
            return {false, "golden section did not converge"};
        worst_A = std::max(worst_A, std::abs(std::exp(a.x) / target - 1));
        worst_F = std::max(worst_F, std::abs(std::exp(b.x) / target - 1));
    }
    return {worst_A <= 1e-8 && worst_F <= 1e-8,
            fmt("relative distance to delta/gamma: A %.1e, F0 %.1e", worst_A, worst_F)};
}

std::string run_cli(const std::vector<std::string>& args, int& code) {
    std::vector<std::string> argv = {"decoh"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    code = cli::run(argv, out, err);
    return out.str();
}

Outcome cli_contract() {
    int code = -1;
    run_cli({"verify"}, code);
    if (code != 0)
        return {false, fmt("verify exited %g", code)};

    std::ifstream g(DECOH_GOLDEN_DIR "/sweep_k_sigma.csv");
    std::stringstream golden;
    golden << g.rdbuf();
    if (golden.str().empty())
        return {false, "golden file missing"};
    const std::vector<std::string> args = {"sweep", "--param", "k_sigma", "--start", "1e-3", "--stop", "1e3",
                                           "--points", "61", "--scale", "log", "--delta", "1e-4"};
    int identical = 0;
    for (const char* threads : {"1", "4", "1", "3"}) {
        setenv("DECOH_NUM_THREADS", threads, 1);
        const std::string out = run_cli(args, code);
        identical += (code == 0 && out == golden.str());
    }
    unsetenv("DECOH_NUM_THREADS");
    return {identical == 4, fmt("verify exit 0; %g/4 sweeps byte-identical to golden", identical)};
}

} // namespace

int main() {
    report(1, "zero-error matching", zero_error_matching);
    report(2, "small k sigma law", small_k_law);
    report(3, "large k sigma law", large_k_law);
    report(4, "crossover anchor", crossover_anchor);
    report(5, "mismatch penalty", mismatch_penalty_check);
    report(6, "spectrum identity", spectrum_identity);
    report(7, "oracle equivalence for F0", oracle_equivalence);
    report(8, "matched spreads with momentum", matched_with_momentum);
    report(9, "oscillator kernel lemma", oscillator_lemma);
    report(10, "E^2 reconstruction", e2_reconstruction);
    report(11, "image propagator consistency", image_propagation);
    report(12, "thermal anchor", thermal_anchor);
    report(13, "argmax coincidence", argmax_coincidence);
    report(14, "CLI contract", cli_contract);
    std::printf("%d of 14 failed\n", failures);
    return failures == 0 ? 0 : 1;
}
