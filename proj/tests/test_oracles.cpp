#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "decoh/entanglement.hpp"
#include "decoh/error_analysis.hpp"
#include "decoh/errors.hpp"
#include "decoh/kinematics.hpp"
#include "decoh/oracles.hpp"
#include "decoh/quadrature.hpp"
#include "test_support.hpp"

using namespace decoh;
using namespace decoh::oracles;

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
    for (int n : {1, 2, 5, 16, 64}) {
        const Axis a = gauss_legendre(n);
        for (int deg = 0; deg < 2 * n; ++deg) {
            double sum = 0;
            for (std::size_t i = 0; i < a.size(); ++i)
                sum += a.weights[i] * std::pow(a.nodes[i], deg);
            const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(sum == doctest::Approx(exact).epsilon(1e-13).scale(1));
        }
    }
    const Axis g = make_axis(-3, 5, 40, QuadratureRule::gauss_legendre);
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        s += g.weights[i] * std::exp(-g.nodes[i] * g.nodes[i]);
    CHECK(s == doctest::Approx(std::sqrt(std::numbers::pi) * 0.5 * (std::erf(5.0) + std::erf(3.0))).epsilon(1e-14));
}

TEST_CASE("grid validation") {
    GridSpec g;
    g.x_min = -10, g.x_max = 10, g.X_min = -10, g.X_max = 10;
    g.nx = g.nX = 32;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g.nx = g.nX = 128;
    CHECK_NOTHROW(g.validate(1.0, 0.0));
    CHECK_THROWS_AS(g.validate(5.0, 0.0), ConfigError); // dx k > 0.3

    const auto f = post_collision_state(initial_state(0.5, 2, 3), collision_params(1, 7));
    const GridSpec auto_grid = grid_for(f, 64);
    CHECK(covers(auto_grid, f));
    CHECK(auto_grid.nx >= 64);
}

TEST_CASE("quadrature overlap") {
    const auto in = initial_state(0.7, 1.2, 1.1);
    const auto p = collision_params(1, 6);
    const auto g = grid_for_overlap(in, p, 256);
    const auto self = quadrature_overlap(in, in, g, in.k, 0);
    CHECK(std::abs(self.value - 1.0) < 1e-10);

    const auto pd = collision_params_from_fraction(0.01);
    const auto matched = initial_state(std::sqrt(pd.delta / pd.gamma), 1, 0);
    const auto gm = grid_for_overlap(matched, pd, 256);
    const auto one = quadrature_overlap(ideal_reflected_state(matched), post_collision_state(matched, pd), gm);
    CHECK(std::abs(std::abs(one.value) - 1) < 1e-8);

    const auto unit = initial_state(1, 1, 0);
    const auto r = quadrature_overlap(ideal_reflected_state(unit), post_collision_state(unit, pd),
                                      grid_for_overlap(unit, pd, 256));
    CHECK(std::abs(r.value) == doctest::Approx(overlap_amplitude(1, 0, pd)).epsilon(1e-10));
}

TEST_CASE("grid refinement stays within the truncation estimate") {
    const auto in = initial_state(2, 1, 1.5);
    const auto p = collision_params(1, 4);
    const auto a = ideal_reflected_state(in);
    const auto b = post_collision_state(in, p);
    const auto g1 = grid_for_overlap(in, p, 192);
    auto g2 = g1;
    g2.nx *= 2;
    g2.nX *= 2;
    const auto r1 = quadrature_overlap(a, b, g1, in.k, 2 * p.gamma * in.k);
    const auto r2 = quadrature_overlap(a, b, g2, in.k, 2 * p.gamma * in.k);
    CHECK(std::abs(r1.value - r2.value) <= r1.truncation_estimate);

    const auto s1 = schmidt_decompose(b, g1).top_weight();
    const auto s2 = schmidt_decompose(b, g2).top_weight();
    CHECK(std::abs(s1 - s2) <= std::max(r1.truncation_estimate, 1e-13));
}

TEST_CASE("Schmidt decomposition") {
    SUBCASE("equal masses give a product state") {
        const auto f = post_collision_state(initial_state(0.6, 1.4, 2), collision_params(1, 1));
        CHECK(schmidt_decompose(f, grid_for(f, 192)).top_weight() == doctest::Approx(1).epsilon(1e-10));
    }
    SUBCASE("spectrum of an unmatched state") {
        const auto f = post_collision_state(initial_state(1, 1, 0), collision_params(1, 99));
        const auto res = schmidt_decompose(f, grid_for(f, 256));
        CHECK(res.top_weight() == doctest::Approx(0.631807923225).epsilon(1e-10));
        CHECK(res.total == doctest::Approx(1).epsilon(1e-10));
        const double r = std::exp(-kernel_params(f).spectral.u);
        for (std::size_t k = 1; k <= 4; ++k) {
            const double ratio = std::pow(res.singular_values[k] / res.singular_values[k - 1], 2);
            CHECK(std::abs(ratio - r) < 1e-4);
        }
    }
    SUBCASE("generic callable agrees with the test-side SVD") {
        const auto f = post_collision_state(initial_state(0.8, 1.1, 0.5), collision_params(2, 5));
        const auto g = grid_for(f, 128);
        const auto lib = schmidt_decompose(WaveFunction(f), g).top_weight();
        const auto ref = testsupport::schmidt_weights(f, g.x_min, g.x_max, 300, g.X_min, g.X_max, 300);
        CHECK(lib == doctest::Approx(ref[0]).epsilon(1e-9));
    }
}

TEST_CASE("kernel eigensolve and partial traces") {
    const auto f = post_collision_state(initial_state(2, 1, 1.5), collision_params(1, 4));
    const auto g = grid_for(f, 256);
    const auto ev = kernel_eigensolve(f, g);
    const auto sv = schmidt_decompose(f, g);
    double trace = 0;
    for (double e : ev)
        trace += e;
    CHECK(trace == doctest::Approx(1).epsilon(1e-8));
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(std::abs(ev[i] - sv.singular_values[i] * sv.singular_values[i]) < 1e-10);

    const auto wall = reduced_density_eigenvalues(f, g, TraceOut::wall);
    const auto particle = reduced_density_eigenvalues(f, g, TraceOut::particle);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(std::abs(wall[i] - particle[i]) < 1e-10);

    // A non-Hermitian kernel is rejected.
    const Axis a = make_axis(-5, 5, 64, QuadratureRule::trapezoid);
    CHECK_THROWS_AS(kernel_eigensolve([](double xp, double x) { return cplx(std::exp(-(xp - 2 * x) * (xp - 2 * x))); }, a),
                    NumericError);
}

TEST_CASE("entanglement does not depend on k") {
    const auto f = post_collision_state(initial_state(1, 1, 3), collision_params_from_fraction(0.01));
    const auto r = k_independence_check(f, 384);
    CHECK(r.agree);
    CHECK(std::abs(r.F0_with_k - r.F0_without_k) < 1e-6);

    const auto p = collision_params_from_fraction(0.01);
    const auto m = post_collision_state(initial_state(std::sqrt(p.delta / p.gamma), 1, 10), p);
    CHECK(schmidt_decompose(m, grid_for(m, 256)).top_weight() >= 1 - 1e-10);
}

TEST_CASE("separation check") {
    PropagatorSetup s;
    s.masses = collision_params(1, 20);
    s.packets = initial_state(1, 1, 5);
    s.x0 = -10;
    const double r5 = separation_check(s);
    s.packets = initial_state(1, 1, 0.5);
    const double r05 = separation_check(s);
    CHECK(r05 == doctest::Approx(10 * r5));
    CHECK(r5 == doctest::Approx(10.0 / (2 * 5 * 2)));

    // Scaling every length at fixed k sigma leaves the ratio unchanged.
    s.packets = initial_state(2, 2, 2.5);
    s.x0 = -20;
    CHECK(separation_check(s) == doctest::Approx(r5));

    s.packets = initial_state(1, 1, 1e6);
    s.x0 = -10;
    CHECK(separation_check(s) < 1e-5);
    CHECK(round_trip_time(s) == doctest::Approx(20.0 / 1e6));
}

TEST_CASE("free packet") {
    const FreePacket fp{2.0, 0.7, 1.0, 3.0};
    // Unit peak at t = 0; the norm is conserved.
    CHECK(std::abs(fp(1.0, 0.0)) == doctest::Approx(1.0));
    for (double t : {0.0, 0.5, 3.0}) {
        const auto n = testsupport::trapezoid1([&](double y) { return std::norm(fp(y, t)); }, -60, 70, 20001);
        CHECK(n.real() == doctest::Approx(std::sqrt(2 * std::numbers::pi) * 0.7).epsilon(1e-10));
    }
    // Schroedinger equation by finite differences: i d/dt = -1/(2m) d^2/dy^2
    const double y = 1.3, t = 0.4, h = 1e-3;
    const cplx lhs = cplx(0, 1) * (fp(y, t + h) - fp(y, t - h)) / (2 * h);
    const cplx rhs = -(fp(y + h, t) - 2.0 * fp(y, t) + fp(y - h, t)) / (h * h) / (2 * fp.mass);
    CHECK(std::abs(lhs - rhs) < 1e-5);
}

TEST_CASE("image propagation reproduces the outgoing state") {
    PropagatorSetup s;
    s.masses = collision_params(1, 20);
    s.packets = initial_state(1, 1, 60);
    s.x0 = -10 * std::sqrt(2.0);
    const auto w = image_propagate(s, 256);
    CHECK_FALSE(w.warning.has_value());
    CHECK(w.separation_ratio < kSeparationThreshold);
    PropagatorSetup at = s;
    at.t = w.time;
    const auto ref = reflected_reference(at);
    CHECK(l2_distance_phase_fixed(w.wave, [&](double x, double X) { return ref(x, X); }) < 1e-6);
    const double F0 = largest_eigenvalue(kernel_params(post_collision_state(s.packets, s.masses)).spectral.w);
    CHECK(std::abs(schmidt_decompose(w.wave).top_weight() - F0) < 1e-6);
}

TEST_CASE("image propagation with equal masses") {
    PropagatorSetup s;
    s.masses = collision_params(1, 1);
    s.packets = initial_state(0.8, 1.2, 40);
    s.x0 = -12;
    const auto w = image_propagate(s, 256);
    PropagatorSetup at = s;
    at.t = w.time;
    const auto ref = reflected_reference(at);
    CHECK(l2_distance_phase_fixed(w.wave, [&](double x, double X) { return ref(x, X); }) < 1e-3);
    CHECK(schmidt_decompose(w.wave).top_weight() > 1 - 1e-8);
}

TEST_CASE("image propagation against a fixed wall") {
    // Very heavy wall with matched spreads: the particle is simply mirrored.
    PropagatorSetup s;
    s.masses = collision_params_from_fraction(1e-14);
    const double sigma = 1;
    s.packets = initial_state(sigma * std::sqrt(s.masses.delta / s.masses.gamma), sigma, 60);
    s.x0 = -10;
    const auto w = image_propagate(s, 256);
    CHECK_FALSE(w.warning.has_value());
    // Matched spreads give M Sigma^2 = m sigma^2, so the wall packet spreads
    // as much as the particle over the round trip.
    const FreePacket mirrored{s.masses.m, sigma, -s.x0, -s.packets.k};
    const FreePacket wall{s.masses.M, s.packets.Sigma, 0.0, 0.0};
    const double t = w.time;
    const auto ref = [&](double x, double X) { return wall(X, t) * mirrored(x, t); };
    // Normalized numerically so only shape and phase are compared.
    double n2 = 0;
    for (std::size_t iX = 0; iX < w.wave.X_axis.size(); ++iX)
        for (std::size_t ix = 0; ix < w.wave.x_axis.size(); ++ix)
            n2 += w.wave.X_axis.weights[iX] * w.wave.x_axis.weights[ix] *
                  std::norm(ref(w.wave.x_axis.nodes[ix], w.wave.X_axis.nodes[iX]));
    const double scale = 1 / std::sqrt(n2);
    CHECK(l2_distance_phase_fixed(w.wave, [&](double x, double X) { return scale * ref(x, X); }) < 1e-4);
}

TEST_CASE("separation warning") {
    PropagatorSetup s;
    s.masses = collision_params(1, 3);
    s.packets = initial_state(1, 1, 0.5);
    s.x0 = -10;
    const auto w = image_propagate(s, 128);
    CHECK(w.warning.has_value());
    CHECK(w.separation_ratio > kSeparationThreshold);
}

TEST_CASE("CSV dump of sampled waves") {
    PropagatorSetup s;
    s.masses = collision_params(1, 20);
    s.packets = initial_state(1, 1, 60);
    s.x0 = -15;
    const auto w = image_propagate(s, 64);
    std::ostringstream os;
    write_csv(os, w.wave);
    const std::string text = os.str();
    CHECK(text.rfind("# grid", 0) == 0);
    CHECK(text.find("iX,ix,X,x,re,im") != std::string::npos);
    const auto lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == static_cast<long>(w.wave.samples.size()) + 2);
}
