#pragma once

#include <string>
#include <vector>

namespace decoh::verify {

/// One oracle-versus-closed-form comparison.
struct Check {
    std::string name;
    double tolerance = 0.0;
    double deviation = 0.0;
    bool passed = false;
};

struct Options {
    int grid = 512; // points per axis before resolution adjustments

    // Reference state for the single-state checks.
    double m = 1.0;
    double M = 4.0;
    double Sigma = 2.0;
    double sigma = 1.0;
    double k = 1.5;

    double quadrature_tol = 1e-8;
    double schmidt_tol = 1e-6;
    double ratio_tol = 1e-4;
    double eigensolve_tol = 1e-6;
    double route_tol = 1e-8;
    double kernel_tol = 1e-8;
    double trace_tol = 1e-6;
    double propagation_tol = 1e-3;
};

/// Runs every oracle against the corresponding closed form.
std::vector<Check> run_oracle_suite(const Options& opt = {});

bool all_passed(const std::vector<Check>& checks);

} // namespace decoh::verify
