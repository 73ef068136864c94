#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli/commands.hpp"
#include "decoh/entanglement.hpp"
#include "decoh/error_analysis.hpp"
#include "decoh/errors.hpp"
#include "decoh/kinematics.hpp"
#include "decoh/oracles.hpp"
#include "decoh/thermal.hpp"
#include "decoh/verify.hpp"

namespace py = pybind11;
using namespace decoh;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Error and entanglement bounds for a particle reflecting off a dynamical wall";

    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<CollisionParams>(m, "CollisionParams")
        .def_readonly("m", &CollisionParams::m)
        .def_readonly("M", &CollisionParams::M)
        .def_readonly("total_mass", &CollisionParams::total_mass)
        .def_readonly("delta", &CollisionParams::delta)
        .def_readonly("gamma", &CollisionParams::gamma)
        .def_property_readonly("reduced_mass", &CollisionParams::reduced_mass)
        .def("__repr__", [](const CollisionParams& p) {
            std::ostringstream os;
            os << "CollisionParams(m=" << p.m << ", M=" << p.M << ", delta=" << p.delta << ")";
            return os.str();
        });
    m.def("collision_params", &collision_params, py::arg("m"), py::arg("M"));
    m.def("collision_params_from_fraction", &collision_params_from_fraction, py::arg("delta"));

    py::class_<GaussianProductState>(m, "GaussianProductState")
        .def_readonly("Sigma", &GaussianProductState::Sigma)
        .def_readonly("sigma", &GaussianProductState::sigma)
        .def_readonly("k", &GaussianProductState::k)
        .def_readonly("norm", &GaussianProductState::norm)
        .def("__call__", &GaussianProductState::operator(), py::arg("x"), py::arg("X"));
    m.def("initial_state", &initial_state, py::arg("Sigma"), py::arg("sigma"), py::arg("k") = 0.0);

    py::class_<PostCollisionState>(m, "PostCollisionState")
        .def_readonly("Omega", &PostCollisionState::Omega)
        .def_readonly("omega", &PostCollisionState::omega)
        .def_readonly("delta", &PostCollisionState::delta)
        .def_readonly("gamma", &PostCollisionState::gamma)
        .def_readonly("k", &PostCollisionState::k)
        .def("std_x", &PostCollisionState::std_x)
        .def("std_X", &PostCollisionState::std_X)
        .def("__call__", &PostCollisionState::operator(), py::arg("x"), py::arg("X"));
    m.def("post_collision_state", &post_collision_state, py::arg("state"), py::arg("masses"));

    py::enum_<Regime>(m, "Regime")
        .value("small_k_sigma", Regime::small_k_sigma)
        .value("crossover", Regime::crossover)
        .value("large_k_sigma", Regime::large_k_sigma);

    py::class_<Optimum>(m, "Optimum")
        .def_readonly("lambda_max", &Optimum::lambda_max)
        .def_readonly("A_max", &Optimum::A_max)
        .def_readonly("one_minus_A", &Optimum::one_minus_A)
        .def_readonly("regime", &Optimum::regime);
    py::class_<AsymptoticError>(m, "AsymptoticError")
        .def_readonly("lambda_max", &AsymptoticError::lambda_max)
        .def_readonly("one_minus_A", &AsymptoticError::one_minus_A);

    m.def("overlap_amplitude", &overlap_amplitude, py::arg("lambda_"), py::arg("k_sigma"), py::arg("masses"));
    m.def("overlap_defect", &overlap_defect, py::arg("lambda_"), py::arg("k_sigma"), py::arg("masses"));
    m.def("optimal_lambda", &optimal_lambda, py::arg("k_sigma"), py::arg("masses"));
    m.def("error_asymptotic", &error_asymptotic, py::arg("k_sigma"), py::arg("delta"), py::arg("regime"));
    m.def("mismatch_penalty", &mismatch_penalty, py::arg("y"), py::arg("k_sigma"));

    py::class_<SpectralParams>(m, "SpectralParams")
        .def_readonly("w", &SpectralParams::w)
        .def_readonly("u", &SpectralParams::u)
        .def_readonly("z", &SpectralParams::z)
        .def_readonly("matched", &SpectralParams::matched);
    py::class_<KernelParams>(m, "KernelParams")
        .def_readonly("D", &KernelParams::D)
        .def_readonly("rho", &KernelParams::rho)
        .def_readonly("spectral", &KernelParams::spectral);
    py::class_<EntanglementReport>(m, "EntanglementReport")
        .def_readonly("kernel", &EntanglementReport::kernel)
        .def_readonly("F0", &EntanglementReport::F0)
        .def_readonly("measure", &EntanglementReport::measure)
        .def_readonly("spectrum", &EntanglementReport::spectrum_prefix)
        .def_readonly("tail_bound", &EntanglementReport::tail_bound);

    m.def("spectral_params", &spectral_params, py::arg("w"));
    m.def("largest_eigenvalue", &largest_eigenvalue, py::arg("w"));
    m.def("spectrum", &spectrum, py::arg("w"), py::arg("n"));
    m.def("kernel_params", &kernel_params, py::arg("state"));
    m.def("entanglement_report", &entanglement_report, py::arg("state"), py::arg("n") = 64);
    m.def("optimal_spreads", &optimal_spreads, py::arg("sigma"), py::arg("masses"));

    m.def(
        "schmidt_weights",
        [](const PostCollisionState& s, int n) {
            const auto r = oracles::schmidt_decompose(s, oracles::grid_for(s, n));
            std::vector<double> w;
            for (double v : r.singular_values)
                w.push_back(v * v);
            return w;
        },
        py::arg("state"), py::arg("n") = 256, "Squared Schmidt coefficients from the sampled outgoing state.");

    auto th = m.def_submodule("thermal", "SI-unit packet design");
    th.attr("hbar") = thermal::hbar;
    th.attr("boltzmann") = thermal::boltzmann;
    th.attr("speed_of_light") = thermal::speed_of_light;
    th.attr("electron_mass") = thermal::electron_mass;
    th.def("thermal_spread", &thermal::thermal_spread, py::arg("mu"), py::arg("T"));
    th.def("thermal_length", &thermal::thermal_length, py::arg("T"));
    th.def("compton_wavelength", &thermal::compton_wavelength, py::arg("mu"));
    th.def("thermal_k_sigma", &thermal::thermal_k_sigma, py::arg("mu"), py::arg("T"));
    th.def(
        "amplitude",
        [](double F0, int n) { return thermal::amplitude_budget(F0, n).amplitude; }, py::arg("F0"), py::arg("n"));
    th.def("backaction_ratio", &thermal::backaction_ratio, py::arg("m"), py::arg("M"));

    m.def(
        "verify",
        [](int grid) {
            verify::Options o;
            o.grid = grid;
            py::list out;
            for (const auto& c : verify::run_oracle_suite(o)) {
                py::dict d;
                d["name"] = c.name;
                d["tolerance"] = c.tolerance;
                d["deviation"] = c.deviation;
                d["passed"] = c.passed;
                out.append(d);
            }
            return out;
        },
        py::arg("grid") = 512);

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "decoh");
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
