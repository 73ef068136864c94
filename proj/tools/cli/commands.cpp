#include "cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cli/output.hpp"
#include "cli/sweep.hpp"
#include "decoh/entanglement.hpp"
#include "decoh/error_analysis.hpp"
#include "decoh/errors.hpp"
#include "decoh/kinematics.hpp"
#include "decoh/oracles.hpp"
#include "decoh/thermal.hpp"
#include "decoh/verify.hpp"

namespace decoh::cli {

namespace {

const std::set<std::string> kSubcommands = {"error", "entangle", "sweep", "verify", "thermal"};
const std::set<std::string> kFlagKeys = {"oracle", "report-length-scale", "verbose"};

class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& what, const CLI::App* sub) : std::runtime_error(what), sub_(sub) {}
    const CLI::App* sub() const { return sub_; }

private:
    const CLI::App* sub_;
};

struct Options {
    std::optional<double> m, M, sigma, k, lambda, ksigma, delta;
    std::optional<std::string> Sigma;
    int grid = 512;
    std::string format = "csv";
    std::string out_path;
    std::string config_path;
    int verbosity = 0;

    bool oracle = false;
    int n = 8;

    SweepSpec sweep;
    std::string scale = "linear";

    std::optional<double> quad_tol, schmidt_tol;

    std::optional<double> mu_kg, T, F0;
    std::optional<int> collisions;
    bool report_length_scale = false;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--m", o.m, "particle mass (model units)");
    sub->add_option("--M", o.M, "wall mass (model units)");
    sub->add_option("--sigma", o.sigma, "particle spread");
    sub->add_option("--Sigma", o.Sigma, "wall spread, or 'auto' for the matched value");
    sub->add_option("--k", o.k, "particle wavenumber");
    sub->add_option("--lambda", o.lambda, "spread ratio Sigma^2/sigma^2");
    sub->add_option("--ksigma", o.ksigma, "dimensionless k sigma");
    sub->add_option("--delta", o.delta, "mass fraction m/(M+m)");
    sub->add_option("--grid", o.grid, "oracle grid points per axis")->check(CLI::Range(64, 1 << 14));
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out_path, "output file (default stdout)");
    sub->add_option("--config", o.config_path, "key=value configuration file; flags override it");
    sub->add_flag("-v,--verbose", o.verbosity, "verbosity");
}

std::string missing_list(const std::vector<std::pair<const char*, bool>>& flags) {
    std::string s;
    for (const auto& [name, present] : flags)
        if (!present)
            s += (s.empty() ? "" : ", ") + std::string(name);
    return s;
}

CollisionParams resolve_masses(const Options& o, const CLI::App* sub) {
    if (o.m && o.M)
        return collision_params(*o.m, *o.M);
    if (o.delta)
        return collision_params_from_fraction(*o.delta);
    throw UsageError("missing required flags: --m and --M, or --delta", sub);
}

double resolve_Sigma(const Options& o, const CollisionParams& p) {
    if (*o.Sigma == "auto")
        return optimal_spreads(*o.sigma, p);
    const Cell c = parse_cell(*o.Sigma);
    if (!std::holds_alternative<double>(c))
        throw DomainError("--Sigma must be a number or 'auto', got '" + *o.Sigma + "'");
    return std::get<double>(c);
}

std::string grid_comment(const oracles::GridSpec& g) {
    return "grid x=[" + format_number(g.x_min) + "," + format_number(g.x_max) + "] nx=" + std::to_string(g.nx) +
           " X=[" + format_number(g.X_min) + "," + format_number(g.X_max) + "] nX=" + std::to_string(g.nX);
}

Cell boolean(bool b) { return std::string(b ? "true" : "false"); }

// ---- subcommands ----

Report cmd_error(const Options& o, const CLI::App* sub) {
    Report r;
    r.command = "error";
    double lambda = 0.0, k_sigma = 0.0;
    CollisionParams p;
    std::optional<GaussianProductState> state;
    if (o.lambda || o.ksigma) {
        if (!o.lambda || !o.ksigma || !(o.delta || (o.m && o.M)))
            throw UsageError("missing required flags: " +
                                 missing_list({{"--lambda", o.lambda.has_value()},
                                               {"--ksigma", o.ksigma.has_value()},
                                               {"--delta (or --m/--M)", o.delta || (o.m && o.M)}}),
                             sub);
        p = resolve_masses(o, sub);
        lambda = *o.lambda;
        k_sigma = *o.ksigma;
        if (!(lambda > 0.0))
            throw DomainError("--lambda must be positive");
        r.add_param("lambda", lambda);
        r.add_param("k_sigma", k_sigma);
        r.add_param("delta", p.delta);
        if (o.oracle)
            state = initial_state(std::sqrt(lambda), 1.0, k_sigma);
    } else {
        if (!(o.m && o.M && o.sigma && o.Sigma))
            throw UsageError("missing required flags: " + missing_list({{"--m", o.m.has_value()},
                                                                          {"--M", o.M.has_value()},
                                                                          {"--sigma", o.sigma.has_value()},
                                                                          {"--Sigma", o.Sigma.has_value()}}),
                             sub);
        p = collision_params(*o.m, *o.M);
        const double k = o.k.value_or(0.0);
        state = initial_state(resolve_Sigma(o, p), *o.sigma, k);
        lambda = state->Sigma * state->Sigma / (state->sigma * state->sigma);
        k_sigma = k * state->sigma;
        r.add_param("m", p.m);
        r.add_param("M", p.M);
        r.add_param("sigma", state->sigma);
        r.add_param("Sigma", state->Sigma);
        r.add_param("k", k);
    }
    if (k_sigma < 0.0)
        throw DomainError("k sigma must be non-negative");

    const ErrorReport e = error_report(lambda, k_sigma, p);
    const Optimum opt = optimal_lambda(k_sigma, p);
    r.columns = {"lambda", "k_sigma", "delta", "A", "one_minus_A", "lambda_max", "A_max", "one_minus_A_max", "regime"};
    r.rows.push_back({e.lambda, e.k_sigma, e.delta, e.A, e.one_minus_A, opt.lambda_max, opt.A_max, opt.one_minus_A,
                      std::string(to_string(opt.regime))});

    if (o.oracle && state) {
        const oracles::GridSpec g = oracles::grid_for_overlap(*state, p, o.grid);
        const auto ov = oracles::quadrature_overlap(ideal_reflected_state(*state), post_collision_state(*state, p), g,
                                                    state->k, 2.0 * p.gamma * state->k);
        const double dev = std::abs(std::abs(ov.value) - e.A);
        r.checks.push_back({"quadrature_overlap_vs_closed_form", 1e-8, dev, dev <= 1e-8});
        r.metadata.push_back(grid_comment(g));
    }
    return r;
}

Report cmd_entangle(const Options& o, const CLI::App* sub) {
    if (!(o.sigma && o.Sigma))
        throw UsageError("missing required flags: " + missing_list({{"--sigma", o.sigma.has_value()},
                                                                      {"--Sigma", o.Sigma.has_value()}}),
                         sub);
    if (o.n < 1)
        throw DomainError("--n must be at least 1");
    const CollisionParams p = resolve_masses(o, sub);
    const GaussianProductState in = initial_state(resolve_Sigma(o, p), *o.sigma, o.k.value_or(0.0));
    const PostCollisionState f = post_collision_state(in, p);
    const EntanglementReport e = entanglement_report(f, o.n);

    Report r;
    r.command = "entangle";
    r.add_param("m", p.m);
    r.add_param("M", p.M);
    r.add_param("sigma", in.sigma);
    r.add_param("Sigma", in.Sigma);
    r.add_param("k", in.k);
    r.add_param("n", static_cast<double>(o.n));
    r.columns = {"D", "rho", "w", "u", "z", "F0", "measure", "matched", "tail_bound"};
    const SpectralParams& sp = e.kernel.spectral;
    std::vector<Cell> row = {e.kernel.D, e.kernel.rho, sp.w, sp.u, sp.z, e.F0, e.measure, boolean(sp.matched),
                             e.tail_bound};
    for (int i = 0; i < o.n; ++i) {
        r.columns.push_back("F_" + std::to_string(i));
        row.emplace_back(e.spectrum_prefix[static_cast<std::size_t>(i)]);
    }
    r.rows.push_back(std::move(row));

    if (o.oracle) {
        const oracles::GridSpec g = oracles::grid_for(f, o.grid);
        const double dev = std::abs(oracles::schmidt_decompose(f, g).top_weight() - e.F0);
        r.checks.push_back({"schmidt_top_weight_vs_F0", 1e-6, dev, dev <= 1e-6});
        r.metadata.push_back(grid_comment(g));
    }
    return r;
}

Report cmd_sweep(Options o, const CLI::App* sub) {
    SweepSpec spec = o.sweep;
    spec.scale = o.scale == "log" ? SweepScale::log : SweepScale::linear;
    const std::vector<double> xs = spec.values();

    CollisionParams p = collision_params_from_fraction(0.01);
    if ((o.m && o.M) || o.delta)
        p = resolve_masses(o, sub);
    const double k_sigma = o.ksigma.value_or(spec.parameter == "delta" ? 1.0 : 0.0);
    const double mu = o.mu_kg.value_or(thermal::electron_mass);

    Report r;
    r.command = "sweep";
    r.add_param("parameter", spec.parameter);
    r.add_param("start", spec.start);
    r.add_param("stop", spec.stop);
    r.add_param("points", static_cast<double>(spec.points));
    r.add_param("scale", o.scale);

    std::function<std::vector<Cell>(std::size_t)> row;
    if (spec.parameter == "lambda") {
        r.add_param("k_sigma", k_sigma);
        r.add_param("delta", p.delta);
        r.columns = {"lambda", "k_sigma", "delta", "A", "one_minus_A", "F0", "measure"};
        row = [&](std::size_t i) -> std::vector<Cell> {
            const double lambda = xs[i];
            const ErrorReport e = error_report(lambda, k_sigma, p);
            const PostCollisionState f = post_collision_state(initial_state(std::sqrt(lambda), 1.0, 0.0), p);
            const EntanglementReport en = entanglement_report(f, 1);
            return {lambda, k_sigma, p.delta, e.A, e.one_minus_A, en.F0, en.measure};
        };
    } else if (spec.parameter == "k_sigma") {
        r.add_param("delta", p.delta);
        r.columns = {"k_sigma", "delta", "lambda_max", "A_max", "one_minus_A", "small_asymptote", "large_asymptote",
                     "regime"};
        row = [&](std::size_t i) -> std::vector<Cell> {
            const double ks = xs[i];
            if (ks < 0.0)
                throw DomainError("k sigma must be non-negative");
            const Optimum opt = optimal_lambda(ks, p);
            const double small = error_asymptotic(ks, p.delta, Regime::small_k_sigma).one_minus_A;
            const double large = ks > 0.0 ? error_asymptotic(ks, p.delta, Regime::large_k_sigma).one_minus_A : 0.0;
            return {ks, p.delta, opt.lambda_max, opt.A_max, opt.one_minus_A, small, large,
                    std::string(to_string(opt.regime))};
        };
    } else if (spec.parameter == "delta") {
        r.add_param("k_sigma", k_sigma);
        r.columns = {"delta", "k_sigma", "lambda_max", "one_minus_A", "one_minus_A_over_delta", "matched_Sigma_over_sigma"};
        row = [&](std::size_t i) -> std::vector<Cell> {
            const CollisionParams q = collision_params_from_fraction(xs[i]);
            const Optimum opt = optimal_lambda(k_sigma, q);
            return {q.delta, k_sigma, opt.lambda_max, opt.one_minus_A, opt.one_minus_A / q.delta,
                    optimal_spreads(1.0, q)};
        };
    } else if (spec.parameter == "w") {
        r.columns = {"w", "u", "z", "F0", "measure"};
        row = [&](std::size_t i) -> std::vector<Cell> {
            const SpectralParams sp = spectral_params(xs[i]);
            const double F0 = largest_eigenvalue(xs[i]);
            return {sp.w, sp.u, sp.z, F0, 1.0 - F0};
        };
    } else {
        r.add_param("mu_kg", mu);
        r.columns = {"T", "mu", "sigma_mu", "compton_wavelength", "thermal_length", "k_sigma"};
        row = [&](std::size_t i) -> std::vector<Cell> {
            const thermal::ThermalDesign d = thermal::thermal_design(mu, xs[i]);
            return {d.T, d.mu, d.sigma_mu, d.compton_wavelength, d.thermal_length, d.k_sigma_est};
        };
    }
    r.rows = parallel_rows(xs.size(), sweep_threads(), row);
    return r;
}

Report cmd_verify(const Options& o, std::ostream& err) {
    verify::Options v;
    v.grid = o.grid;
    if (o.m)
        v.m = *o.m;
    if (o.M)
        v.M = *o.M;
    if (o.sigma)
        v.sigma = *o.sigma;
    if (o.Sigma) {
        const Cell c = parse_cell(*o.Sigma);
        if (!std::holds_alternative<double>(c))
            throw DomainError("verify takes a numeric --Sigma");
        v.Sigma = std::get<double>(c);
    }
    if (o.k)
        v.k = *o.k;
    if (o.quad_tol)
        v.quadrature_tol = *o.quad_tol;
    if (o.schmidt_tol)
        v.schmidt_tol = *o.schmidt_tol;

    Report r;
    r.command = "verify";
    r.add_param("grid", static_cast<double>(v.grid));
    r.add_param("m", v.m);
    r.add_param("M", v.M);
    r.add_param("sigma", v.sigma);
    r.add_param("Sigma", v.Sigma);
    r.add_param("k", v.k);
    r.checks = verify::run_oracle_suite(v);
    r.columns = {"check", "tolerance", "deviation", "passed"};
    for (const auto& c : r.checks) {
        r.rows.push_back({c.name, c.tolerance, c.deviation, boolean(c.passed)});
        if (o.verbosity > 0)
            err << (c.passed ? "pass " : "FAIL ") << c.name << " deviation=" << format_number(c.deviation)
                << " tolerance=" << format_number(c.tolerance) << '\n';
    }
    return r;
}

Report cmd_thermal(const Options& o, const CLI::App* sub) {
    Report r;
    r.command = "thermal";
    bool any = false;
    if (o.mu_kg) {
        if (!o.T)
            throw UsageError("missing required flag: --T", sub);
        const thermal::ThermalDesign d = thermal::thermal_design(*o.mu_kg, *o.T);
        r.add_param("mu_kg", d.mu);
        r.add_param("T", d.T);
        r.columns = {"sigma_mu", "compton_wavelength", "thermal_length", "geometric_mean", "k_sigma"};
        r.rows.push_back({d.sigma_mu, d.compton_wavelength, d.thermal_length,
                          std::sqrt(d.compton_wavelength * d.thermal_length), d.k_sigma_est});
        any = true;
    }
    if (r.rows.empty())
        r.rows.emplace_back();
    auto& row = r.rows.front();
    auto add = [&](const std::string& col, Cell v) {
        r.columns.push_back(col);
        row.push_back(std::move(v));
    };
    if (o.report_length_scale) {
        if (!o.T)
            throw UsageError("missing required flag: --T", sub);
        if (!o.mu_kg)
            r.add_param("T", *o.T);
        const double L = thermal::thermal_length(*o.T);
        add("thermal_length_m", L);
        add("thermal_length_cm", 100.0 * L);
        any = true;
    }
    if ((o.m && o.M) || o.delta) {
        const CollisionParams p = resolve_masses(o, sub);
        const double ks = o.mu_kg ? thermal::thermal_k_sigma(*o.mu_kg, *o.T) : 1.0;
        const Optimum opt = optimal_lambda(ks, p);
        r.add_param("delta", p.delta);
        add("one_minus_A_per_collision", opt.one_minus_A);
        add("one_minus_A_over_delta", opt.one_minus_A / p.delta);
        add("backaction_ratio", thermal::backaction_ratio(p.m, p.M));
        any = true;
    }
    if (o.collisions || o.F0) {
        if (!(o.collisions && o.F0))
            throw UsageError("--collisions and --F0 must be given together", sub);
        const thermal::CollisionBudget b = thermal::amplitude_budget(*o.F0, *o.collisions);
        r.add_param("collisions", static_cast<double>(*o.collisions));
        r.add_param("F0", *o.F0);
        add("amplitude", b.amplitude);
        add("collisions_to_half", b.collisions_to_half);
        any = true;
    }
    if (!any)
        throw UsageError("nothing to report: give --mu-kg with --T, --report-length-scale, or --collisions with --F0",
                         sub);
    return r;
}

} // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& argv) {
    std::vector<std::string> args;
    std::string path;
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (argv[i] == "--config") {
            if (i + 1 >= argv.size())
                throw ConfigError("--config needs a path");
            path = argv[++i];
        } else if (argv[i].rfind("--config=", 0) == 0) {
            path = argv[i].substr(9);
        } else {
            args.push_back(argv[i]);
        }
    }
    if (path.empty())
        return args;

    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::vector<std::string> injected;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (kFlagKeys.count(key)) {
            if (value == "true" || value == "1")
                injected.push_back("--" + key);
            continue;
        }
        injected.push_back("--" + key);
        injected.push_back(value);
    }
    auto pos = args.begin();
    for (auto it = args.begin() + (args.empty() ? 0 : 1); it != args.end(); ++it)
        if (kSubcommands.count(*it)) {
            pos = it + 1;
            break;
        }
    if (pos == args.begin())
        pos = args.empty() ? args.end() : args.begin() + 1;
    args.insert(pos, injected.begin(), injected.end());
    return args;
}

int run(const std::vector<std::string>& argv_in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Error and entanglement of a particle reflecting off a movable wall", "decoh"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Options o;
    CLI::App* error = app.add_subcommand("error", "overlap A with the fixed-wall reflection and its optimum");
    CLI::App* entangle = app.add_subcommand("entangle", "reduced-kernel spectrum and entanglement measure");
    CLI::App* sweep = app.add_subcommand("sweep", "tabulate derived quantities over one parameter");
    CLI::App* verify = app.add_subcommand("verify", "run every numerical oracle against the closed forms");
    CLI::App* thermal = app.add_subcommand("thermal", "thermal packet sizes and collision budgets (SI units)");
    for (CLI::App* sub : {error, entangle, sweep, verify, thermal})
        add_common(sub, o);

    error->add_flag("--oracle", o.oracle, "also evaluate the overlap by quadrature");
    entangle->add_flag("--oracle", o.oracle, "also run the Schmidt oracle");
    entangle->add_option("--n", o.n, "spectrum entries to report");

    sweep->add_option("--param", o.sweep.parameter, "lambda | k_sigma | delta | w | T")->required();
    sweep->add_option("--start", o.sweep.start, "range start")->required();
    sweep->add_option("--stop", o.sweep.stop, "range stop")->required();
    sweep->add_option("--points", o.sweep.points, "number of points (>= 2)")->required();
    sweep->add_option("--scale", o.scale, "linear | log")->check(CLI::IsMember({"linear", "log"}));
    sweep->add_option("--mu-kg", o.mu_kg, "mass for T sweeps (kg)");

    verify->add_option("--quad-tol", o.quad_tol, "override the quadrature tolerance");
    verify->add_option("--schmidt-tol", o.schmidt_tol, "override the Schmidt tolerance");

    thermal->add_option("--mu-kg", o.mu_kg, "mass (kg)");
    thermal->add_option("--T", o.T, "temperature (K)");
    thermal->add_flag("--report-length-scale", o.report_length_scale, "report hbar c / k_B T");
    thermal->add_option("--collisions", o.collisions, "number of independent collisions");
    thermal->add_option("--F0", o.F0, "largest eigenvalue per collision");

    CLI::App* active = nullptr;
    try {
        std::vector<std::string> args = expand_config(argv_in);
        std::vector<char*> cargs;
        for (auto& a : args)
            cargs.push_back(a.data());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
        for (CLI::App* sub : {error, entangle, sweep, verify, thermal})
            if (sub->parsed())
                active = sub;

        Report report;
        if (active == error)
            report = cmd_error(o, error);
        else if (active == entangle)
            report = cmd_entangle(o, entangle);
        else if (active == sweep)
            report = cmd_sweep(o, sweep);
        else if (active == verify)
            report = cmd_verify(o, err);
        else
            report = cmd_thermal(o, thermal);

        const Format fmt = o.format == "json" ? Format::json : Format::csv;
        if (o.out_path.empty()) {
            write_report(out, report, fmt);
        } else {
            std::ofstream file(o.out_path);
            if (!file)
                throw ConfigError("cannot write '" + o.out_path + "'");
            write_report(file, report, fmt);
        }
        if (active == verify && !verify::all_passed(report.checks))
            return kExitVerificationFailed;
        return kExitOk;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "decoh: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "decoh: " << e.what() << "\n\n" << e.sub()->help();
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "decoh: invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "decoh: configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "decoh: numerical failure: " << e.what() << '\n';
        return kExitVerificationFailed;
    }
}

} // namespace decoh::cli
