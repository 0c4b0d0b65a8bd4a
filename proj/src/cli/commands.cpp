#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "cli/csv.hpp"
#include "cli/manifest.hpp"
#include "fracmech/integrate.hpp"
#include "fracmech/oscillator.hpp"
#include "fracmech/similarity.hpp"

#ifndef FRACMECH_VERSION
#define FRACMECH_VERSION "unknown"
#endif

namespace fracmech::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool is_set(double x) { return !std::isnan(x); }

struct Flags {
    double alpha = kUnset;
    double d_alpha = kUnset;
    double mass = kUnset;
    double strength = kUnset;
    double degree = kUnset;
    double energy = kUnset;

    std::string q0;
    std::string p0;
    std::string qdot0;
    double t0 = 0.0;
    double t1 = kUnset;

    double rtol = IntegratorConfig{}.rel_tol;
    double atol = IntegratorConfig{}.abs_tol;
    std::size_t max_steps = IntegratorConfig{}.max_steps;
    double check_tol = 1e-4;
    std::size_t samples = 256;
    std::size_t jobs = 0;

    std::string alphas = "1.1,1.25,1.5,1.75,2";
    std::string betas = "1.1,1.25,1.5,1.75,2";
    std::string energies = "0.5,1,2,10";
    std::string rho = "1,2,4,8";

    std::string out = "-";
    std::string manifest;
    std::string summary;
    std::string config;
};

using Echo = std::vector<std::pair<std::string, std::string>>;

struct CommandResult {
    std::string data;
    std::optional<std::string> summary;
    int code = kOk;
    std::string failure;  // message for a failed tolerance check
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto first = item.find_first_not_of(" \t\"");
        const auto last = item.find_last_not_of(" \t\"");
        if (first == std::string::npos) throw UsageError("--" + flag + ": empty list entry");
        const char* b = item.data() + first;
        const char* e = item.data() + last + 1;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || ptr != e) throw UsageError("--" + flag + ": not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--" + flag + " needs at least one value");
    return out;
}

Vec to_vec(const std::vector<double>& xs, const std::string& flag) {
    if (xs.empty() || xs.size() > Vec::kMaxDim) throw UsageError("--" + flag + " takes 1 to 3 components");
    Vec v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = xs[i];
    return v;
}

std::vector<double> from_vec(const Vec& v) { return {v.begin(), v.end()}; }

std::string fmt(double x) { return format_double(x); }

FractionalParams resolve_params(const Flags& f) {
    if (is_set(f.mass)) {
        if (is_set(f.alpha) && f.alpha != 2.0) throw UsageError("--mass implies --alpha 2");
        if (is_set(f.d_alpha)) throw UsageError("--mass and --d-alpha are mutually exclusive");
        return FractionalParams::from_mass(f.mass);
    }
    if (!is_set(f.alpha)) throw UsageError("--alpha (or --mass) is required");
    return FractionalParams(f.alpha, is_set(f.d_alpha) ? f.d_alpha : 1.0);
}

IntegratorConfig integrator_config(const Flags& f) {
    IntegratorConfig cfg;
    cfg.rel_tol = f.rtol;
    cfg.abs_tol = f.atol;
    cfg.max_steps = f.max_steps;
    cfg.validate();
    return cfg;
}

std::optional<InitialConditions> initial_conditions(const Flags& f, bool required) {
    if (f.q0.empty()) {
        if (required) throw UsageError("--q0 is required");
        if (!f.p0.empty() || !f.qdot0.empty()) throw UsageError("--p0/--qdot0 need --q0");
        return std::nullopt;
    }
    if (!f.p0.empty() && !f.qdot0.empty()) throw UsageError("--p0 and --qdot0 are mutually exclusive");
    if (f.p0.empty() && f.qdot0.empty()) throw UsageError("--p0 or --qdot0 is required with --q0");
    const Vec q0 = to_vec(parse_list(f.q0, "q0"), "q0");
    if (!f.p0.empty()) return InitialConditions::with_momentum(q0, to_vec(parse_list(f.p0, "p0"), "p0"));
    return InitialConditions::with_velocity(q0, to_vec(parse_list(f.qdot0, "qdot0"), "qdot0"));
}

void echo_params(Echo& e, const FractionalParams& p) {
    e.emplace_back("alpha", fmt(p.alpha()));
    e.emplace_back("d-alpha", fmt(p.d_alpha()));
}

void echo_potential(Echo& e, const PowerLawPotential& pot) {
    e.emplace_back("strength", fmt(pot.strength()));
    e.emplace_back("degree", fmt(pot.degree()));
}

void echo_integrator(Echo& e, RunManifest& m, const Flags& f) {
    e.emplace_back("rtol", fmt(f.rtol));
    e.emplace_back("atol", fmt(f.atol));
    e.emplace_back("max-steps", std::to_string(f.max_steps));
    m.tolerances["rtol"] = f.rtol;
    m.tolerances["atol"] = f.atol;
}

void echo_check(Echo& e, RunManifest& m, const Flags& f) {
    e.emplace_back("check-tol", fmt(f.check_tol));
    m.tolerances["check_tol"] = f.check_tol;
}

/// Runs body(i) for i in [0, n) on up to `jobs` threads. An exception from
/// the lowest failing index is rethrown once every index has finished, so
/// the outcome does not depend on scheduling.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        }));
    }
    for (auto& w : workers) w.get();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// ---------------------------------------------------------------- simulate

CommandResult cmd_simulate(const Flags& f, RunManifest& m) {
    const FractionalParams params = resolve_params(f);
    if (!is_set(f.strength) || !is_set(f.degree)) {
        throw UsageError("simulate needs --strength (or --g2) and --degree (or --beta)");
    }
    const PowerLawPotential pot(f.strength, f.degree);
    const InitialConditions ic = *initial_conditions(f, true);
    if (!is_set(f.t1)) throw UsageError("--t1 is required");
    const IntegratorConfig cfg = integrator_config(f);

    Echo& e = m.parameters;
    echo_params(e, params);
    echo_potential(e, pot);
    e.emplace_back("q0", format_list(from_vec(ic.q0)));
    if (ic.p0) e.emplace_back("p0", format_list(from_vec(*ic.p0)));
    if (ic.qdot0) e.emplace_back("qdot0", format_list(from_vec(*ic.qdot0)));
    e.emplace_back("t0", fmt(f.t0));
    e.emplace_back("t1", fmt(f.t1));
    echo_integrator(e, m, f);

    const IntegrationResult run = integrate(params, pot, ic, f.t0, f.t1, cfg);
    const Trajectory& tr = run.trajectory;
    const std::size_t dim = ic.dim();

    std::vector<std::string> columns{"t"};
    for (std::size_t i = 1; i <= dim; ++i) columns.push_back("q" + std::to_string(i));
    for (std::size_t i = 1; i <= dim; ++i) columns.push_back("p" + std::to_string(i));
    columns.emplace_back("energy");
    columns.emplace_back("energy_drift_rel");

    std::ostringstream os;
    CsvWriter csv(os, columns);
    std::vector<double> row;
    for (std::size_t k = 0; k < tr.samples().size(); ++k) {
        const auto& s = tr.samples()[k];
        row.assign({s.state.t});
        row.insert(row.end(), s.state.q.begin(), s.state.q.end());
        row.insert(row.end(), s.state.p.begin(), s.state.p.end());
        row.push_back(s.energy);
        row.push_back(tr.energy_drift(k));
        csv.row(row);
    }

    m.results = {
        {"accepted_steps", tr.accepted_steps()},
        {"rejected_steps", tr.rejected_steps()},
        {"events", run.events.size()},
        {"max_energy_drift_rel", run.max_energy_drift},
    };
    return {os.str(), std::nullopt, kOk, {}};
}

// ------------------------------------------------------------------ period

oscillator::OscillatorSpec oscillator_spec(const Flags& f, const FractionalParams& params) {
    if (!is_set(f.degree)) throw UsageError("--beta (or --degree) is required");
    const PowerLawPotential pot(is_set(f.strength) ? f.strength : 1.0, f.degree);
    return {params, pot, is_set(f.energy) ? f.energy : 1.0};
}

void echo_oscillator(Echo& e, const oscillator::OscillatorSpec& spec) {
    echo_params(e, spec.params());
    e.emplace_back("g2", fmt(spec.g2()));
    e.emplace_back("beta", fmt(spec.beta()));
    e.emplace_back("energy", fmt(spec.energy()));
}

nlohmann::json nullable(const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

CommandResult cmd_period(const Flags& f, RunManifest& m) {
    const oscillator::OscillatorSpec spec = oscillator_spec(f, resolve_params(f));
    const IntegratorConfig cfg = integrator_config(f);
    Echo& e = m.parameters;
    echo_oscillator(e, spec);
    echo_integrator(e, m, f);
    echo_check(e, m, f);

    const oscillator::PeriodReport r = oscillator::period_report(spec, cfg);
    const nlohmann::json j = {
        {"alpha", spec.alpha()},
        {"beta", spec.beta()},
        {"energy", spec.energy()},
        {"closed_form", r.closed_form},
        {"quadrature", r.quadrature},
        {"ode_measured", nullable(r.ode_measured)},
        {"max_pairwise_rel_diff", r.max_pairwise_rel_diff},
        {"check_tol", f.check_tol},
        {"consistent", r.consistent(f.check_tol)},
    };
    m.results = j;

    CommandResult out{j.dump(2) + "\n", std::nullopt, kOk, {}};
    if (!r.consistent(f.check_tol)) {
        out.code = kNumeric;
        out.failure = "period routes disagree by " + fmt(r.max_pairwise_rel_diff) + " > --check-tol " +
                      fmt(f.check_tol);
    }
    return out;
}

// ---------------------------------------------------------------------- hj

CommandResult cmd_hj(const Flags& f, RunManifest& m) {
    const oscillator::OscillatorSpec spec = oscillator_spec(f, resolve_params(f));
    if (f.samples == 0) throw UsageError("--samples must be at least 1");
    const IntegratorConfig cfg = integrator_config(f);
    Echo& e = m.parameters;
    echo_oscillator(e, spec);
    e.emplace_back("samples", std::to_string(f.samples));
    echo_integrator(e, m, f);
    echo_check(e, m, f);

    const double T = oscillator::period(spec);
    const double q_turn = spec.turning_point();
    const IntegrationResult run =
        integrate(spec.params(), spec.pot(), InitialConditions::with_momentum(Vec{0.0}, Vec{spec.max_momentum()}),
                  0.0, T, cfg);

    std::ostringstream os;
    CsvWriter csv(os, {"t", "q_hj", "q_ode", "abs_diff"});
    double worst = 0.0;
    const std::size_t n = f.samples;
    for (std::size_t k = 0; k < n; ++k) {
        double t = 0.0;
        if (n > 1) t = k + 1 == n ? T : T * static_cast<double>(k) / static_cast<double>(n - 1);
        const double q_hj = oscillator::hj_trajectory(spec, t);
        const double q_ode = run.trajectory.state_at(t).q[0];
        const double diff = std::abs(q_hj - q_ode);
        worst = std::max(worst, diff);
        const double row[] = {t, q_hj, q_ode, diff};
        csv.row(row);
    }

    const double worst_rel = worst / q_turn;
    m.results = {
        {"period", T},
        {"q_turn", q_turn},
        {"max_abs_diff", worst},
        {"max_abs_diff_over_q_turn", worst_rel},
    };
    CommandResult out{os.str(), std::nullopt, kOk, {}};
    if (worst_rel > f.check_tol) {
        out.code = kNumeric;
        out.failure = "HJ and ODE trajectories differ by " + fmt(worst_rel) + " of the amplitude > --check-tol " +
                      fmt(f.check_tol);
    }
    return out;
}

// ------------------------------------------------------------------- sweep

CommandResult cmd_sweep(const Flags& f, RunManifest& m) {
    if (is_set(f.mass) || is_set(f.alpha) || is_set(f.degree) || is_set(f.energy)) {
        throw UsageError("sweep takes --alphas, --betas and --energies lists");
    }
    const std::vector<double> alphas = parse_list(f.alphas, "alphas");
    const std::vector<double> betas = parse_list(f.betas, "betas");
    const std::vector<double> energies = parse_list(f.energies, "energies");
    const double d_alpha = is_set(f.d_alpha) ? f.d_alpha : 1.0;
    const double g2 = is_set(f.strength) ? f.strength : 1.0;
    const IntegratorConfig cfg = integrator_config(f);

    // Every grid point is validated before any work starts.
    std::vector<oscillator::OscillatorSpec> grid;
    for (double a : alphas) {
        for (double b : betas) {
            for (double en : energies) grid.emplace_back(FractionalParams(a, d_alpha), PowerLawPotential(g2, b), en);
        }
    }

    Echo& e = m.parameters;
    e.emplace_back("alphas", format_list(alphas));
    e.emplace_back("betas", format_list(betas));
    e.emplace_back("energies", format_list(energies));
    e.emplace_back("d-alpha", fmt(d_alpha));
    e.emplace_back("g2", fmt(g2));
    echo_integrator(e, m, f);
    echo_check(e, m, f);

    std::vector<oscillator::PeriodReport> reports(grid.size());
    parallel_for(grid.size(), f.jobs, [&](std::size_t i) { reports[i] = oscillator::period_report(grid[i], cfg); });

    std::ostringstream os;
    CsvWriter csv(os, {"alpha", "beta", "energy", "T_closed", "T_quad", "T_ode", "rel_spread"});
    double worst = 0.0;
    std::size_t failing = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = reports[i];
        const double row[] = {grid[i].alpha(), grid[i].beta(),   grid[i].energy(),        r.closed_form,
                              r.quadrature,    *r.ode_measured,  r.max_pairwise_rel_diff};
        csv.row(row);
        worst = std::max(worst, r.max_pairwise_rel_diff);
        if (!r.consistent(f.check_tol)) ++failing;
    }
    m.results = {{"points", grid.size()}, {"max_rel_spread", worst}, {"points_over_check_tol", failing}};

    CommandResult out{os.str(), std::nullopt, kOk, {}};
    if (failing > 0) {
        out.code = kNumeric;
        out.failure = std::to_string(failing) + " grid points have rel_spread > --check-tol " + fmt(f.check_tol);
    }
    return out;
}

// ------------------------------------------------------------------ kepler

CommandResult cmd_kepler(const Flags& f, RunManifest& m) {
    const FractionalParams params = resolve_params(f);
    const PowerLawPotential pot(is_set(f.strength) ? f.strength : -1.0, is_set(f.degree) ? f.degree : -1.0);
    const std::optional<InitialConditions> given = initial_conditions(f, false);
    const InitialConditions ic = given ? *given : similarity::default_kepler_orbit(params, pot);
    const std::vector<double> rhos = parse_list(f.rho, "rho");
    const IntegratorConfig cfg = integrator_config(f);

    Echo& e = m.parameters;
    echo_params(e, params);
    echo_potential(e, pot);
    e.emplace_back("q0", format_list(from_vec(ic.q0)));
    if (ic.qdot0) {
        e.emplace_back("qdot0", format_list(from_vec(*ic.qdot0)));
    } else {
        e.emplace_back("p0", format_list(from_vec(*ic.p0)));
    }
    e.emplace_back("rho", format_list(rhos));
    echo_integrator(e, m, f);
    echo_check(e, m, f);

    similarity::validate_orbit(params, pot, ic);
    const similarity::KeplerReport r = similarity::fractional_kepler_check(params, pot, ic, rhos, cfg);

    std::ostringstream os;
    CsvWriter csv(os, {"rho", "T_ratio_measured", "T_ratio_predicted", "rel_err"});
    for (const auto& row : r.rows) {
        const double values[] = {row.rho, row.measured_ratio, row.predicted_ratio, row.rel_error};
        csv.row(values);
    }

    nlohmann::json summary = {
        {"alpha", r.alpha},
        {"predicted_exponent", r.predicted_exponent},
        {"check_tol", f.check_tol},
    };
    CommandResult out{os.str(), std::nullopt, kOk, {}};
    if (r.fit) {
        const double slope_error = std::abs(r.fit->slope - r.predicted_exponent);
        summary["fit"] = {{"slope", r.fit->slope},
                          {"intercept", r.fit->intercept},
                          {"residual_rms", r.fit->residual_rms},
                          {"points", r.fit->points}};
        summary["slope_error"] = slope_error;
        summary["within_tolerance"] = slope_error <= f.check_tol;
        if (slope_error > f.check_tol) {
            out.code = kNumeric;
            out.failure = "fitted exponent " + fmt(r.fit->slope) + " misses " + fmt(r.predicted_exponent) +
                          " by more than --check-tol " + fmt(f.check_tol);
        }
    } else {
        summary["fit"] = nullptr;
        summary["slope_error"] = nullptr;
        summary["within_tolerance"] = nullptr;
        summary["note"] = "fewer than two distinct rho values; no fit";
    }
    m.results = summary;
    out.summary = summary.dump(2) + "\n";
    return out;
}

// ------------------------------------------------------------- plumbing

void add_physics(CLI::App* sub, Flags& f, bool with_energy) {
    sub->add_option("--alpha", f.alpha, "kinetic exponent, 1 < alpha <= 2");
    sub->add_option("--d-alpha", f.d_alpha, "kinetic scale D_alpha (default 1)");
    sub->add_option("--mass", f.mass, "shorthand for --alpha 2 --d-alpha 1/(2 mass)");
    sub->add_option("--g2,--strength", f.strength, "potential strength");
    sub->add_option("--beta,--degree", f.degree, "potential degree");
    if (with_energy) sub->add_option("--energy", f.energy, "oscillator energy (default 1)");
}

void add_initial(CLI::App* sub, Flags& f) {
    sub->add_option("--q0", f.q0, "initial position, comma separated");
    sub->add_option("--p0", f.p0, "initial momentum, comma separated");
    sub->add_option("--qdot0", f.qdot0, "initial velocity, comma separated");
}

void add_numerics(CLI::App* sub, Flags& f) {
    sub->add_option("--rtol", f.rtol, "relative tolerance");
    sub->add_option("--atol", f.atol, "absolute tolerance, relative to the derived scales");
    sub->add_option("--max-steps", f.max_steps, "integration step budget");
}

void add_outputs(CLI::App* sub, Flags& f) {
    sub->add_option("--out", f.out, "data file ('-' for standard output)");
    sub->add_option("--manifest", f.manifest, "manifest path (default: next to --out)");
    sub->add_option("--config", f.config, "key = value file; flags win on conflict");
}

/// Sidecar files sit next to --out, or carry the subcommand name when the
/// data goes to standard output.
std::string sidecar_path(const std::string& out, const std::string& subcommand, const std::string& suffix) {
    if (out.empty() || out == "-") return "fracmech-" + subcommand + suffix;
    return std::filesystem::path(out).replace_extension(suffix).string();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot open output file: " + path);
    os << text;
    if (!os.flush()) throw UsageError("failed writing output file: " + path);
}

/// Prepends the config file's entries to the subcommand's flags, so that
/// the later command-line values take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (!path || args.empty()) return args;
    std::vector<std::string> out{args.front()};
    for (const auto& [key, value] : read_config(*path)) {
        if (key == "config") throw UsageError("config files cannot include other config files");
        out.push_back("--" + key);
        out.push_back(value);
    }
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional classical mechanics: simulations, periods, Hamilton-Jacobi solutions and scaling laws",
                 "fracmech"};
    app.set_version_flag("--version", FRACMECH_VERSION);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Flags f;
    using Command = CommandResult (*)(const Flags&, RunManifest&);
    std::vector<std::pair<CLI::App*, Command>> commands;

    auto* simulate = app.add_subcommand("simulate", "integrate the Hamilton equations, trajectory CSV");
    add_physics(simulate, f, false);
    add_initial(simulate, f);
    simulate->add_option("--t0", f.t0, "start time");
    simulate->add_option("--t1", f.t1, "end time");
    add_numerics(simulate, f);
    add_outputs(simulate, f);
    commands.emplace_back(simulate, cmd_simulate);

    auto* period = app.add_subcommand("period", "closed-form, quadrature and ODE periods, JSON");
    add_physics(period, f, true);
    add_numerics(period, f);
    period->add_option("--check-tol", f.check_tol, "largest accepted relative disagreement");
    add_outputs(period, f);
    commands.emplace_back(period, cmd_period);

    auto* hj = app.add_subcommand("hj", "Hamilton-Jacobi solution against the ODE over one period, CSV");
    add_physics(hj, f, true);
    hj->add_option("--samples", f.samples, "number of sample times");
    add_numerics(hj, f);
    hj->add_option("--check-tol", f.check_tol, "largest accepted difference, in units of the amplitude");
    add_outputs(hj, f);
    commands.emplace_back(hj, cmd_hj);

    auto* sweep = app.add_subcommand("sweep", "period agreement over an alpha x beta x energy grid, CSV");
    sweep->add_option("--alphas", f.alphas, "kinetic exponents, comma separated");
    sweep->add_option("--betas", f.betas, "potential degrees, comma separated");
    sweep->add_option("--energies", f.energies, "energies, comma separated");
    add_physics(sweep, f, true);
    add_numerics(sweep, f);
    sweep->add_option("--check-tol", f.check_tol, "largest accepted rel_spread");
    sweep->add_option("--jobs", f.jobs, "worker threads (0: one per core)");
    add_outputs(sweep, f);
    commands.emplace_back(sweep, cmd_sweep);

    auto* kepler = app.add_subcommand("kepler", "radial period scaling of bound orbits in a 1/r well, CSV");
    add_physics(kepler, f, false);
    add_initial(kepler, f);
    kepler->add_option("--rho", f.rho, "orbit scale factors, comma separated");
    add_numerics(kepler, f);
    kepler->add_option("--check-tol", f.check_tol, "largest accepted exponent error");
    kepler->add_option("--summary", f.summary, "summary JSON path (default: next to --out)");
    add_outputs(kepler, f);
    commands.emplace_back(kepler, cmd_kepler);

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return kOk;
        }
        err << "error: " << e.what() << "\n\n" << app.help() << std::flush;
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const auto it = std::find_if(commands.begin(), commands.end(), [&](const auto& c) { return c.first == chosen; });

    RunManifest manifest;
    manifest.subcommand = chosen->get_name();
    manifest.version = FRACMECH_VERSION;
    const auto started = std::chrono::steady_clock::now();
    try {
        CommandResult result = it->second(f, manifest);

        if (f.out.empty() || f.out == "-") {
            out << result.data << std::flush;
            manifest.outputs.emplace_back("-");
        } else {
            write_file(f.out, result.data);
            manifest.outputs.push_back(f.out);
        }
        if (result.summary) {
            const std::string path =
                f.summary.empty() ? sidecar_path(f.out, manifest.subcommand, ".summary.json") : f.summary;
            write_file(path, *result.summary);
            manifest.outputs.push_back(path);
        }
        const std::string manifest_path =
            f.manifest.empty() ? sidecar_path(f.out, manifest.subcommand, ".manifest.json") : f.manifest;
        manifest.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        manifest.write(manifest_path);

        if (result.code != kOk) err << "check failed: " << result.failure << '\n';
        return result.code;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << chosen->help() << std::flush;
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UnsuitablePhysics& e) {
        err << "unsuitable physics: " << e.what() << '\n';
        return kUnsuitable;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumeric;
    }
}

}  // namespace fracmech::cli
