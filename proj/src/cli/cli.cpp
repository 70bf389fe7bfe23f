#include "scpw/cli.hpp"

#include "scpw/dynamics.hpp"
#include "scpw/equilibrium.hpp"
#include "scpw/error.hpp"
#include "scpw/model.hpp"
#include "scpw/moments.hpp"
#include "scpw/netsim.hpp"
#include "scpw/pipeline.hpp"
#include "scpw/sensitivity.hpp"
#include "scpw/serialize.hpp"
#include "scpw/threshold.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace scpw {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct MomentSource {
    std::string moments;
    std::string degrees;
    std::optional<double> poisson;
    std::string bimodal;
    std::string edges;
};

struct Common {
    MomentSource source;
    std::optional<double> delta;
    std::optional<double> delta_min;
    std::optional<double> delta_max;
    int steps = 96;
    std::string spacing = "linear";
    std::uint64_t seed = 1;
    std::string out;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
};

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const std::string& flag)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
            throw InvalidInput(flag + ": '" + item + "' is not a number");
        values.push_back(v);
    }
    if (values.size() != expected)
        throw InvalidInput(flag + " expects " + std::to_string(expected) + " comma-separated values");
    return values;
}

std::int64_t as_count(double v, const std::string& flag)
{
    if (v < 0.0 || v != std::floor(v))
        throw InvalidInput(flag + " expects nonnegative integers");
    return static_cast<std::int64_t>(v);
}

int source_count(const MomentSource& s)
{
    return !s.moments.empty() + !s.degrees.empty() + s.poisson.has_value() + !s.bimodal.empty() + !s.edges.empty();
}

void require_one_source(const MomentSource& s)
{
    const int n = source_count(s);
    if (n == 0)
        throw InvalidInput("no moments source: give one of --moments, --degrees, --poisson, --bimodal");
    if (n > 1)
        throw InvalidInput("exactly one moments source may be given");
}

std::array<std::int64_t, 4> bimodal_spec(const std::string& text)
{
    const auto v = parse_numbers(text, 4, "--bimodal");
    return {as_count(v[0], "--bimodal"), as_count(v[1], "--bimodal"), as_count(v[2], "--bimodal"),
            as_count(v[3], "--bimodal")};
}

Network read_network_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open edge list " + path);
    return read_edge_list(in);
}

DegreeMoments resolve_moments(const MomentSource& s)
{
    require_one_source(s);
    if (!s.moments.empty()) {
        const auto v = parse_numbers(s.moments, 3, "--moments");
        return {v[0], v[1], v[2]};
    }
    if (!s.degrees.empty())
        return moments_from_sequence(read_degree_file(s.degrees));
    if (s.poisson)
        return moments_from_poisson(*s.poisson);
    if (!s.edges.empty())
        return read_network_file(s.edges).realized_moments();
    const auto b = bimodal_spec(s.bimodal);
    return moments_from_bimodal(b[0], b[1], b[2], b[3]);
}

Network resolve_network(const MomentSource& s, std::int64_t nodes, std::uint64_t seed)
{
    require_one_source(s);
    if (!s.moments.empty())
        throw InvalidInput("a network needs a degree source (--degrees, --poisson, --bimodal or --edges), not --moments");
    if (!s.edges.empty())
        return read_network_file(s.edges);
    std::vector<std::int64_t> degrees;
    if (!s.degrees.empty()) {
        degrees = read_degree_file(s.degrees);
    } else if (s.poisson) {
        degrees = sample_poisson_degrees(nodes, *s.poisson, seed);
    } else {
        const auto b = bimodal_spec(s.bimodal);
        degrees = bimodal_degrees(b[0], b[1], b[2], b[3]);
    }
    return sample_configuration_model(degrees, seed);
}

void add_source_options(CLI::App* app, MomentSource& s, bool networks)
{
    app->add_option("--moments", s.moments, "Inline moment triple k1,k2,k3");
    app->add_option("--degrees", s.degrees, "Degree-sequence file, one integer per line");
    app->add_option("--poisson", s.poisson, "Poisson degree distribution with this mean");
    app->add_option("--bimodal", s.bimodal, "Bimodal distribution kA,nA,kB,nB");
    if (networks)
        app->add_option("--edges", s.edges, "Edge-list network file");
}

void add_sweep_options(CLI::App* app, Common& c)
{
    app->add_option("--delta-min", c.delta_min, "Sweep start");
    app->add_option("--delta-max", c.delta_max, "Sweep end");
    app->add_option("--steps", c.steps, "Number of sweep points")->capture_default_str();
    app->add_option("--spacing", c.spacing, "linear or log")->capture_default_str();
}

std::vector<double> resolve_deltas(const Common& c)
{
    if (c.delta) {
        if (c.delta_min || c.delta_max)
            throw InvalidInput("give either --delta or --delta-min/--delta-max, not both");
        if (!(*c.delta > 0.0))
            throw InvalidInput("--delta must be positive");
        return {*c.delta};
    }
    if (!c.delta_min || !c.delta_max)
        throw InvalidInput("a sweep needs --delta-min and --delta-max");
    SweepSpec spec{*c.delta_min, *c.delta_max, c.steps, Spacing::linear};
    if (c.spacing == "log")
        spec.spacing = Spacing::log;
    else if (c.spacing != "linear")
        throw InvalidInput("--spacing must be linear or log");
    return delta_grid(spec);
}

double require_delta(const Common& c)
{
    if (!c.delta)
        throw InvalidInput("--delta is required");
    if (!(*c.delta > 0.0))
        throw InvalidInput("--delta must be positive");
    return *c.delta;
}

// Writes to --out when given, otherwise to the command's stdout.
void emit(const Common& c, std::ostream& out, const std::function<void(std::ostream&)>& write)
{
    if (c.out.empty()) {
        write(out);
        return;
    }
    std::ofstream file(c.out);
    if (!file)
        throw InvalidInput("cannot write " + c.out);
    write(file);
}

void emit_json(const Common& c, std::ostream& out, const json& j)
{
    emit(c, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

json threshold_report(const DegreeMoments& m, const std::vector<double>& deltas)
{
    require_feasible(m);
    const double delta_c = epidemic_threshold(m);
    const auto bc = bifurcation_coefficients(m);
    json report = {{"moments", m}, {"delta_c", delta_c}, {"a", bc.a}, {"b", bc.b}, {"bifurcation", bc}};
    if (!(m.variance() > kVarianceFloor * m.k1 * m.k1)) {
        report["warning"] = "degenerate (regular) degree distribution: closure constants alpha, beta are undefined; "
                            "the Hessian contraction of a is omitted";
        spdlog::warn("degenerate degree variance; alpha/beta-dependent outputs suppressed");
    }
    const double kbar = (m.k2 - m.k1) / m.k1;
    json at = json::array();
    for (const double d : deltas) {
        const auto lin = dfe_linearization(m.k1, kbar, d);
        const double gap = d - delta_c;
        const auto cls = std::abs(gap) <= kCriticalBand ? Stability::critical
                                                        : (gap < 0.0 ? Stability::stable_dfe : Stability::unstable_dfe);
        at.push_back({{"delta", d}, {"eigs", lin.eigenvalues}, {"stability", to_string(cls)}});
    }
    report["eigenvalues_at"] = at;
    return report;
}

void cmd_threshold(const Common& c, const std::vector<double>& deltas, std::ostream& out)
{
    const auto m = resolve_moments(c.source);
    std::vector<double> at = deltas;
    if (at.empty())
        at.push_back(epidemic_threshold(m));
    emit_json(c, out, threshold_report(m, at));
}

void cmd_simulate(const Common& c, double t_end, double init, std::ostream& out)
{
    const auto m = resolve_moments(c.source);
    const auto p = derive_params(m, require_delta(c));
    const auto traj = integrate(p, seeded_state(init), t_end, {c.rel_tol, c.abs_tol, true});
    if (traj.terminal_reason == TerminalReason::rhs_failure)
        throw NumericalError("integration stopped: " + traj.failure);
    emit(c, out, [&](std::ostream& os) { write_trajectory_csv(os, traj); });
}

void cmd_equilibrium(const Common& c, std::ostream& out)
{
    const auto m = resolve_moments(c.source);
    const auto p = derive_params(m, require_delta(c));
    json report = {{"moments", m}, {"params", p}, {"stability", to_string(stability(p))}};
    report["solution"] = solve_endemic(p);
    if (p.delta > p.delta_c) {
        report["near"] = near_threshold_approx(p);
        report["far"] = far_threshold_approx(p);
    }
    emit_json(c, out, report);
}

void cmd_bifurcation(const Common& c, std::ostream& out)
{
    const auto m = resolve_moments(c.source);
    const auto rows = bifurcation_sweep(m, resolve_deltas(c));
    emit(c, out, [&](std::ostream& os) { write_bifurcation_csv(os, rows); });
}

struct SensitivityArgs {
    std::string regime = "both";
    std::vector<double> k3_slices = kDefaultK3Slices;
    int resolution = 101;
    double delta = kDefaultFarDelta;
    std::string at;
};

std::vector<Regime> regimes(const std::string& r)
{
    if (r == "both")
        return {Regime::near, Regime::far};
    return {parse_regime(r)};
}

void cmd_sensitivity(const Common& c, const SensitivityArgs& a, std::ostream& out)
{
    if (!(a.delta > 0.0))
        throw InvalidInput("--delta must be positive");
    if (!a.at.empty()) {
        const auto v = parse_numbers(a.at, 3, "--at");
        const DegreeMoments m{v[0], v[1], v[2]};
        const auto which = regimes(a.regime);
        emit(c, out, [&](std::ostream& os) {
            write_sensitivity_csv_header(os);
            for (const auto r : which)
                write_sensitivity_row(os, r, m.k3, a.delta, sensitivity_at(r, m, a.delta));
        });
        return;
    }
    const auto which = regimes(a.regime);
    const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
    fs::create_directories(dir);
    json written = json::array();
    for (const auto r : which) {
        for (const double k3 : a.k3_slices) {
            const auto grid =
                sensitivity_grid(r, k3, default_k1_range(k3), default_k2_range(k3), a.resolution, a.delta);
            std::ostringstream name;
            name << "sensitivity_" << to_string(r) << "_k3_" << k3 << ".csv";
            const auto path = dir / name.str();
            std::ofstream file(path);
            if (!file)
                throw InvalidInput("cannot write " + path.string());
            write_sensitivity_csv(file, grid);
            written.push_back(path.string());
        }
    }
    out << json{{"files", written}}.dump(2) << '\n';
}

struct NetArgs {
    std::int64_t nodes = 10000;
    double gamma = 1.0;
    double initial_fraction = 0.01;
    double t_max = kDefaultSimTMax;
    double burn_in = kDefaultBurnIn;
    int runs = 20;
    std::string edges_out;
};

SisRates rates_for(const Common& c, const NetArgs& a)
{
    if (!(a.gamma > 0.0))
        throw InvalidInput("--gamma must be positive");
    return {require_delta(c) * a.gamma, a.gamma};
}

void cmd_netsim(const Common& c, const NetArgs& a, std::ostream& out)
{
    const auto net = resolve_network(c.source, a.nodes, c.seed);
    if (!a.edges_out.empty()) {
        std::ofstream file(a.edges_out);
        if (!file)
            throw InvalidInput("cannot write " + a.edges_out);
        write_edge_list(file, net);
    }
    const auto count = std::max<std::int64_t>(1, std::llround(a.initial_fraction * static_cast<double>(net.size())));
    const auto sim = gillespie_sis(net, rates_for(c, a), count, a.t_max, c.seed, a.burn_in);
    emit(c, out, [&](std::ostream& os) { write_outcome_csv(os, sim); });
    spdlog::info("quasi-steady prevalence {} (sd {}), extinct={}", sim.quasi_steady_mean, sim.quasi_steady_sd,
                 sim.extinct);
}

void cmd_validate(const Common& c, const NetArgs& a, std::ostream& out)
{
    const auto net = resolve_network(c.source, a.nodes, c.seed);
    EnsembleConfig cfg;
    cfg.rates = rates_for(c, a);
    cfg.initial_fraction = a.initial_fraction;
    cfg.t_max = a.t_max;
    cfg.burn_in_fraction = a.burn_in;
    cfg.runs = a.runs;
    cfg.master_seed = c.seed;
    const auto summary = run_ensemble(net, cfg);

    const auto m = net.realized_moments();
    const auto p = derive_params(m, *c.delta);
    const auto eq = solve_endemic(p);
    json report = summary;
    report["n"] = net.size();
    report["seed"] = c.seed;
    report["realized_moments"] = m;
    report["target_moments"] = net.target_moments();
    report["delta_c"] = p.delta_c;
    report["w_scpw"] = eq.w_star;
    report["gap"] = summary.mean - eq.w_star;
    emit_json(c, out, report);
}

void setup_logging()
{
    static std::once_flag once;
    std::call_once(once, [] {
        auto logger = spdlog::stderr_color_mt("scpw");
        spdlog::set_default_logger(logger);
        spdlog::set_level(spdlog::level::warn);
        if (const char* env = std::getenv("SCPW_LOG"))
            spdlog::set_level(spdlog::level::from_str(env));
    });
}

int fail(std::ostream& err, int code, const std::string& kind, const std::string& message)
{
    err << json{{"error", message}, {"kind", kind}, {"exit_code", code}}.dump() << '\n';
    return code;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    setup_logging();

    CLI::App app{"Super compact pairwise SIS model: thresholds, equilibria, sensitivities and stochastic checks"};
    app.require_subcommand(1);
    Common c;
    std::vector<double> threshold_deltas;
    double t_end = 200.0;
    double init = 1e-2;
    SensitivityArgs sens;
    NetArgs net;

    auto add_common = [&](CLI::App* sub, bool networks) {
        add_source_options(sub, c.source, networks);
        sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
        sub->add_option("--out", c.out, "Output path");
    };

    auto* threshold = app.add_subcommand("threshold", "Epidemic threshold, bifurcation coefficients, DFE eigenvalues");
    add_common(threshold, false);
    threshold->add_option("--delta", threshold_deltas, "Delta values for the eigenvalue report")->delimiter(',');

    auto* simulate = app.add_subcommand("simulate", "Integrate the nondimensional ODE system");
    add_common(simulate, false);
    simulate->add_option("--delta", c.delta, "Transmission/recovery ratio");
    simulate->add_option("--t-end", t_end, "End time in units of 1/gamma")->capture_default_str();
    simulate->add_option("--init", init, "Initial prevalence")->capture_default_str();
    simulate->add_option("--rel-tol", c.rel_tol)->capture_default_str();
    simulate->add_option("--abs-tol", c.abs_tol)->capture_default_str();

    auto* equilibrium = app.add_subcommand("equilibrium", "Endemic equilibrium and its asymptotic approximations");
    add_common(equilibrium, false);
    equilibrium->add_option("--delta", c.delta, "Transmission/recovery ratio");

    auto* bifurcation = app.add_subcommand("bifurcation", "Bifurcation diagram over a delta sweep (CSV)");
    add_common(bifurcation, false);
    bifurcation->add_option("--delta", c.delta, "Single delta value");
    add_sweep_options(bifurcation, c);

    auto* sensitivity = app.add_subcommand("sensitivity", "Moment sensitivities of the endemic prevalence (CSV)");
    sensitivity->add_option("--out", c.out, "Output directory (grids) or file (--at)");
    sensitivity->add_option("--regime", sens.regime, "near, far or both")->capture_default_str();
    sensitivity->add_option("--k3", sens.k3_slices, "<k^3> slices")->delimiter(',')->capture_default_str();
    sensitivity->add_option("--resolution", sens.resolution, "Grid points per axis")->capture_default_str();
    sensitivity->add_option("--delta", sens.delta, "Far-regime delta")->capture_default_str();
    sensitivity->add_option("--at", sens.at, "Single cell k1,k2,k3");

    auto add_net = [&](CLI::App* sub) {
        add_common(sub, true);
        sub->add_option("--delta", c.delta, "Transmission/recovery ratio tau/gamma");
        sub->add_option("--nodes", net.nodes, "Nodes for --poisson networks")->capture_default_str();
        sub->add_option("--gamma", net.gamma, "Recovery rate")->capture_default_str();
        sub->add_option("--initial-fraction", net.initial_fraction)->capture_default_str();
        sub->add_option("--t-max", net.t_max, "Simulated time in units of 1/gamma")->capture_default_str();
        sub->add_option("--burn-in", net.burn_in, "Burn-in fraction of t-max")->capture_default_str();
    };
    auto* netsim = app.add_subcommand("netsim", "Single Gillespie SIS run on a configuration-model network");
    add_net(netsim);
    netsim->add_option("--edges-out", net.edges_out, "Write the sampled network as an edge list");

    auto* validate = app.add_subcommand("validate", "Stochastic ensemble compared with the SCPW equilibrium");
    add_net(validate);
    validate->add_option("--runs", net.runs, "Ensemble size")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return fail(err, kExitInvalid, "usage", e.what());
    }

    try {
        if (*threshold)
            cmd_threshold(c, threshold_deltas, out);
        else if (*simulate)
            cmd_simulate(c, t_end, init, out);
        else if (*equilibrium)
            cmd_equilibrium(c, out);
        else if (*bifurcation)
            cmd_bifurcation(c, out);
        else if (*sensitivity)
            cmd_sensitivity(c, sens, out);
        else if (*netsim)
            cmd_netsim(c, net, out);
        else if (*validate)
            cmd_validate(c, net, out);
    } catch (const InvalidInput& e) {
        return fail(err, kExitInvalid, "invalid_input", e.what());
    } catch (const NumericalError& e) {
        return fail(err, kExitNumerical, "numerical", e.what());
    } catch (const fs::filesystem_error& e) {
        return fail(err, kExitInvalid, "invalid_input", e.what());
    }
    return kExitOk;
}

} // namespace scpw
