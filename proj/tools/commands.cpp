#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "sigens/construct.hpp"
#include "sigens/diagnostics.hpp"
#include "sigens/mps_io.hpp"
#include "sigens/oracles.hpp"
#include "sigens/table_io.hpp"

namespace sigens::cli {

namespace {

using nlohmann::json;

constexpr const char* kThreadsVariable = "SIGENS_THREADS";

struct Common {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_dir = ".";
    std::string profile = "ci";
    std::string config;
    bool serial = false;

    json to_json() const
    {
        return {{"seed", seed}, {"threads", threads}, {"out", out_dir}, {"profile", profile}, {"serial", serial}};
    }
};

// Sample counts when --samples is not given: the full profile uses the
// published counts, ci a tenth of them with a floor of 10.
std::size_t profile_samples(const Common& c, std::size_t given, std::size_t full)
{
    if (given > 0)
        return given;
    return c.profile == "full" ? full : std::max<std::size_t>(10, full / 10);
}

double parse_sigma(const std::string& s)
{
    if (s == "inf" || s == "infinity" || s == "uniform")
        return kUniformSigma;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || std::isnan(v) || v < 0.0)
        throw Error(ErrorKind::config, "sigma must be a nonnegative number or 'inf', got '" + s + "'");
    return v;
}

std::vector<double> parse_sigmas(const std::vector<std::string>& values)
{
    std::vector<double> out;
    for (const auto& s : values)
        out.push_back(parse_sigma(s));
    return out;
}

std::string label(double v)
{
    if (std::isinf(v))
        return "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

int resolve_threads(const Common& c)
{
    if (c.threads > 0)
        return c.threads;
    if (const char* env = std::getenv(kThreadsVariable)) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw Error(ErrorKind::config, std::string(kThreadsVariable) + " must be a positive integer");
        return static_cast<int>(v);
    }
    return omp_get_max_threads();
}

Execution execution(const Common& c)
{
    return c.serial ? Execution::serial() : Execution::parallel(resolve_threads(c));
}

std::string output_path(const Common& c, const std::string& name)
{
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec)
        throw Error(ErrorKind::io, "cannot create output directory '" + c.out_dir + "': " + ec.message());
    return (std::filesystem::path(c.out_dir) / name).string();
}

json metadata(const std::string& command, const Common& c, const json& params, std::size_t samples)
{
    json config = c.to_json();
    config.update(params);
    return {{"program", "sigens-cli"},
            {"command", command},
            {"config", config},
            {"seed", c.seed},
            {"samples", samples},
            {"execution", c.serial ? "serial" : "parallel"},
            {"threads", c.serial ? 1 : resolve_threads(c)}};
}

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--seed", c.seed, "base random seed");
    sub->add_option("--threads", c.threads, "worker threads (default: $SIGENS_THREADS, else all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", c.out_dir, "output directory");
    sub->add_option("--profile", c.profile, "default sample counts")->check(CLI::IsMember({"ci", "full"}));
    sub->add_option("--config", c.config, "JSON file of option values; flags take precedence");
    sub->add_flag("--serial", c.serial, "run the serial reference loops");
}

// Fill options not given on the command line from a JSON object whose keys
// are long option names without the dashes.
void apply_config(CLI::App* sub, const std::string& path)
{
    const json j = read_json_file(path);
    if (!j.is_object())
        throw Error(ErrorKind::config, "config '" + path + "' must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        CLI::Option* opt = key == "config" || key == "help" ? nullptr : sub->get_option_no_throw("--" + key);
        if (!opt)
            throw Error(ErrorKind::config, "unknown config key '" + key + "' for " + sub->get_name());
        if (opt->count() > 0)
            continue;
        std::vector<std::string> inputs;
        auto push = [&](const json& v) {
            if (v.is_string())
                inputs.push_back(v.get<std::string>());
            else if (v.is_boolean())
                inputs.push_back(v.get<bool>() ? "true" : "false");
            else if (v.is_number())
                inputs.push_back(v.dump());
            else
                throw Error(ErrorKind::config, "config key '" + key + "' has an unsupported value");
        };
        if (value.is_array())
            for (const auto& v : value)
                push(v);
        else
            push(value);
        try {
            opt->add_result(inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw Error(ErrorKind::config, "config key '" + key + "': " + e.what());
        }
    }
}

std::vector<double> bond_entropies(const MatrixProductState& psi)
{
    std::vector<double> out;
    for (const auto& s : extract_all_spectra(psi))
        out.push_back(oracles::von_neumann_entropy(s.eigenvalues()));
    return out;
}

void save_state(const std::string& path_stem, const std::string& format, const MatrixProductState& psi,
                std::string& written)
{
    if (format == "json") {
        written = path_stem + ".json";
        write_json_file(written, mps_to_json(psi));
    } else {
        written = path_stem + ".mps";
        save_mps_binary(written, psi);
    }
}

MatrixProductState load_state(const std::string& path)
{
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        return mps_from_json(read_json_file(path));
    return load_mps_binary(path);
}

// ---------------------------------------------------------------- commands

struct SampleParams {
    std::size_t n = 0;
    std::string sigma = "inf";
    std::size_t samples = 0;
    double trunc = 1e-16;
    json to_json() const { return {{"n", n}, {"sigma", sigma}, {"samples", samples}, {"trunc", trunc}}; }
};

int cmd_sample_spectra(const Common& c, const SampleParams& p, std::ostream& out)
{
    if (p.n < 2)
        throw Error(ErrorKind::invalid_dimension, "--n must be >= 2, got " + std::to_string(p.n));
    const double sigma = parse_sigma(p.sigma);
    const std::size_t samples = profile_samples(c, p.samples, 1000);
    const VectorEstimate est = mean_ordered_spectrum(p.n, sigma, samples, RandomStream(c.seed), execution(c));

    Table table;
    table.columns = {"i", "mean", "std_error"};
    for (std::size_t i = 0; i < p.n; ++i)
        table.add_row({static_cast<double>(i + 1), est.mean[i], est.std_error[i]});

    json meta = metadata("sample-spectra", c, p.to_json(), samples);
    try {
        const RegressionReport fit = fit_log_spectrum(est.mean, p.trunc);
        meta["fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
                       {"points", fit.points}};
    } catch (const Error&) {
        meta["fit"] = nullptr;
    }
    const std::string path = output_path(c, "mean_spectrum_n" + std::to_string(p.n) + ".dat");
    write_table_files(path, table, meta);
    out << "wrote " << path << " (" << p.n << " rows, " << samples << " samples)\n";
    return exit_ok;
}

struct BuildParams {
    int length = 8;
    std::string sigma = "inf";
    int chi = 64;
    double trunc = 1e-16;
    double delta = 1e-4;
    int max_sweeps = 500;
    std::string format = "binary";
    json to_json() const
    {
        return {{"L", length}, {"sigma", sigma},        {"chi", chi},      {"trunc", trunc},
                {"delta", delta}, {"max-sweeps", max_sweeps}, {"format", format}};
    }
};

void add_sweep_options(CLI::App* sub, double& delta, int& max_sweeps, std::string& format)
{
    sub->add_option("--delta", delta, "convergence threshold on the summed pass residual")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-sweeps", max_sweeps, "maximum number of passes")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "checkpoint format")->check(CLI::IsMember({"binary", "json"}));
}

int write_construction(const Common& c, const std::string& name, const ConstructionReport& report, json meta,
                       const std::string& format, std::ostream& out)
{
    std::string state_path;
    save_state(output_path(c, name + "_state"), format, report.psi, state_path);
    json doc = report_to_json(report);
    doc["bond_entropies"] = bond_entropies(report.psi);
    doc["checkpoint"] = state_path;
    doc["metadata"] = std::move(meta);
    const std::string report_path = output_path(c, name + "_report.json");
    write_json_file(report_path, doc);
    out << (report.converged ? "converged" : "not converged") << " after " << report.sweeps_used
        << " passes, mean error " << report.total_error << "\nwrote " << report_path << " and " << state_path << "\n";
    return report.converged ? exit_ok : exit_not_converged;
}

int cmd_build(const Common& c, const BuildParams& p, std::ostream& out)
{
    EnsembleSpec spec;
    spec.sigma = parse_sigma(p.sigma);
    spec.length = p.length;
    spec.chi_max = p.chi;
    spec.trunc_threshold = p.trunc;
    spec.seed = c.seed;
    spec.validate();
    SweepOptions options;
    options.delta = p.delta;
    options.max_sweeps = p.max_sweeps;
    const ConstructionReport report = build_state(spec, RandomStream(c.seed), options);
    return write_construction(c, "build", report, metadata("build", c, p.to_json(), 1), p.format, out);
}

struct SweepParams {
    std::string state;
    std::string targets;
    double delta = 1e-4;
    int max_sweeps = 500;
    std::string format = "binary";
    json to_json() const
    {
        return {{"state", state}, {"targets", targets}, {"delta", delta}, {"max-sweeps", max_sweeps}, {"format", format}};
    }
};

int cmd_sweep(const Common& c, const SweepParams& p, std::ostream& out)
{
    const MatrixProductState psi = load_state(p.state);
    const json tj = read_json_file(p.targets);
    const TargetSpectra targets = targets_from_json(tj.contains("targets") ? tj.at("targets") : tj);
    SweepOptions options;
    options.delta = p.delta;
    options.max_sweeps = p.max_sweeps;
    ConstructionReport report = sweep(psi, targets, options);
    report.seed = c.seed;
    return write_construction(c, "sweep", report, metadata("sweep", c, p.to_json(), 1), p.format, out);
}

struct AdmissionParams {
    std::vector<int> lengths{8, 10, 12};
    std::vector<int> chis{64};
    std::vector<std::string> sigmas{"inf"};
    double eps = 1e-4;
    std::size_t samples = 0;
    double trunc = 1e-16;
    double delta = 1e-4;
    int max_sweeps = 500;
    json to_json() const
    {
        return {{"L", lengths},     {"chi", chis},     {"sigma", sigmas},           {"eps", eps},
                {"samples", samples}, {"trunc", trunc}, {"delta", delta}, {"max-sweeps", max_sweeps}};
    }
};

int cmd_admission(const Common& c, const AdmissionParams& p, std::ostream& out)
{
    const std::vector<double> sigmas = parse_sigmas(p.sigmas);
    if (sigmas.size() > 1 && p.lengths.size() > 1)
        throw Error(ErrorKind::config, "scan either several L or several sigma, not both");
    const bool over_sigma = sigmas.size() > 1;
    const std::size_t samples = profile_samples(c, p.samples, 10000);
    SweepOptions options;
    options.delta = p.delta;
    options.max_sweeps = p.max_sweeps;
    const Execution exec = execution(c);
    const RandomStream base(c.seed);

    Table table;
    table.columns = {over_sigma ? "sigma" : "L"};
    for (int chi : p.chis) {
        table.columns.push_back("rate_chi" + std::to_string(chi));
        table.columns.push_back("se_chi" + std::to_string(chi));
    }
    json cells = json::array();
    const std::size_t rows = over_sigma ? sigmas.size() : p.lengths.size();
    for (std::size_t r = 0; r < rows; ++r) {
        const int L = over_sigma ? p.lengths.front() : p.lengths[r];
        const double sigma = over_sigma ? sigmas[r] : sigmas.front();
        std::vector<double> row{over_sigma ? sigma : static_cast<double>(L)};
        for (std::size_t k = 0; k < p.chis.size(); ++k) {
            EnsembleSpec spec;
            spec.length = L;
            spec.sigma = sigma;
            spec.chi_max = p.chis[k];
            spec.trunc_threshold = p.trunc;
            spec.seed = c.seed;
            const RandomStream rng = base.derive(static_cast<std::uint64_t>(L)).derive(k).derive(over_sigma ? r : 0);
            const AdmissionReport rep = admission_rate(spec, p.eps, samples, rng, exec, options);
            row.push_back(rep.rate);
            row.push_back(rep.std_error);
            cells.push_back({{"L", L}, {"sigma", label(sigma)}, {"chi", p.chis[k]}, {"rate", rep.rate},
                             {"std_error", rep.std_error}, {"failures", rep.failures}, {"converged", rep.converged}});
            out << "L=" << L << " sigma=" << label(sigma) << " chi=" << p.chis[k] << " rate=" << rep.rate << " +- "
                << rep.std_error << "\n";
        }
        table.add_row(std::move(row));
    }
    json meta = metadata("admission", c, p.to_json(), samples);
    meta["cells"] = std::move(cells);
    const std::string path = output_path(c, "admission.dat");
    write_table_files(path, table, meta);
    out << "wrote " << path << "\n";
    return exit_ok;
}

struct PhaseParams {
    std::vector<std::size_t> ns{64};
    double sigma_min = 1e-4;
    double sigma_max = 0.3;
    std::size_t points = 30;
    std::size_t samples = 0;
    double trunc = 1e-16;
    json to_json() const
    {
        return {{"n", ns},           {"sigma-min", sigma_min}, {"sigma-max", sigma_max},
                {"points", points}, {"samples", samples},     {"trunc", trunc}};
    }
};

int cmd_phase_diagram(const Common& c, const PhaseParams& p, std::ostream& out)
{
    const std::size_t samples = profile_samples(c, p.samples, 1000);
    const std::vector<double> grid = log_grid(p.sigma_min, p.sigma_max, p.points);
    const Execution exec = execution(c);

    Table summary;
    summary.columns = {"n", "sigma_critical", "r_squared_min", "at_endpoint"};
    json scans = json::array();
    for (std::size_t n : p.ns) {
        if (n < 2)
            throw Error(ErrorKind::invalid_dimension, "--n must be >= 2, got " + std::to_string(n));
        const PhaseScan scan = find_sigma_critical(n, grid, samples, RandomStream(c.seed).derive(n), exec, p.trunc);
        Table fits;
        fits.columns = {"sigma", "slope", "intercept", "r_squared"};
        for (std::size_t k = 0; k < grid.size(); ++k)
            fits.add_row({grid[k], scan.fits[k].slope, scan.fits[k].intercept, scan.fits[k].r_squared});
        const std::string fit_path = output_path(c, "r_squared_n" + std::to_string(n) + ".dat");
        json meta = metadata("phase-diagram", c, p.to_json(), samples);
        meta["n"] = n;
        write_table_files(fit_path, fits, meta);

        const PhaseDiagramPoint& pt = scan.critical;
        summary.add_row({static_cast<double>(n), pt.sigma_critical, pt.r_squared_min, pt.at_endpoint ? 1.0 : 0.0});
        scans.push_back({{"n", n}, {"fits", fit_path}});
        out << "n=" << n << " sigma_critical=" << pt.sigma_critical << " r_squared_min=" << pt.r_squared_min
            << (pt.at_endpoint ? " (minimum at grid endpoint)" : "") << "\n";
    }
    json meta = metadata("phase-diagram", c, p.to_json(), samples);
    meta["scans"] = std::move(scans);
    const std::string path = output_path(c, "phase_diagram.dat");
    write_table_files(path, summary, meta);
    out << "wrote " << path << "\n";
    return exit_ok;
}

struct SurfaceParams {
    int l_max = 6;
    std::vector<std::string> sigmas;
    double trunc = 1e-16;
    std::size_t samples = 0;
    json to_json() const { return {{"l-max", l_max}, {"sigma", sigmas}, {"trunc", trunc}, {"samples", samples}}; }
};

Table surface_table(const Surface& s, const std::string& stat)
{
    Table t;
    t.columns = {"l"};
    for (double sigma : s.sigma) {
        t.columns.push_back(stat + "_" + label(sigma));
        t.columns.push_back("se_" + label(sigma));
    }
    for (std::size_t i = 0; i < s.l.size(); ++i) {
        std::vector<double> row{static_cast<double>(s.l[i])};
        for (std::size_t k = 0; k < s.sigma.size(); ++k) {
            row.push_back(s.mean[i][k]);
            row.push_back(s.std_error[i][k]);
        }
        t.add_row(std::move(row));
    }
    return t;
}

int cmd_surfaces(const Common& c, const SurfaceParams& p, std::ostream& out)
{
    std::vector<double> grid;
    if (p.sigmas.empty()) {
        grid = log_grid(1e-3, 1.0, 10);
        grid.insert(grid.begin(), 1e-9);
    } else {
        grid = parse_sigmas(p.sigmas);
    }
    const std::size_t samples = profile_samples(c, p.samples, 20);
    const Execution exec = execution(c);
    const RandomStream base(c.seed);
    const Surface entropy = entropy_surface(p.l_max, grid, samples, base.derive(0), exec);
    const Surface rank = bond_dimension_surface(p.l_max, grid, p.trunc, samples, base.derive(1), exec);
    const json meta = metadata("surfaces", c, p.to_json(), samples);
    const std::string ep = output_path(c, "entropy_surface.dat");
    const std::string rp = output_path(c, "bond_dimension_surface.dat");
    write_table_files(ep, surface_table(entropy, "S"), meta);
    write_table_files(rp, surface_table(rank, "rank"), meta);
    out << "wrote " << ep << " and " << rp << "\n";
    return exit_ok;
}

struct OracleParams {
    std::vector<std::size_t> ns{2, 4, 8, 16, 64};
    int length = 8;
};

int cmd_oracle_check(const OracleParams& p, std::ostream& out)
{
    out << "# n uniform_mean_entropy\n";
    for (std::size_t n : p.ns) {
        if (n < 2)
            throw Error(ErrorKind::invalid_dimension, "--n must be >= 2, got " + std::to_string(n));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu %.12f\n", n, oracles::uniform_mean_entropy(n));
        out << buf;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "# limit %.12f\n", oracles::uniform_mean_entropy_limit());
    out << buf << "# l page_mean_entropy(l, L=" << p.length << ") l*ln2\n";
    for (int l = 1; 2 * l <= p.length; ++l) {
        std::snprintf(buf, sizeof buf, "%d %.12f %.12f\n", l, oracles::page_mean_entropy(l, p.length, 2),
                      l * std::log(2.0));
        out << buf;
    }
    return exit_ok;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::rank_deficiency:
    case ErrorKind::degenerate_state:
    case ErrorKind::empty_spectrum:
        return exit_numerical;
    default:
        return exit_usage;
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sample sigma-ensembles of random pure states and their diagnostics", "sigens-cli"};
    app.require_subcommand(1);

    Common common;

    SampleParams sample;
    auto* sample_cmd = app.add_subcommand("sample-spectra", "mean ordered eigenvalue spectrum");
    // required options are checked after the config file is merged in
    std::vector<std::pair<CLI::App*, CLI::Option*>> required;
    required.emplace_back(sample_cmd, sample_cmd->add_option("--n", sample.n, "subsystem dimension (required)"));
    sample_cmd->add_option("--sigma", sample.sigma, "Gaussian width, or inf for uniform sampling");
    sample_cmd->add_option("--samples", sample.samples, "number of draws (default from profile)");
    sample_cmd->add_option("--trunc", sample.trunc, "entries at or below are left out of the log fit");
    add_common(sample_cmd, common);

    BuildParams build;
    auto* build_cmd = app.add_subcommand("build", "sample targets and construct one MPS");
    build_cmd->add_option("--L", build.length, "chain length")->check(CLI::PositiveNumber);
    build_cmd->add_option("--sigma", build.sigma, "Gaussian width, or inf for uniform sampling");
    build_cmd->add_option("--chi", build.chi, "bond dimension cap")->check(CLI::PositiveNumber);
    build_cmd->add_option("--trunc", build.trunc, "eigenvalue truncation threshold");
    add_sweep_options(build_cmd, build.delta, build.max_sweeps, build.format);
    add_common(build_cmd, common);

    SweepParams sweep_p;
    auto* sweep_cmd = app.add_subcommand("sweep", "continue refining a checkpointed MPS");
    required.emplace_back(sweep_cmd, sweep_cmd->add_option("--state", sweep_p.state, "MPS checkpoint, .mps or .json (required)"));
    required.emplace_back(
        sweep_cmd, sweep_cmd->add_option("--targets", sweep_p.targets, "targets JSON, or a report containing them (required)"));
    add_sweep_options(sweep_cmd, sweep_p.delta, sweep_p.max_sweeps, sweep_p.format);
    add_common(sweep_cmd, common);

    AdmissionParams adm;
    auto* adm_cmd = app.add_subcommand("admission", "admission rate over L (or sigma) for each chi");
    adm_cmd->add_option("--L", adm.lengths, "chain lengths");
    adm_cmd->add_option("--chi", adm.chis, "bond dimension caps");
    adm_cmd->add_option("--sigma", adm.sigmas, "Gaussian widths (inf for uniform)");
    adm_cmd->add_option("--eps", adm.eps, "admission tolerance on the mean per-bond error");
    adm_cmd->add_option("--samples", adm.samples, "states per cell (default from profile)");
    adm_cmd->add_option("--trunc", adm.trunc, "eigenvalue truncation threshold");
    adm_cmd->add_option("--delta", adm.delta, "sweep convergence threshold")->check(CLI::PositiveNumber);
    adm_cmd->add_option("--max-sweeps", adm.max_sweeps, "maximum passes per state")->check(CLI::PositiveNumber);
    add_common(adm_cmd, common);

    PhaseParams phase;
    auto* phase_cmd = app.add_subcommand("phase-diagram", "R^2 of log-spectrum fits over sigma, and its minimum");
    phase_cmd->add_option("--n", phase.ns, "subsystem dimensions");
    phase_cmd->add_option("--sigma-min", phase.sigma_min, "smallest sigma")->check(CLI::PositiveNumber);
    phase_cmd->add_option("--sigma-max", phase.sigma_max, "largest sigma")->check(CLI::PositiveNumber);
    phase_cmd->add_option("--points", phase.points, "log-spaced grid points")->check(CLI::Range(3, 100000));
    phase_cmd->add_option("--samples", phase.samples, "draws per grid point (default from profile)");
    phase_cmd->add_option("--trunc", phase.trunc, "entries at or below are left out of the log fit");
    add_common(phase_cmd, common);

    SurfaceParams surf;
    auto* surf_cmd = app.add_subcommand("surfaces", "mean entropy and effective rank over (l, sigma)");
    surf_cmd->add_option("--l-max", surf.l_max, "largest subsystem size in sites")->check(CLI::PositiveNumber);
    surf_cmd->add_option("--sigma", surf.sigmas, "Gaussian widths (default 1e-9 and 10 points on [1e-3, 1])");
    surf_cmd->add_option("--trunc", surf.trunc, "rank counts eigenvalues above this");
    surf_cmd->add_option("--samples", surf.samples, "draws per cell (default from profile)");
    add_common(surf_cmd, common);

    OracleParams oracle;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "print closed-form reference values");
    oracle_cmd->add_option("--n", oracle.ns, "subsystem dimensions");
    oracle_cmd->add_option("--L", oracle.length, "chain length for the Haar baseline")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        for (CLI::App* sub : app.get_subcommands())
            if (!common.config.empty())
                apply_config(sub, common.config);
        for (const auto& [sub, opt] : required)
            if (sub->parsed() && opt->count() == 0)
                throw Error(ErrorKind::config, opt->get_name() + " is required");

        if (app.got_subcommand(sample_cmd))
            return cmd_sample_spectra(common, sample, out);
        if (app.got_subcommand(build_cmd))
            return cmd_build(common, build, out);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(common, sweep_p, out);
        if (app.got_subcommand(adm_cmd))
            return cmd_admission(common, adm, out);
        if (app.got_subcommand(phase_cmd))
            return cmd_phase_diagram(common, phase, out);
        if (app.got_subcommand(surf_cmd))
            return cmd_surfaces(common, surf, out);
        if (app.got_subcommand(oracle_cmd))
            return cmd_oracle_check(oracle, out);
    } catch (const Error& e) {
        err << "sigens-cli: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "sigens-cli: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_usage;
}

} // namespace sigens::cli
