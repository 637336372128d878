#include "betti/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "betti/circle_oracle.hpp"
#include "betti/complex.hpp"
#include "betti/error.hpp"
#include "betti/estimator.hpp"

namespace betti::cli {

std::string format_double(double value)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc()) {
        throw Error("failed to format a double");
    }
    return std::string(buffer, ptr);
}

namespace {

std::string join(const std::vector<std::string>& fields)
{
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            line += ',';
        }
        line += fields[i];
    }
    return line;
}

std::string csv_preamble(const RunConfig& config)
{
    return std::string("# format: ") + kFormatVersion + "\n# config: " + config.to_json().dump() +
           "\n";
}

std::filesystem::path plot_path(const std::string& output)
{
    return std::filesystem::path(output).replace_extension(".gp");
}

/// Writes the main output (to `out` when no path is set) and, for file
/// output, a gnuplot script next to it.
void emit(const RunConfig& config, const std::string& body, const std::string& plot_script,
          std::ostream& out)
{
    if (config.output.empty()) {
        out << body;
        return;
    }
    std::ofstream file(config.output, std::ios::binary);
    if (!file) {
        throw InvalidArgument("cannot write " + config.output);
    }
    file << body;
    if (!plot_script.empty()) {
        std::ofstream gp(plot_path(config.output), std::ios::binary);
        gp << plot_script;
    }
}

std::string gnuplot_header(const RunConfig& config, const std::string& title)
{
    const auto csv = std::filesystem::path(config.output).filename().string();
    const auto png = std::filesystem::path(config.output).replace_extension(".png").filename().string();
    std::ostringstream s;
    s << "# gnuplot script generated by `betti " << to_string(config.subcommand) << "`\n"
      << "# usage: gnuplot " << plot_path(config.output).filename().string() << "\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output '" << png << "'\n"
      << "set datafile separator ','\n"
      << "set datafile commentschars '#'\n"
      << "set key autotitle columnhead\n"
      << "set title \"" << title << "\"\n"
      << "set grid\n";
    return s.str();
}

bool oracle_applies(const RunConfig& config, const ManifoldModel& manifold,
                    const InvariantSpec& invariant)
{
    return manifold.kind() == ManifoldKind::Circle &&
           config.complex == ComplexKind::VietorisRips &&
           invariant == InvariantSpec::betti(1) &&
           config.n <= static_cast<std::size_t>(kMaxOracleSamples);
}

} // namespace

int run_curve(const RunConfig& config, std::ostream& out, std::ostream&)
{
    const ManifoldModel manifold = config.manifold_model();
    const InvariantSpec invariant = config.invariant_spec();

    CurveRequest request;
    request.manifold = manifold;
    request.complex_kind = config.complex;
    request.invariant = invariant;
    request.n = config.n;
    request.grid = config.grid.expand();
    request.trials = config.trials;
    request.master_seed = config.seed;
    request.max_dim = config.max_dim;
    request.workers = config.workers;
    request.simplex_budget = config.simplex_budget;
    const CurveEstimate curve = estimate_curve(request);

    const bool with_oracle = oracle_applies(config, manifold, invariant);
    std::vector<std::optional<double>> oracle(curve.grid.size());
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double t = curve.grid[i];
        if (with_oracle && t > 0.0 && t < 1.0 / 3.0) {
            oracle[i] = circle_homotopy_prob(static_cast<int>(config.n), t);
        }
    }

    std::string body;
    if (config.format == OutputFormat::Json) {
        nlohmann::json j;
        j["format_version"] = kFormatVersion;
        j["config"] = config.to_json();
        j["columns"]["t"] = curve.grid;
        j["columns"]["n"] = std::vector<std::size_t>(curve.grid.size(), curve.n);
        j["columns"]["trials"] = std::vector<std::size_t>(curve.grid.size(), curve.trials);
        j["columns"]["mean"] = curve.mean;
        j["columns"]["variance"] = curve.variance;
        j["columns"]["stderr"] = curve.std_error;
        auto& column = j["columns"]["oracle_p"] = nlohmann::json::array();
        for (const auto& p : oracle) {
            column.push_back(p ? nlohmann::json(*p) : nlohmann::json(nullptr));
        }
        body = j.dump(2) + "\n";
    } else {
        body = csv_preamble(config) + "t,n,trials,mean,variance,stderr,oracle_p\n";
        for (std::size_t i = 0; i < curve.grid.size(); ++i) {
            body += join({format_double(curve.grid[i]), std::to_string(curve.n),
                          std::to_string(curve.trials), format_double(curve.mean[i]),
                          format_double(curve.variance[i]), format_double(curve.std_error[i]),
                          oracle[i] ? format_double(*oracle[i]) : std::string()}) +
                    "\n";
        }
    }

    std::string plot;
    if (!config.output.empty() && config.format == OutputFormat::Csv) {
        const auto csv = std::filesystem::path(config.output).filename().string();
        plot = gnuplot_header(config, "E and Var of " + invariant.name() + ", n = " +
                                          std::to_string(config.n) + " on " + manifold.name()) +
               "set xlabel 't'\n"
               "plot '" + csv + "' using 1:4:6 with yerrorbars title 'mean', \\\n"
               "     '' using 1:5 with linespoints title 'variance'" +
               (with_oracle ? ", \\\n     '' using 1:7 with lines title 'oracle P(n,t)', \\\n"
                              "     '' using 1:($7*(1-$7)) with lines title 'oracle P(1-P)'\n"
                            : std::string("\n"));
    }
    emit(config, body, plot, out);
    return kExitOk;
}

int run_oracle(const RunConfig& config, std::ostream& out, std::ostream&)
{
    const std::vector<double> grid = config.grid.expand();
    const auto evals = circle_oracle_curve(static_cast<int>(config.n), grid);

    std::string body;
    if (config.format == OutputFormat::Json) {
        nlohmann::json j;
        j["format_version"] = kFormatVersion;
        j["config"] = config.to_json();
        auto& cols = j["columns"];
        for (const auto& e : evals) {
            cols["r"].push_back(e.r);
            cols["n"].push_back(e.n);
            cols["p"].push_back(e.p_circle);
            cols["expected_b1"].push_back(e.expected_b1);
            cols["variance_b1"].push_back(e.variance_b1);
        }
        body = j.dump(2) + "\n";
    } else {
        body = csv_preamble(config) + "r,n,p,expected_b1,variance_b1\n";
        for (const auto& e : evals) {
            body += join({format_double(e.r), std::to_string(e.n), format_double(e.p_circle),
                          format_double(e.expected_b1), format_double(e.variance_b1)}) +
                    "\n";
        }
    }

    std::string plot;
    if (!config.output.empty() && config.format == OutputFormat::Csv) {
        const auto csv = std::filesystem::path(config.output).filename().string();
        plot = gnuplot_header(config, "E[b1] and Var[b1] of VR(X, r), n = " +
                                          std::to_string(config.n) + " uniform points on S^1") +
               "set xlabel 'r'\n"
               "set xrange [0:1.0/3]\n"
               "plot '" + csv + "' using 1:4 with lines title 'E[b1]', \\\n"
               "     '' using 1:5 with lines title 'Var[b1]'\n";
    }
    emit(config, body, plot, out);
    return kExitOk;
}

int run_converge(const RunConfig& config, std::ostream& out, std::ostream&)
{
    ConvergenceRequest request;
    request.manifold = config.manifold_model();
    request.complex_kind = config.complex;
    request.invariant = config.invariant_spec();
    request.t = config.t;
    request.n_values = config.n_values;
    request.trials = config.trials;
    request.master_seed = config.seed;
    request.max_dim = config.max_dim;
    request.workers = config.workers;
    request.simplex_budget = config.simplex_budget;
    if (config.target) {
        request.target = *config.target;
        request.target_source = "user supplied";
    } else {
        std::tie(request.target, request.target_source) =
            reference_value(request.manifold, request.invariant);
    }
    const ConvergenceTable table = convergence_study(request);

    std::string body;
    if (config.format == OutputFormat::Json) {
        nlohmann::json j;
        j["format_version"] = kFormatVersion;
        j["config"] = config.to_json();
        j["target"] = table.target;
        j["target_source"] = table.target_source;
        auto& cols = j["columns"];
        for (const auto& row : table.rows) {
            cols["n"].push_back(row.n);
            cols["t"].push_back(table.t);
            cols["trials"].push_back(config.trials);
            cols["mean"].push_back(row.mean);
            cols["variance"].push_back(row.variance);
            cols["stderr"].push_back(row.std_error);
            cols["target"].push_back(table.target);
            cols["abs_error"].push_back(row.abs_error);
        }
        body = j.dump(2) + "\n";
    } else {
        body = csv_preamble(config) + "# target: " + format_double(table.target) + " (" +
               table.target_source + ")\n" + "n,t,trials,mean,variance,stderr,target,abs_error\n";
        for (const auto& row : table.rows) {
            body += join({std::to_string(row.n), format_double(table.t),
                          std::to_string(config.trials), format_double(row.mean),
                          format_double(row.variance), format_double(row.std_error),
                          format_double(table.target), format_double(row.abs_error)}) +
                    "\n";
        }
    }

    std::string plot;
    if (!config.output.empty() && config.format == OutputFormat::Csv) {
        const auto csv = std::filesystem::path(config.output).filename().string();
        plot = gnuplot_header(config, "Convergence of " + request.invariant.name() + " at t = " +
                                          format_double(config.t)) +
               "set xlabel 'n'\n"
               "set logscale x\n"
               "plot '" + csv + "' using 1:4:6 with yerrorbars title 'mean', \\\n"
               "     '' using 1:7 with lines title 'target', \\\n"
               "     '' using 1:5 with linespoints title 'variance'\n";
    }
    emit(config, body, plot, out);
    return kExitOk;
}

int run_selftest(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    if (config.trials < kMinSelftestTrials) {
        err << "selftest needs --trials >= " << kMinSelftestTrials << " (got " << config.trials
            << ")\n";
        return kExitUsage;
    }
    const auto checks = selftest_checks(config.trials, config.seed, config.workers);
    bool all = true;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) {
            out << ": " << c.detail;
        }
        out << "\n";
        all = all && c.passed;
    }
    return all ? kExitOk : kExitSelftestFailed;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        switch (config.subcommand) {
        case Subcommand::Curve:
            return run_curve(config, out, err);
        case Subcommand::Oracle:
            return run_oracle(config, out, err);
        case Subcommand::Converge:
            return run_converge(config, out, err);
        case Subcommand::Selftest:
            return run_selftest(config, out, err);
        }
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

namespace {

unsigned workers_from_env()
{
    const char* env = std::getenv("BETTI_WORKERS");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    unsigned value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("BETTI_WORKERS must be a nonnegative integer, got '" +
                              std::string(text) + "'");
    }
    return value;
}

std::optional<int> parse_max_dim(const std::string& text)
{
    if (text == "auto") {
        return std::nullopt;
    }
    if (text == "full") {
        return kFullDimension;
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) {
        throw InvalidArgument("--max-dim must be auto, full or a positive integer");
    }
    return value;
}

} // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Expectation and variance curves of Betti numbers and Euler characteristic of "
                 "random Vietoris-Rips and Cech complexes"};
    app.require_subcommand(1);

    RunConfig config;
    std::string max_dim = "auto";
    std::string complex = "vr";
    std::string format = "csv";
    std::string from;
    std::optional<unsigned> workers;
    std::vector<CLI::Option*> output_flags;
    std::vector<CLI::Option*> format_flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", config.seed, "Master seed");
        sub->add_option("--workers", workers, "Worker threads (default: $BETTI_WORKERS or all cores)");
        output_flags.push_back(
            sub->add_option("-o,--output", config.output, "Output file (default: stdout)"));
        format_flags.push_back(
            sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"})));
        sub->add_option("--from", from,
                        "Re-run the config embedded in an earlier output (flags other than "
                        "--output, --format and --workers are ignored)");
    };
    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--manifold", config.manifold, "circle, torus or sphere");
        sub->add_option("--torus-dim", config.torus_dim, "Dimension of the flat torus");
        sub->add_option("--complex", complex, "vr or cech")->check(CLI::IsMember({"vr", "cech"}));
        sub->add_option("--invariant", config.invariant, "betti<i> or euler");
        sub->add_option("--trials", config.trials, "Monte Carlo trials");
        sub->add_option("--max-dim", max_dim, "auto, full or a positive integer");
        sub->add_option("--budget", config.simplex_budget, "Simplex budget per complex");
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--n", config.n, "Sample size");
        sub->add_option("--t-min", config.grid.t_min, "First grid point");
        sub->add_option("--t-max", config.grid.t_max, "Last grid point");
        sub->add_option("--steps", config.grid.steps, "Number of grid points");
        sub->add_option("--grid", config.grid.values, "Explicit comma-separated grid")
            ->delimiter(',');
    };

    auto* curve = app.add_subcommand("curve", "Monte Carlo E[T] and Var[T] on a scale grid");
    add_common(curve);
    add_sampling(curve);
    add_grid(curve);

    auto* oracle = app.add_subcommand("oracle", "Exact P(n, r), E[b1], Var[b1] on the circle");
    add_common(oracle);
    add_grid(oracle);

    auto* converge = app.add_subcommand("converge", "Moments at a fixed scale as n grows");
    add_common(converge);
    add_sampling(converge);
    converge->add_option("--t", config.t, "Scale");
    converge->add_option("--n-values", config.n_values, "Comma-separated sample sizes")
        ->delimiter(',');
    converge->add_option("--target", config.target, "Reference value T(M)");

    std::size_t selftest_trials = kDefaultSelftestTrials;
    auto* selftest = app.add_subcommand("selftest", "Fast built-in acceptance checks");
    selftest->add_option("--trials", selftest_trials, "Monte Carlo trials per check");
    selftest->add_option("--seed", config.seed, "Master seed");
    selftest->add_option("--workers", workers, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (curve->parsed()) {
            config.subcommand = Subcommand::Curve;
        } else if (oracle->parsed()) {
            config.subcommand = Subcommand::Oracle;
            config.manifold = "circle";
        } else if (converge->parsed()) {
            config.subcommand = Subcommand::Converge;
        } else {
            config.subcommand = Subcommand::Selftest;
            config.trials = selftest_trials;
        }
        config.complex = parse_complex_kind(complex);
        config.max_dim = parse_max_dim(max_dim);
        config.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        config.workers = workers ? *workers : workers_from_env();

        if (!from.empty()) {
            const auto given = [](const std::vector<CLI::Option*>& flags) {
                return std::ranges::any_of(flags, [](const CLI::Option* o) { return o->count() > 0; });
            };
            RunConfig loaded = load_embedded_config(from);
            loaded.workers = config.workers;
            if (given(output_flags)) {
                loaded.output = config.output;
            }
            if (given(format_flags)) {
                loaded.format = config.format;
            }
            config = loaded;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return run(config, out, err);
}

} // namespace betti::cli
