#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "betti/estimator.hpp"
#include "betti/manifold.hpp"

namespace betti::cli {

inline constexpr const char* kFormatVersion = "betti-curve/1";

enum class Subcommand { Curve, Oracle, Converge, Selftest };
enum class OutputFormat { Csv, Json };

/// Either (t_min, t_max, steps) or an explicit list of scales.
struct GridSpec {
    double t_min = 0.0;
    double t_max = 0.0;
    int steps = 1;
    std::vector<double> values;

    /// steps == 1 gives {t_min}; otherwise steps evenly spaced points from
    /// t_min to t_max inclusive. Throws InvalidArgument unless the result is
    /// strictly increasing with t_min >= 0.
    std::vector<double> expand() const;
};

struct RunConfig {
    Subcommand subcommand = Subcommand::Curve;
    std::string manifold = "circle";
    int torus_dim = 2;
    ComplexKind complex = ComplexKind::VietorisRips;
    std::string invariant = "betti1";
    std::size_t n = 20;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    GridSpec grid;
    /// nullopt = what the invariant needs; kFullDimension = full.
    std::optional<int> max_dim;
    /// 0 = hardware concurrency.
    unsigned workers = 0;
    std::size_t simplex_budget = kDefaultSimplexBudget;
    std::string output;
    OutputFormat format = OutputFormat::Csv;

    // converge
    double t = 0.1;
    std::vector<std::size_t> n_values;
    std::optional<double> target;

    ManifoldModel manifold_model() const;
    InvariantSpec invariant_spec() const;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

std::string to_string(Subcommand s);

/// T(M) for the model manifolds, with a short provenance string.
std::pair<double, std::string> reference_value(const ManifoldModel& manifold,
                                               const InvariantSpec& invariant);

/// Loads the config embedded in an output file (CSV "# config:" line or the
/// "config" member of a JSON output) or a bare JSON config file.
RunConfig load_embedded_config(const std::string& path);

} // namespace betti::cli
