#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "betti/complex.hpp"
#include "betti/homology.hpp"
#include "betti/manifold.hpp"

namespace betti {

enum class ComplexKind { VietorisRips, Cech };

std::string to_string(ComplexKind kind);
/// "vr" or "cech".
ComplexKind parse_complex_kind(std::string_view text);

struct CurveRequest {
    ManifoldModel manifold = ManifoldModel::circle();
    ComplexKind complex_kind = ComplexKind::VietorisRips;
    InvariantSpec invariant = InvariantSpec::betti(1);
    std::size_t n = 0;
    std::vector<double> grid;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    /// Build dimension; defaults to what the invariant needs.
    std::optional<int> max_dim;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned workers = 1;
    std::size_t simplex_budget = kDefaultSimplexBudget;
};

/// Monte Carlo estimate of t -> E[T(X_n, t)] and Var[T(X_n, t)].
struct CurveEstimate {
    ManifoldModel manifold = ManifoldModel::circle();
    InvariantSpec invariant;
    ComplexKind complex_kind = ComplexKind::VietorisRips;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    int max_dim = kFullDimension;
    std::vector<double> grid;
    std::vector<double> mean;
    /// Unbiased (trials - 1) sample variance.
    std::vector<double> variance;
    /// sqrt(variance / trials).
    std::vector<double> std_error;
};

/// Validates `request` and returns the build dimension it resolves to.
int resolve_max_dim(const CurveRequest& request);

/// T evaluated at every grid point on the single sample of trial
/// `trial_index`. This is the unit of work estimate_curve distributes.
std::vector<double> evaluate_trial(const CurveRequest& request, std::uint64_t trial_index);

/// Draws one sample per trial and evaluates T on it at every grid point
/// (common random numbers across t). Trials run on `workers` threads but are
/// aggregated in trial order, so the result does not depend on the worker
/// count. Any failed trial aborts the whole run.
CurveEstimate estimate_curve(const CurveRequest& request);

struct ConvergenceRow {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    double abs_error = 0.0;
};

struct ConvergenceTable {
    double t = 0.0;
    double target = 0.0;
    std::string target_source;
    std::vector<ConvergenceRow> rows;
};

struct ConvergenceRequest {
    ManifoldModel manifold = ManifoldModel::circle();
    ComplexKind complex_kind = ComplexKind::VietorisRips;
    InvariantSpec invariant = InvariantSpec::betti(1);
    double t = 0.0;
    std::vector<std::size_t> n_values;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    double target = 0.0;
    std::string target_source;
    std::optional<int> max_dim;
    unsigned workers = 1;
    std::size_t simplex_budget = kDefaultSimplexBudget;
};

/// One single-point estimate_curve run per n, annotated with |mean - target|.
ConvergenceTable convergence_study(const ConvergenceRequest& request);

struct LipschitzDiagnostic {
    double max_slope = 0.0;
    /// The maximum is attained on [grid[argmax], grid[argmax + 1]].
    std::size_t argmax = 0;
    std::vector<double> slopes;
    /// 2 C(n, 2) f(2^n) K with f = id. Reference only, never a gate; NaN when
    /// no sample size is attached.
    double theoretical_bound = 0.0;
};

/// Discrete slopes |v_{i+1} - v_i| / (t_{i+1} - t_i) of an arbitrary curve.
LipschitzDiagnostic lipschitz_diagnostic(std::span<const double> grid,
                                         std::span<const double> values);
LipschitzDiagnostic lipschitz_diagnostic(const CurveEstimate& curve);

double theoretical_lipschitz_bound(std::size_t n, double ball_measure_lipschitz);

} // namespace betti
