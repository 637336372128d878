#include <algorithm>
#include <cmath>
#include <sstream>

#include "betti/circle_oracle.hpp"
#include "betti/cli/commands.hpp"
#include "betti/complex.hpp"
#include "betti/estimator.hpp"

namespace betti::cli {

namespace {

constexpr double kInterleavingSlack = 1e-9;

std::string show(double x)
{
    return format_double(x);
}

CheckResult oracle_check(std::size_t trials, std::uint64_t seed, unsigned workers)
{
    CurveRequest request;
    request.n = 10;
    request.grid = {0.12, 0.18, 0.24, 0.30};
    request.trials = trials;
    request.master_seed = seed;
    request.workers = workers;
    const CurveEstimate curve = estimate_curve(request);

    CheckResult result{"oracle_vs_montecarlo_n10", true, {}};
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double p = circle_homotopy_prob(10, curve.grid[i]);
        const double tolerance = 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
        if (std::fabs(curve.mean[i] - p) > tolerance) {
            result.passed = false;
            result.detail = "r = " + show(curve.grid[i]) + ": mean " + show(curve.mean[i]) +
                            " vs P = " + show(p) + " (tolerance " + show(tolerance) + ")";
            break;
        }
    }
    return result;
}

CheckResult euler_check(std::size_t trials, std::uint64_t seed, unsigned workers)
{
    CurveRequest request;
    request.invariant = InvariantSpec::euler();
    request.n = 2;
    request.grid = {0.1, 0.25, 0.4, 0.6};
    request.trials = trials;
    request.master_seed = seed;
    request.workers = workers;
    const CurveEstimate curve = estimate_curve(request);

    CheckResult result{"euler_n2_formula", true, {}};
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double t = curve.grid[i];
        const double expected = t <= 0.5 ? 2.0 * (1.0 - t) : 1.0;
        const double tolerance = 4.0 * curve.std_error[i];
        if (std::fabs(curve.mean[i] - expected) > tolerance) {
            result.passed = false;
            result.detail = "t = " + show(t) + ": mean " + show(curve.mean[i]) + " vs " +
                            show(expected) + " (tolerance " + show(tolerance) + ")";
            break;
        }
    }
    return result;
}

CheckResult interleaving_check(std::uint64_t seed)
{
    CheckResult result{"interleaving", true, {}};
    const ManifoldModel circle = ManifoldModel::circle();
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + trial % 6;
        const PointSample points = sample(circle, n, seed ^ 0x5e1f7e57ULL, trial);
        if (auto violation = interleaving_violation(points)) {
            result.passed = false;
            result.detail = "sample " + std::to_string(trial) + ": " + *violation;
            break;
        }
    }
    return result;
}

} // namespace

std::optional<std::string> interleaving_violation(const PointSample& points)
{
    const FiltrationScales scales = edge_scales(points);
    for (std::size_t k = 1; k < scales.scales.size(); ++k) {
        const double length = scales.scales[k];
        if (length <= 0.0) {
            continue;
        }
        const double r = 0.5 * length;
        double gap = kInterleavingSlack;
        for (std::size_t j = k + 1; j < scales.scales.size(); ++j) {
            if (scales.scales[j] > length) {
                gap = std::min(gap, 0.25 * (scales.scales[j] - length));
                break;
            }
        }
        const SimplicialComplex vr = vr_complex(points, 2.0 * r);
        if (!cech_complex_circle(points, r).is_subcomplex_of(vr)) {
            return "Cech(X, " + show(r) + ") is not contained in VR(X, " + show(2.0 * r) + ")";
        }
        if (2.0 * r < 1.0 / 3.0 &&
            !vr.is_subcomplex_of(cech_complex_circle(points, r + kInterleavingSlack))) {
            return "VR(X, " + show(2.0 * r) + ") is not contained in Cech(X, r + 1e-9)";
        }
        if (!cech_complex_circle(points, r + gap).is_subcomplex_of(vr)) {
            return "edge created at scale " + show(length) + " is missing from VR(X, " +
                   show(length) + ")";
        }
    }
    return std::nullopt;
}

std::vector<CheckResult> selftest_checks(std::size_t trials, std::uint64_t seed, unsigned workers)
{
    return {oracle_check(trials, seed, workers), euler_check(trials, seed, workers),
            interleaving_check(seed)};
}

} // namespace betti::cli
