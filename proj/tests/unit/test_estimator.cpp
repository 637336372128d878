#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "betti/circle_oracle.hpp"
#include "betti/error.hpp"
#include "betti/estimator.hpp"

namespace betti {
namespace {

CurveRequest circle_b1(std::size_t n, std::vector<double> grid, std::size_t trials)
{
    CurveRequest r;
    r.n = n;
    r.grid = std::move(grid);
    r.trials = trials;
    r.master_seed = 2024;
    return r;
}

TEST(EstimateCurve, TwoPointsHaveNoLoops)
{
    const auto curve = estimate_curve(circle_b1(2, {0.05, 0.15, 0.25, 0.33}, 10000));
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        EXPECT_EQ(curve.mean[i], 0.0);
        EXPECT_EQ(curve.variance[i], 0.0);
    }
}

TEST(EstimateCurve, EulerCharacteristicOfTwoPoints)
{
    auto request = circle_b1(2, {0.1, 0.3, 0.6}, 100000);
    request.invariant = InvariantSpec::euler();
    const auto curve = estimate_curve(request);
    const double expected[] = {1.8, 1.4, 1.0};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(curve.mean[i], expected[i], 4.0 * curve.std_error[i] + 1e-12)
            << "t " << curve.grid[i];
    }
    // At t = 0.6 every pair is joined: chi is exactly 1.
    EXPECT_EQ(curve.variance[2], 0.0);
}

TEST(EstimateCurve, MatchesOracleAtModerateSize)
{
    const auto curve = estimate_curve(circle_b1(8, {0.15, 0.25}, 20000));
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double p = circle_homotopy_prob(8, curve.grid[i]);
        EXPECT_NEAR(curve.mean[i], p, 4.0 * std::sqrt(p * (1 - p) / 20000.0));
    }
}

TEST(EstimateCurve, RejectsInvalidRequests)
{
    EXPECT_THROW(estimate_curve(circle_b1(5, {0.1}, 1)), InvalidArgument);
    EXPECT_THROW(estimate_curve(circle_b1(5, {}, 10)), InvalidArgument);
    EXPECT_THROW(estimate_curve(circle_b1(5, {0.2, 0.1}, 10)), InvalidArgument);
    EXPECT_THROW(estimate_curve(circle_b1(5, {-0.1, 0.1}, 10)), InvalidArgument);
    EXPECT_THROW(estimate_curve(circle_b1(0, {0.1}, 10)), InvalidArgument);

    auto cech_on_sphere = circle_b1(5, {0.1}, 10);
    cech_on_sphere.manifold = ManifoldModel::sphere2();
    cech_on_sphere.complex_kind = ComplexKind::Cech;
    EXPECT_THROW(estimate_curve(cech_on_sphere), InvalidArgument);

    auto truncated_euler = circle_b1(5, {0.1}, 10);
    truncated_euler.invariant = InvariantSpec::euler();
    truncated_euler.max_dim = 2;
    EXPECT_THROW(estimate_curve(truncated_euler), InvalidArgument);
}

TEST(EstimateCurve, BudgetOverflowReportsTrial)
{
    auto request = circle_b1(40, {0.5}, 4);
    request.invariant = InvariantSpec::euler();
    try {
        estimate_curve(request);
        FAIL() << "expected ResourceLimit";
    } catch (const ResourceLimit& e) {
        EXPECT_NE(std::string(e.what()).find("trial 0"), std::string::npos) << e.what();
    }
}

TEST(EstimateCurve, IndependentOfWorkerCount)
{
    auto request = circle_b1(12, {0.05, 0.1, 0.2, 0.3}, 3000);
    request.workers = 1;
    const auto one = estimate_curve(request);
    request.workers = 7;
    const auto seven = estimate_curve(request);
    EXPECT_EQ(one.mean, seven.mean);
    EXPECT_EQ(one.variance, seven.variance);
    EXPECT_EQ(one.std_error, seven.std_error);
}

TEST(EstimateCurve, ComponentCountFallsAlongTheGrid)
{
    // Common random numbers: per trial b0 is nonincreasing in t, so the
    // means must be too.
    auto request = circle_b1(15, {0.0, 0.02, 0.05, 0.1, 0.2}, 2000);
    request.invariant = InvariantSpec::betti(0);
    const auto curve = estimate_curve(request);
    EXPECT_EQ(curve.mean.front(), 15.0);
    for (std::size_t i = 1; i < curve.mean.size(); ++i) {
        EXPECT_LE(curve.mean[i], curve.mean[i - 1]);
    }
    const auto trial = evaluate_trial(request, 3);
    for (std::size_t i = 1; i < trial.size(); ++i) {
        EXPECT_LE(trial[i], trial[i - 1]);
    }
}

TEST(EstimateCurve, CechOnTheCircle)
{
    // Open arcs of radius t < 1/6 cover the circle iff every gap is below
    // 2t, and their nerve then has one loop; otherwise it has none. So the
    // Cech curve at t follows the oracle at 2t.
    const std::size_t trials = 4000;
    auto request = circle_b1(10, {0.06, 0.12}, trials);
    request.complex_kind = ComplexKind::Cech;
    const auto curve = estimate_curve(request);
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double p = circle_homotopy_prob(10, 2.0 * curve.grid[i]);
        EXPECT_NEAR(curve.mean[i], p, 4.0 * std::sqrt(p * (1 - p) / trials));
    }
}

TEST(EstimateCurve, MaxDimDefaults)
{
    EXPECT_EQ(resolve_max_dim(circle_b1(5, {0.1}, 2)), 2);
    auto euler = circle_b1(5, {0.1}, 2);
    euler.invariant = InvariantSpec::euler();
    EXPECT_EQ(resolve_max_dim(euler), kFullDimension);
}

TEST(Convergence, CircleLoopProbabilityApproachesOne)
{
    ConvergenceRequest request;
    request.t = 0.1;
    request.n_values = {10, 25, 50, 100};
    request.trials = 2000;
    request.master_seed = 5;
    request.target = 1.0;
    const auto table = convergence_study(request);
    ASSERT_EQ(table.rows.size(), 4u);
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        EXPECT_LE(table.rows[i].abs_error, table.rows[i - 1].abs_error);
    }
    EXPECT_LT(table.rows.back().variance, 0.02);
}

TEST(Convergence, SphereBecomesConnected)
{
    ConvergenceRequest request;
    request.manifold = ManifoldModel::sphere2();
    request.invariant = InvariantSpec::betti(0);
    request.t = 0.4;
    request.n_values = {50, 100, 200, 400};
    request.trials = 1000;
    request.master_seed = 9;
    request.target = 1.0;
    const auto table = convergence_study(request);
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        EXPECT_LE(table.rows[i].abs_error, table.rows[i - 1].abs_error);
    }
    const auto& last = table.rows.back();
    EXPECT_LE(last.abs_error, 3.0 * last.std_error);

    // At n = 200 the sample is not yet connected: each point is isolated
    // with probability (1 - mu)^(n-1), mu the cap measure, and every
    // isolated point beyond the first component adds to b0 - 1.
    const double mu = request.manifold.ball_measure(request.t);
    const double isolated = 200.0 * std::pow(1.0 - mu, 199.0);
    const auto& row = table.rows[2];
    EXPECT_GE(row.mean - 1.0, isolated - 4.0 * row.std_error);
}

TEST(Convergence, RejectsEmptySizes)
{
    ConvergenceRequest request;
    request.t = 0.1;
    request.trials = 10;
    EXPECT_THROW(convergence_study(request), InvalidArgument);
}

TEST(Lipschitz, ConstantCurveHasZeroSlope)
{
    const std::vector<double> grid{0.0, 0.1, 0.2, 0.5};
    const std::vector<double> values{3.0, 3.0, 3.0, 3.0};
    const auto d = lipschitz_diagnostic(grid, values);
    EXPECT_EQ(d.max_slope, 0.0);
    EXPECT_EQ(d.slopes.size(), 3u);
    EXPECT_TRUE(std::isnan(d.theoretical_bound));
}

TEST(Lipschitz, ExactEulerCurveOfTwoPoints)
{
    std::vector<double> grid;
    std::vector<double> values;
    for (int i = 0; i <= 50; ++i) {
        const double t = i / 100.0;
        grid.push_back(t);
        values.push_back(2.0 * (1.0 - t));
    }
    EXPECT_NEAR(lipschitz_diagnostic(grid, values).max_slope, 2.0, 1e-12);
}

TEST(Lipschitz, OracleSlopeStabilisesUnderRefinement)
{
    auto slope = [](int n, double h) {
        std::vector<double> grid;
        std::vector<double> values;
        for (int i = 0; 0.01 + i * h < 0.33; ++i) {
            const double r = 0.01 + i * h;
            grid.push_back(r);
            values.push_back(circle_homotopy_prob(n, r));
        }
        return lipschitz_diagnostic(grid, values).max_slope;
    };
    // For n <= 3 the probability is identically zero below 1/3.
    for (int n = 4; n <= 20; ++n) {
        const double coarse = slope(n, 1e-3);
        const double fine = slope(n, 1e-4);
        EXPECT_TRUE(std::isfinite(coarse));
        EXPECT_LT(std::fabs(coarse - fine) / fine, 0.05) << "n " << n;
    }
}

TEST(Lipschitz, TheoreticalBoundOnEstimates)
{
    EXPECT_DOUBLE_EQ(theoretical_lipschitz_bound(2, 2.0), 16.0);
    auto request = circle_b1(2, {0.1, 0.2, 0.3}, 100);
    request.invariant = InvariantSpec::euler();
    const auto d = lipschitz_diagnostic(estimate_curve(request));
    EXPECT_DOUBLE_EQ(d.theoretical_bound, 16.0);
    EXPECT_LE(d.max_slope, d.theoretical_bound);
}

TEST(ComplexKind, ParsesNames)
{
    EXPECT_EQ(parse_complex_kind("vr"), ComplexKind::VietorisRips);
    EXPECT_EQ(parse_complex_kind("cech"), ComplexKind::Cech);
    EXPECT_EQ(to_string(ComplexKind::Cech), "cech");
    EXPECT_THROW(parse_complex_kind("alpha"), InvalidArgument);
}

} // namespace
} // namespace betti
