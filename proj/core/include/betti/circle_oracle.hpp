#pragma once

#include <span>
#include <vector>

namespace betti {

/// Largest sample count accepted by circle_homotopy_prob. The evaluation is
/// exact at any n; this bounds its cost (the integers grow like 53 n bits).
inline constexpr int kMaxOracleSamples = 1024;

/// g(n, x) = sum_{k=0}^{n} (-1)^k C(n, k) (x - k)_+^n, i.e. n! times the
/// Irwin-Hall CDF. Evaluated exactly and rounded once. Returns 0 for x <= 0
/// and n! for x >= n.
double irwin_hall_g(int n, double x);

/// Probability that the Vietoris-Rips complex at scale r of n i.i.d. uniform
/// points on the circle R/Z is homotopy equivalent to the circle.
///
/// Valid for 0 < r < 1/3. The x-integral of g(n-1, (1-x)/r) is done in closed
/// form: substituting u = (1-x)/r turns it into r times the integral of a
/// piecewise polynomial over [1/r - 1, 1/r], which has the antiderivative
/// G(u) = sum (-1)^k C(n-1, k) (u - k)_+^n / n. Since r is a dyadic rational,
/// the whole alternating sum is evaluated in exact integer arithmetic and
/// rounded to double once at the end.
///
/// Throws DomainError outside (0, 1/3), InvalidArgument for n < 1 and
/// PrecisionError for n > kMaxOracleSamples.
double circle_homotopy_prob(int n, double r);

struct CircleOracleEval {
    int n = 0;
    double r = 0.0;
    double p_circle = 0.0;
    /// For r < 1/3 the first Betti number is 0 or 1, so E[b1] = P.
    double expected_b1 = 0.0;
    double variance_b1 = 0.0;
};

CircleOracleEval circle_oracle_eval(int n, double r);

/// Pointwise evaluation on a strictly increasing grid inside (0, 1/3).
std::vector<CircleOracleEval> circle_oracle_curve(int n, std::span<const double> r_grid);

} // namespace betti
