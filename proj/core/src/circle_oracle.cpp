#include "betti/circle_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <gmpxx.h>

#include "betti/error.hpp"

namespace betti {
namespace {

/// A nonnegative dyadic rational num / 2^shift holding a double exactly.
struct Dyadic {
    mpz_class num;
    unsigned long shift = 0;
};

Dyadic to_dyadic(double x)
{
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);
    mpz_class num(std::ldexp(mantissa, 53));
    const int power = exponent - 53;
    if (power >= 0) {
        num <<= static_cast<unsigned long>(power);
        return {num, 0};
    }
    return {num, static_cast<unsigned long>(-power)};
}

/// num / 2^shift rounded to double (truncated mantissa, <= 1 ulp).
double to_double(const mpz_class& num, unsigned long shift)
{
    if (num == 0) {
        return 0.0;
    }
    long exponent = 0;
    const double mantissa = mpz_get_d_2exp(&exponent, num.get_mpz_t());
    return std::ldexp(mantissa, static_cast<int>(exponent - static_cast<long>(shift)));
}

mpz_class power(const mpz_class& base, int exponent)
{
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exponent));
    return out;
}

mpz_class binomial(int n, int k)
{
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

std::string describe(double r)
{
    std::ostringstream out;
    out.precision(17);
    out << r;
    return out.str();
}

void check_domain(double r)
{
    if (!(r > 0.0 && r < 1.0 / 3.0)) {
        throw DomainError("scale r = " + describe(r) + " is outside the validity domain (0, 1/3)");
    }
}

} // namespace

double irwin_hall_g(int n, double x)
{
    if (n < 0) {
        throw InvalidArgument("irwin_hall_g needs n >= 0");
    }
    if (!(x > 0.0)) {
        return 0.0;
    }
    if (x >= n) {
        mpz_class factorial;
        mpz_fac_ui(factorial.get_mpz_t(), static_cast<unsigned long>(n));
        return factorial.get_d();
    }
    // x = X / 2^s, so (x - k)^n = (X - k 2^s)^n / 2^(s n).
    const Dyadic xd = to_dyadic(x);
    const mpz_class unit = mpz_class(1) << xd.shift;
    mpz_class sum = 0;
    for (int k = 0; k <= n; ++k) {
        const mpz_class base = xd.num - k * unit;
        if (base <= 0) {
            break;
        }
        const mpz_class term = binomial(n, k) * power(base, n);
        if (k % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return to_double(sum, xd.shift * static_cast<unsigned long>(n));
}

double circle_homotopy_prob(int n, double r)
{
    check_domain(r);
    if (n < 1) {
        throw InvalidArgument("circle_homotopy_prob needs n >= 1");
    }
    if (n > kMaxOracleSamples) {
        throw PrecisionError("n = " + std::to_string(n) + " exceeds the oracle limit " +
                             std::to_string(kMaxOracleSamples));
    }
    // With r = R / D, D = 2^s:
    //   P = D^-n sum_{k=0}^{n-1} (-1)^k C(n-1, k) [A^n - B^n - n R B^(n-1)]
    //   A = (D - k R)_+, B = (D - (k + 1) R)_+,
    // an exact integer sum.
    const Dyadic rd = to_dyadic(r);
    const mpz_class denominator = mpz_class(1) << rd.shift;
    const int m = n - 1;
    mpz_class sum = 0;
    for (int k = 0; k <= m; ++k) {
        const mpz_class a = denominator - k * rd.num;
        if (a <= 0) {
            break;
        }
        const mpz_class b = denominator - (k + 1) * rd.num;
        mpz_class bracket = power(a, n);
        if (b > 0) {
            bracket -= power(b, n) + n * rd.num * power(b, n - 1);
        }
        if (k % 2 == 0) {
            sum += binomial(m, k) * bracket;
        } else {
            sum -= binomial(m, k) * bracket;
        }
    }
    return to_double(sum, rd.shift * static_cast<unsigned long>(n));
}

CircleOracleEval circle_oracle_eval(int n, double r)
{
    const double p = circle_homotopy_prob(n, r);
    return {n, r, p, p, p * (1.0 - p)};
}

std::vector<CircleOracleEval> circle_oracle_curve(int n, std::span<const double> r_grid)
{
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        check_domain(r_grid[i]);
        if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
            throw InvalidArgument("oracle grid must be strictly increasing (r = " +
                                  describe(r_grid[i]) + " follows " + describe(r_grid[i - 1]) +
                                  ")");
        }
    }
    std::vector<CircleOracleEval> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        out.push_back(circle_oracle_eval(n, r));
    }
    return out;
}

} // namespace betti
