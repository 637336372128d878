#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "betti/cli/run_config.hpp"
#include "betti/manifold.hpp"

namespace betti::cli {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitSelftestFailed = 1,
    kExitUsage = 2,
    kExitResource = 3,
};

inline constexpr std::size_t kMinSelftestTrials = 1000;
inline constexpr std::size_t kDefaultSelftestTrials = 4000;

/// Shortest decimal that round-trips, '.' separator, independent of locale.
std::string format_double(double value);

int run_curve(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_converge(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_selftest(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.subcommand and maps library errors to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing included).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The fast self-test subset: oracle vs Monte Carlo at n = 10, the two-point
/// Euler formula, and Cech/VR interleaving on 100 random circle samples.
std::vector<CheckResult> selftest_checks(std::size_t trials, std::uint64_t seed, unsigned workers);

/// Checks, for a circle sample, at every critical scale r = l_k / 2:
///   Cech(X, r) is a subcomplex of VR(X, 2r);
///   VR(X, 2r) is a subcomplex of Cech(X, r + 1e-9) when 2r < 1/3;
///   Cech(X, r + delta) is a subcomplex of VR(X, 2r) for delta below a
///   quarter of the gap to the next edge scale.
/// Returns a description of the first violation, or nullopt.
std::optional<std::string> interleaving_violation(const PointSample& sample);

} // namespace betti::cli
