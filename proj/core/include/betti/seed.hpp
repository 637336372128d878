#pragma once

#include <cstdint>
#include <random>

namespace betti {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the random stream used by trial `trial_index` of a run with
/// `master_seed`: splitmix64(master_seed ^ trial_index). Depends on nothing
/// else, so a trial draws the same points on any worker.
std::uint64_t trial_stream_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept;

/// Per-trial random stream.
class TrialRng {
public:
    TrialRng(std::uint64_t master_seed, std::uint64_t trial_index);

    /// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
    double uniform01();

    double standard_normal();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace betti
