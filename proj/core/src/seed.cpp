#include "betti/seed.hpp"

namespace betti {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_stream_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept
{
    return splitmix64(master_seed ^ trial_index);
}

TrialRng::TrialRng(std::uint64_t master_seed, std::uint64_t trial_index)
    : engine_(trial_stream_seed(master_seed, trial_index))
{
}

double TrialRng::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double TrialRng::standard_normal()
{
    return normal_(engine_);
}

} // namespace betti
