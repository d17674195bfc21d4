#pragma once

#include <cstdint>
#include <random>

namespace rlf {

/// SplitMix64 step; used to derive independent per-trial stream seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic stream for (seed, stream index), independent of execution order.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream)
        : engine_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

    /// Uniform in [0, 1) built from the top 53 bits, identical on every platform.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [-span, +span].
    double symmetric(double span) { return span * (2.0 * unit() - 1.0); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace rlf
