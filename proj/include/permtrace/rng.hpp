#pragma once

// Counter-based random streams: every draw is a pure function of
// (seed, trial, stream, counter), so trials can run in any order or on any
// thread and still reproduce bit for bit.

#include <cstdint>

namespace permtrace {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
        : key_(splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

    std::uint64_t next() { return splitmix64(key_ ^ splitmix64(counter_++)); }

    /// Uniform on [0, n) without modulo bias (Lemire's method).
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = -n % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace permtrace
