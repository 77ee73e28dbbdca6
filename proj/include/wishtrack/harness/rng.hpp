// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

namespace wishtrack {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based bit generator: output i of the stream keyed by
// (seed, run, step) is splitmix64(key + i * golden). Streams for different
// keys are independent of evaluation order, so MC results do not depend on
// how runs are scheduled across threads.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t run, std::uint64_t step)
        : key_(splitmix64(splitmix64(splitmix64(seed) ^ run) ^ (step * 0xd1b54a32d192ed03ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return splitmix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace wishtrack
