#pragma once

#include <cstdint>

namespace bifprob {

/// Counter-mode SplitMix64 stream. A (seed, stream) pair fully determines the
/// sequence, so independent substreams can be handed to workers without any
/// shared state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal via Box-Muller (one variate per two uniforms).
    double normal();

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace bifprob
