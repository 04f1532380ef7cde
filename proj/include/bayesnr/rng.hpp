#pragma once

#include <cstdint>

namespace bayesnr {

/// Deterministic uniform stream over [0,1) backed by SplitMix64
/// (Steele, Lea, Flood 2014). The generator is a 64-bit counter pushed
/// through a fixed permutation, so a seed pins the entire stream and
/// golden outputs stay byte-reproducible across platforms.
///
/// Streams are value types: copying one forks an identical replay, and
/// fork(k) derives an independent substream for worker k.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Deterministic substream: child k of the current state. Children of
    /// distinct k (or of different parent states) do not collide in practice.
    UniformStream fork(std::uint64_t k) const {
        UniformStream child(state_ ^ (0xD1B54A32D192ED03ULL * (k + 1)));
        child.next_u64();  // decorrelate from the parent counter
        return child;
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace bayesnr
