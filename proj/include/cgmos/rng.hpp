#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cgmos {

/// Seedable generator with portable output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so uniform reals, bounded
/// indices and normals are derived here directly from engine bits. Streams
/// are split by mixing a master seed with integer tags through std::seed_seq,
/// which makes every stochastic step replayable from (seed, tags).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : Rng(seed, {}) {}
    Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

    /// Child stream; independent of how many draws this generator has made.
    static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
        return Rng(seed, tags);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_index(std::uint64_t bound);

    /// Standard normal draw (Box-Muller, one value per call).
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Child seed for a sub-step, e.g. one fold or one refresh chunk.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    return Rng(seed, tags).next_u64();
}

}  // namespace cgmos
