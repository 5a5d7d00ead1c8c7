#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace rowsu {

/// Deterministic seed derivation: hashes a root seed with a path of stream
/// tags so that nested components (repeat -> draw -> tree) get independent,
/// reproducible streams without sharing generator state.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

/// xoshiro256++ generator with the sampling helpers the pipeline needs.
/// Self-contained so that seeded results are identical across standard
/// library versions and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double next_unit();

    /// Uniform index in [0, n). n must be > 0.
    std::size_t next_index(std::size_t n);

    /// Standard normal deviate (Marsaglia polar method).
    double next_gaussian();

    /// k distinct indices drawn uniformly from [0, n), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rowsu
