#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace tsforge {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a over bytes, used to fold strings into seed derivation.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view text,
                                    std::uint64_t basis = 0xcbf29ce484222325ULL) noexcept;

/// Counter-based seed derivation: identical inputs give identical seeds on every
/// platform, independent of scheduling order.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::string_view series_id,
                                        std::string_view family, std::size_t input_size,
                                        std::size_t horizon) noexcept;

[[nodiscard]] std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t counter) noexcept;

/// Small deterministic generator (SplitMix64 stream). The standard library's
/// distributions are implementation-defined, so sampling is done here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept;
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept;
    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal() noexcept;
    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
    /// Uniform integer in [0, bound) without modulo bias.
    std::uint64_t below(std::uint64_t bound) noexcept;

    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

/// Identity permutation 0..n-1 shuffled by a generator seeded with `seed`.
[[nodiscard]] std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace tsforge
