#include "tsforge/common/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace tsforge {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text, std::uint64_t basis) noexcept {
    std::uint64_t h = basis;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view series_id,
                          std::string_view family, std::size_t input_size,
                          std::size_t horizon) noexcept {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ fnv1a64(series_id));
    // Separator keeps ("ab","c") and ("a","bc") apart.
    h = mix64(h ^ fnv1a64(family, 0x84222325cbf29ce4ULL));
    h = mix64(h ^ static_cast<std::uint64_t>(input_size));
    h = mix64(h ^ (static_cast<std::uint64_t>(horizon) << 32));
    return h;
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t counter) noexcept {
    return mix64(mix64(parent) ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

double Rng::normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t bound) noexcept {
    if (bound <= 1) {
        return 0;
    }
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t r = next_u64();
    while (r >= limit) {
        r = next_u64();
    }
    return r % bound;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(idx));
    return idx;
}

}  // namespace tsforge
