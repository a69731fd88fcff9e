#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsforge/dataset.hpp"

namespace tsforge::synthetic {

enum class Family {
    seasonal,        ///< level + 12-month sinusoidal pattern + Gaussian noise
    trend_seasonal,  ///< seasonal plus a linear trend
    noisy,           ///< level + Gaussian noise only
};

struct SeriesRecipe {
    Family family = Family::seasonal;
    std::size_t length = 120;
    double level = 100.0;
    double amplitude = 20.0;  ///< seasonal half-range
    double slope = 0.0;       ///< trend per month
    double noise_sd = 3.0;
    double phase = 0.0;       ///< months
};

/// Strictly positive monthly series built from `recipe`.
[[nodiscard]] TimeSeries make_series(const std::string& id, const SeriesRecipe& recipe,
                                     std::uint64_t seed);

[[nodiscard]] std::string to_string(Family family);
[[nodiscard]] Family parse_family(const std::string& name);

/// `count` series cycling through `families` (all three when empty) with
/// randomized levels, amplitudes, phases and noise; ids are "<prefix><index>".
[[nodiscard]] std::vector<TimeSeries> make_corpus(std::size_t count, std::size_t length,
                                                  std::uint64_t seed,
                                                  const std::string& prefix = "S",
                                                  std::span<const Family> families = {});

}  // namespace tsforge::synthetic
