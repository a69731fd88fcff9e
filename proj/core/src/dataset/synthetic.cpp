#include "tsforge/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "tsforge/common/error.hpp"
#include "tsforge/common/rng.hpp"

namespace tsforge::synthetic {

TimeSeries make_series(const std::string& id, const SeriesRecipe& recipe, std::uint64_t seed) {
    Rng rng(seed);
    TimeSeries ts;
    ts.id = id;
    ts.values.resize(recipe.length);
    const double amp = recipe.family == Family::noisy ? 0.0 : recipe.amplitude;
    const double slope = recipe.family == Family::trend_seasonal ? recipe.slope : 0.0;
    for (std::size_t t = 0; t < recipe.length; ++t) {
        const double tt = static_cast<double>(t);
        const double season =
            amp * std::sin(2.0 * std::numbers::pi * (tt + recipe.phase) / 12.0);
        const double v = recipe.level + slope * tt + season + rng.normal(0.0, recipe.noise_sd);
        ts.values[t] = std::max(v, 1.0);
    }
    return ts;
}

std::string to_string(Family family) {
    switch (family) {
        case Family::seasonal:
            return "seasonal";
        case Family::trend_seasonal:
            return "trend_seasonal";
        case Family::noisy:
            return "noisy";
    }
    return "unknown";
}

Family parse_family(const std::string& name) {
    for (const auto f : {Family::seasonal, Family::trend_seasonal, Family::noisy}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw InvalidArgument("unknown synthetic family '" + name + "'");
}

std::vector<TimeSeries> make_corpus(std::size_t count, std::size_t length, std::uint64_t seed,
                                    const std::string& prefix, std::span<const Family> families) {
    static constexpr std::array<Family, 3> kAll{Family::seasonal, Family::trend_seasonal,
                                                Family::noisy};
    if (families.empty()) {
        families = kAll;
    }
    std::vector<TimeSeries> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, i));
        SeriesRecipe r;
        r.length = length;
        r.family = families[i % families.size()];
        r.level = rng.uniform(200.0, 2000.0);
        r.amplitude = r.level * rng.uniform(0.05, 0.3);
        r.slope = r.level * rng.uniform(-0.002, 0.006);
        r.noise_sd = r.level * rng.uniform(0.01, 0.05);
        r.phase = rng.uniform(0.0, 12.0);
        out.push_back(make_series(prefix + std::to_string(i + 1), r, rng.next_u64()));
    }
    return out;
}

}  // namespace tsforge::synthetic
