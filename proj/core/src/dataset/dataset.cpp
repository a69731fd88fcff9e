#include "tsforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "tsforge/common/csv.hpp"
#include "tsforge/common/error.hpp"

namespace tsforge {

namespace {

bool looks_numeric(const std::string& cell) {
    double v = 0.0;
    return csv::parse_double(cell, v);
}

}  // namespace

SeriesFormat parse_series_format(const std::string& name) {
    if (name == "m4") {
        return SeriesFormat::m4;
    }
    if (name == "m3") {
        return SeriesFormat::m3;
    }
    throw InvalidArgument("unknown series format '" + name + "' (expected m4 or m3)");
}

IngestResult ingest_series_csv(const std::filesystem::path& path, SeriesFormat /*format*/) {
    // Both monthly layouts reduce to "id, v1, v2, ..." once exported to CSV.
    const auto rows = csv::read_file(path);
    IngestResult result;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && row.size() >= 2 && !looks_numeric(row[1])) {
            continue;
        }
        const std::string id(csv::trim(row.front()));
        if (id.empty()) {
            throw ParseError(path.string() + ": row " + std::to_string(r + 1) +
                             ", column 1: empty series id");
        }
        std::size_t last = row.size();
        while (last > 1 && csv::trim(row[last - 1]).empty()) {
            --last;
        }
        TimeSeries ts;
        ts.id = id;
        ts.values.reserve(last - 1);
        for (std::size_t c = 1; c < last; ++c) {
            double v = 0.0;
            if (!csv::parse_double(row[c], v) || !std::isfinite(v)) {
                throw ParseError(path.string() + ": row " + std::to_string(r + 1) + ", column " +
                                 std::to_string(c + 1) + ": malformed value '" + row[c] + "'");
            }
            ts.values.push_back(v);
        }
        if (!seen.insert(id).second) {
            throw ParseError(path.string() + ": row " + std::to_string(r + 1) +
                             ": duplicate series id '" + id + "'");
        }
        if (ts.size() < kMinSeriesLength) {
            result.rejected.push_back(
                {id, "length " + std::to_string(ts.size()) + " < " +
                         std::to_string(kMinSeriesLength)});
            continue;
        }
        result.series.push_back(std::move(ts));
    }
    return result;
}

void write_series_csv(const std::filesystem::path& path, std::span<const TimeSeries> series) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    for (const auto& ts : series) {
        out << ts.id;
        for (const double v : ts.values) {
            out << ',' << csv::format_double(v);
        }
        out << '\n';
    }
}

SeriesSplit split_series(const TimeSeries& ts, const SplitOptions& options) {
    const std::size_t val = options.validation_length;
    if (val == 0 && !options.allow_empty_validation) {
        throw InvalidArgument("series '" + ts.id +
                              "': empty validation block requires allow_empty_validation");
    }
    const std::size_t required = val + kTestLength + kMinTrainLength;
    if (ts.size() < required) {
        throw InvalidArgument("series '" + ts.id + "' has length " + std::to_string(ts.size()) +
                              "; at least " + std::to_string(required) + " required");
    }
    const std::size_t n = ts.size();
    SeriesSplit split;
    split.test = {n - kTestLength, n};
    split.validation = {n - kTestLength - val, n - kTestLength};
    split.train = {0, n - kTestLength - val};
    return split;
}

std::vector<std::size_t> input_sizes_for_horizon(std::size_t horizon) {
    switch (horizon) {
        case 1:
            return {3, 12};
        case 3:
            return {3, 4, 12};
        case 6:
            return {6, 8, 12};
        case 12:
            return {12, 15};
        default:
            throw InvalidArgument("unsupported horizon " + std::to_string(horizon) +
                                  " (expected 1, 3, 6 or 12)");
    }
}

std::span<const double> SupervisedWindowSet::input(std::size_t row) const {
    if (row >= size()) {
        throw InvalidArgument("window row out of range");
    }
    return std::span<const double>(inputs_).subspan(row * input_size_, input_size_);
}

std::span<const double> SupervisedWindowSet::target(std::size_t row) const {
    if (row >= size()) {
        throw InvalidArgument("window row out of range");
    }
    return std::span<const double>(targets_).subspan(row * horizon_, horizon_);
}

void SupervisedWindowSet::push_back(std::span<const double> input, std::span<const double> target,
                                    std::size_t origin) {
    if (input.size() != input_size_ || target.size() != horizon_) {
        throw ShapeError("window dimensions do not match the set");
    }
    inputs_.insert(inputs_.end(), input.begin(), input.end());
    targets_.insert(targets_.end(), target.begin(), target.end());
    origins_.push_back(origin);
}

void SupervisedWindowSet::append(const SupervisedWindowSet& other) {
    if (other.input_size_ != input_size_ || other.horizon_ != horizon_) {
        throw ShapeError("cannot concatenate window sets of different (w, h)");
    }
    inputs_.insert(inputs_.end(), other.inputs_.begin(), other.inputs_.end());
    targets_.insert(targets_.end(), other.targets_.begin(), other.targets_.end());
    origins_.insert(origins_.end(), other.origins_.begin(), other.origins_.end());
}

SupervisedWindowSet make_supervised_windows(std::span<const double> values, std::size_t input_size,
                                            std::size_t horizon, IndexRange targets_range) {
    if (input_size == 0 || horizon == 0) {
        throw InvalidArgument("input size and horizon must be positive");
    }
    if (targets_range.end > values.size() || targets_range.begin > targets_range.end) {
        throw InvalidArgument("target range does not fit inside the series");
    }
    SupervisedWindowSet windows(input_size, horizon);
    const std::size_t first = std::max(targets_range.begin, input_size);
    for (std::size_t o = first; o + horizon <= targets_range.end; ++o) {
        windows.push_back(values.subspan(o - input_size, input_size), values.subspan(o, horizon),
                          o);
    }
    if (windows.empty()) {
        throw InvalidArgument("no supervised window fits: range [" +
                              std::to_string(targets_range.begin) + ", " +
                              std::to_string(targets_range.end) + ") with w=" +
                              std::to_string(input_size) + ", h=" + std::to_string(horizon));
    }
    return windows;
}

ScalerParams fit_scaler(std::span<const double> train_values) {
    if (train_values.empty()) {
        throw InvalidArgument("cannot fit a scaler on an empty range");
    }
    const auto [lo, hi] = std::minmax_element(train_values.begin(), train_values.end());
    if (!(*hi > *lo)) {
        throw InvalidArgument("degenerate scaler: training range is constant");
    }
    return {*lo, *hi};
}

double scale(double value, const ScalerParams& params, ScaleDirection direction) {
    const double span = params.max - params.min;
    return direction == ScaleDirection::forward ? (value - params.min) / span
                                                : value * span + params.min;
}

std::vector<double> scale(std::span<const double> values, const ScalerParams& params,
                          ScaleDirection direction) {
    if (!(params.max > params.min)) {
        throw InvalidArgument("degenerate scaler parameters");
    }
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [&](double v) { return scale(v, params, direction); });
    return out;
}

std::vector<double> to_network_scale(std::span<const double> values, const ScalerParams& params) {
    auto out = scale(values, params, ScaleDirection::forward);
    for (auto& v : out) {
        v += kNetworkScaleOffset;
    }
    return out;
}

std::vector<double> from_network_scale(std::span<const double> values,
                                       const ScalerParams& params) {
    std::vector<double> shifted(values.begin(), values.end());
    for (auto& v : shifted) {
        v -= kNetworkScaleOffset;
    }
    return scale(shifted, params, ScaleDirection::inverse);
}

SupervisedWindowSet to_network_scale(const SupervisedWindowSet& windows,
                                     const ScalerParams& params) {
    SupervisedWindowSet out(windows.input_size(), windows.horizon());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto in = to_network_scale(windows.input(i), params);
        const auto tg = to_network_scale(windows.target(i), params);
        out.push_back(in, tg, windows.origin(i));
    }
    return out;
}

}  // namespace tsforge
