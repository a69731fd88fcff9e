#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tsforge {

inline constexpr std::size_t kSeasonalPeriod = 12;
inline constexpr std::size_t kTestLength = 18;
/// Largest input window (15) plus largest horizon (12) plus the test block.
inline constexpr std::size_t kMinSeriesLength = 42;
/// Minimum train length: one window for w = 15, h = 12.
inline constexpr std::size_t kMinTrainLength = 27;
inline constexpr std::size_t kDefaultValidationLength = 18;

/// One monthly series.
struct TimeSeries {
    std::string id;
    std::vector<double> values;
    std::size_t period = kSeasonalPeriod;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Half-open index interval [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
    [[nodiscard]] bool empty() const noexcept { return end <= begin; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct SeriesSplit {
    IndexRange train;
    IndexRange validation;
    IndexRange test;
};

enum class SeriesFormat { m4, m3 };

struct RejectedSeries {
    std::string id;
    std::string reason;
};

struct IngestResult {
    std::vector<TimeSeries> series;
    std::vector<RejectedSeries> rejected;
};

/// Reads "id, v1, v2, ..., [trailing empties]" rows. A header row is detected by a
/// non-numeric second cell. Malformed cells throw ParseError naming row and column;
/// series shorter than kMinSeriesLength are returned in `rejected`.
[[nodiscard]] IngestResult ingest_series_csv(const std::filesystem::path& path,
                                             SeriesFormat format = SeriesFormat::m4);

/// Writes series in the same layout ingest_series_csv reads (no header, %.17g values).
void write_series_csv(const std::filesystem::path& path, std::span<const TimeSeries> series);

[[nodiscard]] SeriesFormat parse_series_format(const std::string& name);

struct SplitOptions {
    std::size_t validation_length = kDefaultValidationLength;
    /// validation_length == 0 is rejected unless this is set.
    bool allow_empty_validation = false;
};

/// test = final 18 points; validation = the block before it; train = the rest.
[[nodiscard]] SeriesSplit split_series(const TimeSeries& ts, const SplitOptions& options = {});

/// Input-window candidates per horizon: the horizon itself, 1.25 times it (rounded
/// up) and 12 months; for h = 1 the set used is {3, 12}.
[[nodiscard]] std::vector<std::size_t> input_sizes_for_horizon(std::size_t horizon);

/// Rows of (input window -> h-step target) pairs with stride 1.
class SupervisedWindowSet {
public:
    SupervisedWindowSet() = default;
    SupervisedWindowSet(std::size_t input_size, std::size_t horizon)
        : input_size_(input_size), horizon_(horizon) {}

    [[nodiscard]] std::size_t input_size() const noexcept { return input_size_; }
    [[nodiscard]] std::size_t horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t size() const noexcept { return origins_.size(); }
    [[nodiscard]] bool empty() const noexcept { return origins_.empty(); }

    [[nodiscard]] std::span<const double> input(std::size_t row) const;
    [[nodiscard]] std::span<const double> target(std::size_t row) const;
    [[nodiscard]] std::size_t origin(std::size_t row) const { return origins_.at(row); }
    [[nodiscard]] const std::vector<std::size_t>& origins() const noexcept { return origins_; }

    void push_back(std::span<const double> input, std::span<const double> target,
                   std::size_t origin);
    /// Appends all rows of `other` (dimensions must match).
    void append(const SupervisedWindowSet& other);

private:
    std::size_t input_size_ = 0;
    std::size_t horizon_ = 0;
    std::vector<double> inputs_;
    std::vector<double> targets_;
    std::vector<std::size_t> origins_;
};

/// One row per origin o in `targets_range` with values[o-w, o) and values[o, o+h)
/// both defined and the targets inside the range. Inputs may reach before the
/// range start. Throws InvalidArgument if no origin qualifies.
[[nodiscard]] SupervisedWindowSet make_supervised_windows(std::span<const double> values,
                                                          std::size_t input_size,
                                                          std::size_t horizon,
                                                          IndexRange targets_range);

struct ScalerParams {
    double min = 0.0;
    double max = 1.0;

    friend bool operator==(const ScalerParams&, const ScalerParams&) = default;
};

enum class ScaleDirection { forward, inverse };

/// Min-max scaler over the training range; constant input throws InvalidArgument.
[[nodiscard]] ScalerParams fit_scaler(std::span<const double> train_values);

/// forward: (x - min) / (max - min); inverse undoes it.
[[nodiscard]] std::vector<double> scale(std::span<const double> values,
                                        const ScalerParams& params, ScaleDirection direction);
[[nodiscard]] double scale(double value, const ScalerParams& params, ScaleDirection direction);

/// Networks see min-max values shifted into [0.1, 1.1] so the relative-error loss
/// never divides by a value near zero for in-range data.
inline constexpr double kNetworkScaleOffset = 0.1;

[[nodiscard]] std::vector<double> to_network_scale(std::span<const double> values,
                                                   const ScalerParams& params);
[[nodiscard]] std::vector<double> from_network_scale(std::span<const double> values,
                                                     const ScalerParams& params);

/// Windows whose values were all mapped by to_network_scale (origins unchanged).
[[nodiscard]] SupervisedWindowSet to_network_scale(const SupervisedWindowSet& windows,
                                                   const ScalerParams& params);

}  // namespace tsforge
