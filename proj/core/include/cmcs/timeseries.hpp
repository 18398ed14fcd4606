#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace cmcs {

using CalendarDay = std::chrono::sys_days;

CalendarDay parse_iso_date(const std::string& text);
std::string format_iso_date(CalendarDay day);

/// Daily observations of one named variable. Dates are strictly increasing
/// with no gaps; rate-typed series (name ending in "rate") stay in [0,100].
struct TimeSeries {
    std::string name;
    std::vector<CalendarDay> dates;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Lag-embedded (or otherwise feature-shaped) rows ready for model fitting.
struct SupervisedDataset {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;  // rows x feature_names.size()
    std::vector<double> targets;
    std::size_t lag = 0;

    std::size_t size() const { return rows.size(); }
    std::size_t feature_count() const { return feature_names.size(); }
};

struct DroppedFeature {
    std::string name;
    std::string reason;
};

struct FilterResult {
    SupervisedDataset dataset;
    std::vector<DroppedFeature> dropped;
};

bool is_rate_series(const std::string& name);

/// Parses a daily CSV (first column `date`, ISO-8601; remaining columns
/// numeric) into one TimeSeries per value column. `schema`, when non-empty,
/// lists the value columns that must be present.
std::vector<TimeSeries> load_csv(const std::string& path,
                                 const std::vector<std::string>& schema = {});
std::vector<TimeSeries> load_csv_text(const std::string& text,
                                      const std::vector<std::string>& schema = {});

/// Row t gets features (v[t-lag..t-1]) and target v[t].
SupervisedDataset lag_embed(const TimeSeries& series, std::size_t lag);

/// Keeps features whose |Pearson r| against the target is >= threshold.
/// Zero-variance features are dropped with a recorded reason.
FilterResult correlation_filter(const SupervisedDataset& dataset, double threshold);

/// Chronological head/tail split; head gets round(fraction * rows).
std::pair<SupervisedDataset, SupervisedDataset> split_chronological(const SupervisedDataset& data,
                                                                    double head_fraction);

const TimeSeries* find_series(const std::vector<TimeSeries>& all, const std::string& name);

}  // namespace cmcs
