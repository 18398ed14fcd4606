#pragma once

#include <string>
#include <vector>

#include "cmcs/timeseries.hpp"

namespace cmcs {

struct TrendWeights {
    double w1 = 0.1;
    double w2 = 0.15;
    double w3 = 0.25;
};

struct WindowScores {
    CalendarDay date{};
    double win_score = 0.0;
    double lose_score = 0.0;
    int label = 0;  // 1 iff win_score > lose_score
    bool undefined_trend = false;  // some window start was zero
};

enum class TrendDirection { Up, Down };

/// Relative change over the 3-day window v[t-3..t], clipped to [0,1].
/// A zero window start yields 0 with the flag set.
double trend_delta(const std::vector<double>& window, TrendDirection direction,
                   bool* undefined_flag = nullptr);

/// The four aligned daily series the scoring consumes.
struct SeriesBundle {
    std::vector<CalendarDay> dates;
    std::vector<double> ndic;
    std::vector<double> current_confirmed;
    std::vector<double> cured_rate;
    std::vector<double> death_rate;

    std::size_t size() const { return dates.size(); }
};

SeriesBundle bundle_from(const std::vector<TimeSeries>& series);

/// Scores the window ending at index t (t >= 3):
///   win  = w1*down(ndic) + w2*down(current_confirmed) + w3*up(cured_rate)
///   lose = w1*up(ndic)   + w2*up(current_confirmed)   + w3*up(death_rate)
WindowScores score_window(const SeriesBundle& bundle, std::size_t t, const TrendWeights& weights);

std::vector<WindowScores> score_series(const SeriesBundle& bundle, const TrendWeights& weights);

/// One row per complete window: current plus yester{1,2,3}days_ lags of all
/// four series, target = win/lose label. Row count = days - 3.
SupervisedDataset label_series(const SeriesBundle& bundle, const TrendWeights& weights);

/// CSV with the labeled rows (leading date column, features, `win` target).
std::string labeled_dataset_csv(const SeriesBundle& bundle, const SupervisedDataset& dataset);

/// CSV of the win/lose score curves (date, win_score, lose_score, label).
std::string inflection_curve_csv(const std::vector<WindowScores>& scores);

}  // namespace cmcs
