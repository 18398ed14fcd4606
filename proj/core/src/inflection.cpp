#include "cmcs/inflection.hpp"

#include <algorithm>
#include <cmath>

#include "cmcs/errors.hpp"
#include "cmcs/numfmt.hpp"

namespace cmcs {

double trend_delta(const std::vector<double>& window, TrendDirection direction,
                   bool* undefined_flag) {
    if (window.size() != 4)
        raise(ErrorKind::Config, "trend_delta expects the last four daily values");
    const double start = window.front();
    const double end = window.back();
    if (start == 0.0) {
        if (undefined_flag) *undefined_flag = true;
        return 0.0;
    }
    const double change = direction == TrendDirection::Down ? (start - end) / std::abs(start)
                                                            : (end - start) / std::abs(start);
    return std::clamp(change, 0.0, 1.0);
}

SeriesBundle bundle_from(const std::vector<TimeSeries>& series) {
    // The confirmed-increase series may carry either its Table-style full
    // name or the short rule-attribute alias.
    auto pick = [&](std::initializer_list<const char*> names) -> const TimeSeries* {
        for (const char* n : names)
            if (const TimeSeries* s = find_series(series, n)) return s;
        return nullptr;
    };
    const TimeSeries* ndic = pick({"new_daily_increase_confirmed", "ndic"});
    const TimeSeries* current = pick({"current_confirmed"});
    const TimeSeries* cured = pick({"cured_rate"});
    const TimeSeries* death = pick({"death_rate"});
    if (!ndic || !current || !cured || !death)
        raise(ErrorKind::Schema,
              "inflection scoring needs new_daily_increase_confirmed (or ndic), "
              "current_confirmed, cured_rate and death_rate");

    SeriesBundle bundle;
    bundle.dates = ndic->dates;
    bundle.ndic = ndic->values;
    bundle.current_confirmed = current->values;
    bundle.cured_rate = cured->values;
    bundle.death_rate = death->values;
    if (bundle.current_confirmed.size() != bundle.size() ||
        bundle.cured_rate.size() != bundle.size() || bundle.death_rate.size() != bundle.size())
        raise(ErrorKind::Schema, "inflection series lengths differ");
    return bundle;
}

namespace {

std::vector<double> window_of(const std::vector<double>& values, std::size_t t) {
    return {values[t - 3], values[t - 2], values[t - 1], values[t]};
}

}  // namespace

WindowScores score_window(const SeriesBundle& bundle, std::size_t t, const TrendWeights& weights) {
    if (t < 3 || t >= bundle.size())
        raise(ErrorKind::InsufficientData, "score_window: incomplete window at index " +
                                               std::to_string(t));
    if (!(weights.w1 >= 0 && weights.w2 >= 0 && weights.w3 >= 0) ||
        (weights.w1 == 0 && weights.w2 == 0 && weights.w3 == 0))
        raise(ErrorKind::Config, "trend weights must be non-negative and not all zero");

    WindowScores out;
    out.date = bundle.dates[t];
    bool flag = false;
    const double ndic_down = trend_delta(window_of(bundle.ndic, t), TrendDirection::Down, &flag);
    const double ndic_up = trend_delta(window_of(bundle.ndic, t), TrendDirection::Up, &flag);
    const double cur_down =
        trend_delta(window_of(bundle.current_confirmed, t), TrendDirection::Down, &flag);
    const double cur_up =
        trend_delta(window_of(bundle.current_confirmed, t), TrendDirection::Up, &flag);
    const double cured_up =
        trend_delta(window_of(bundle.cured_rate, t), TrendDirection::Up, &flag);
    const double death_up =
        trend_delta(window_of(bundle.death_rate, t), TrendDirection::Up, &flag);

    out.win_score = weights.w1 * ndic_down + weights.w2 * cur_down + weights.w3 * cured_up;
    out.lose_score = weights.w1 * ndic_up + weights.w2 * cur_up + weights.w3 * death_up;
    out.label = out.win_score > out.lose_score ? 1 : 0;
    out.undefined_trend = flag;
    return out;
}

std::vector<WindowScores> score_series(const SeriesBundle& bundle, const TrendWeights& weights) {
    if (bundle.size() < 4)
        raise(ErrorKind::InsufficientData, "inflection scoring needs at least 4 days");
    std::vector<WindowScores> out;
    for (std::size_t t = 3; t < bundle.size(); ++t)
        out.push_back(score_window(bundle, t, weights));
    return out;
}

SupervisedDataset label_series(const SeriesBundle& bundle, const TrendWeights& weights) {
    const std::vector<WindowScores> scores = score_series(bundle, weights);

    SupervisedDataset ds;
    const std::pair<std::string, const std::vector<double>*> sources[] = {
        {"ndic", &bundle.ndic},
        {"current_confirmed", &bundle.current_confirmed},
        {"cured_rate", &bundle.cured_rate},
        {"death_rate", &bundle.death_rate},
    };
    for (const auto& [name, values] : sources) {
        (void)values;
        ds.feature_names.push_back(name);
        for (int k = 1; k <= 3; ++k)
            ds.feature_names.push_back("yester" + std::to_string(k) + "days_" + name);
    }
    ds.lag = 3;

    for (std::size_t t = 3; t < bundle.size(); ++t) {
        std::vector<double> row;
        row.reserve(16);
        for (const auto& [name, values] : sources) {
            (void)name;
            for (int k = 0; k <= 3; ++k) row.push_back((*values)[t - std::size_t(k)]);
        }
        ds.rows.push_back(std::move(row));
        ds.targets.push_back(double(scores[t - 3].label));
    }
    return ds;
}

std::string labeled_dataset_csv(const SeriesBundle& bundle, const SupervisedDataset& dataset) {
    std::string out = "date";
    for (const auto& name : dataset.feature_names) out += "," + name;
    out += ",win\n";
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        out += format_iso_date(bundle.dates[r + 3]);
        for (double v : dataset.rows[r]) out += "," + format_double(v);
        out += "," + format_double(dataset.targets[r]) + "\n";
    }
    return out;
}

std::string inflection_curve_csv(const std::vector<WindowScores>& scores) {
    std::string out = "date,win_score,lose_score,label\n";
    for (const auto& s : scores) {
        out += format_iso_date(s.date) + "," + format_double(s.win_score) + "," +
               format_double(s.lose_score) + "," + std::to_string(s.label) + "\n";
    }
    return out;
}

}  // namespace cmcs
