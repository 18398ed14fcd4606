#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cmcs/linear.hpp"
#include "cmcs/pnn.hpp"
#include "cmcs/timeseries.hpp"

namespace cmcs {

struct ForecastResult {
    std::string model_id;
    std::size_t horizon = 0;
    std::vector<double> values;  // one per future day
    double training_rmse = 0.0;
};

/// A fitted deterministic forecaster (either family), uniformly callable.
struct Forecaster {
    std::string id;
    std::size_t lag = 0;
    std::variant<LinearModel, PnnModel> model;

    double predict(std::span<const double> features) const;
    double training_rmse(const SupervisedDataset& train) const;
};

/// Recursive one-step forecasting: each prediction is appended to the window
/// that produces the next one.
ForecastResult predict_horizon(const Forecaster& model, std::span<const double> seed_window,
                               std::size_t horizon);

/// Log-median RMSE: eps_i = log(median(trials_i)/actual_i),
/// result = sqrt(mean(eps_i^2)). Unitless and scale consistent.
double rmse_log_median(const std::vector<std::vector<double>>& per_time_trials,
                       std::span<const double> actuals);
/// Deterministic forecasts count as one-element trial sets.
double rmse_log_median(std::span<const double> forecasts, std::span<const double> actuals);

enum class CandidateKind { Linear, Pnn };

struct CandidateConfig {
    std::string id;
    CandidateKind kind = CandidateKind::Pnn;
    PnnConfig pnn;
    // Chronological train fraction used for PNN growth control.
    double growth_split = 0.7;
};

struct RankingEntry {
    std::string id;
    double holdout_rmse = 0.0;
    bool fitted = false;
    std::string failure;
};

struct GroomsSelection {
    std::string winner_id;
    std::size_t winner_index = 0;  // into the candidate list
    std::vector<RankingEntry> ranking;  // sorted by RMSE, failures last
    std::vector<Forecaster> fitted;     // parallel to the candidate list (failed slots skipped)
    std::vector<bool> fit_ok;
};

Forecaster fit_candidate(const CandidateConfig& config, const SupervisedDataset& train);

/// Fits every candidate on `train`, scores one-step predictions on the
/// holdout rows with the log-median RMSE, and picks the lowest. Ties go to
/// the earlier candidate; failed fits are excluded but recorded.
GroomsSelection grooms_select(const std::vector<CandidateConfig>& candidates,
                              const SupervisedDataset& train, const SupervisedDataset& holdout);

/// Time-series flavor used by the forecast pipeline: candidates are ranked
/// by the log-median RMSE of a recursive multi-step forecast over the last
/// `holdout_days` of the series.
GroomsSelection grooms_select_series(const std::vector<CandidateConfig>& candidates,
                                     const TimeSeries& series, std::size_t lag,
                                     std::size_t holdout_days);

std::string forecaster_to_json(const Forecaster& model);
Forecaster forecaster_from_json(const std::string& text);

}  // namespace cmcs
