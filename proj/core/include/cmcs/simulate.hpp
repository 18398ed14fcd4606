#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cmcs/stochastic.hpp"

namespace cmcs {

struct DeterministicSource {
    std::vector<double> values;  // one per day, must cover the horizon
    std::string origin;          // optional provenance (forecast file / series)
};

/// Stochastic source: one fixed distribution, a per-day schedule, or the
/// compounding-mean normal.
struct StochasticSource {
    struct Growth {
        double initial = 0.0;
        double daily_rate = 0.0;
        double stdev = 0.0;
    };
    std::variant<Distribution, std::vector<Distribution>, Growth> body{Growth{}};

    Distribution for_day(std::size_t day) const;
};

struct InputBinding {
    std::string variable;
    std::variant<DeterministicSource, StochasticSource> source;

    bool stochastic() const { return std::holds_alternative<StochasticSource>(source); }
};

struct SimulationSpec {
    std::string model = "covid_direct_cost";
    std::vector<InputBinding> bindings;
    std::size_t horizon = 14;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    std::vector<double> extra_levels;  // on top of 0.50 / 0.80 / 0.98
    std::size_t threads = 1;
};

/// A day-evaluable outcome model. `evaluate_day` sees the bound input values
/// in `inputs` order and may throw ErrorKind::ModelEval to abort a trial.
struct SimModel {
    std::vector<std::string> inputs;
    std::function<double(std::span<const double>)> evaluate_day;
};

void register_model(const std::string& name, SimModel model);
bool model_registered(const std::string& name);
const SimModel& lookup_model(const std::string& name);

/// Materialized trials: outcomes, recorded input values, per-trial totals.
struct TrialMatrix {
    std::size_t trials = 0;
    std::size_t horizon = 0;
    std::vector<std::string> variables;  // model input order
    std::vector<bool> variable_stochastic;
    std::vector<double> outcomes;    // trials x horizon
    std::vector<double> draws;       // trials x horizon x variables
    std::vector<double> aggregates;  // per trial, NaN when aborted
    std::vector<std::uint8_t> trial_aborted;
    std::size_t aborted_count = 0;
    std::size_t clamped_draws = 0;

    double outcome(std::size_t trial, std::size_t day) const {
        return outcomes[trial * horizon + day];
    }
    double draw(std::size_t trial, std::size_t day, std::size_t var) const {
        return draws[(trial * horizon + day) * variables.size() + var];
    }
};

struct CertaintyInterval {
    double level = 0.0;
    double low = 0.0;
    double high = 0.0;
    double mean = 0.0;
};

struct Histogram {
    std::vector<double> edges;  // bin count + 1
    std::vector<std::size_t> counts;
    double bin_width = 0.0;
};

struct OutcomeSummary {
    double mean = 0.0;
    double median = 0.0;
    double stdev = 0.0;
    std::vector<CertaintyInterval> certainty_intervals;  // ascending level
    Histogram histogram;
    std::size_t trial_count = 0;
    std::size_t aborted_trials = 0;
    std::size_t clamped_draws = 0;
};

struct SimulationRun {
    TrialMatrix trials;
    OutcomeSummary summary;
};

/// Runs the seeded trials. Per-trial evaluation is a pure function of
/// (spec, trial index), so any thread count produces the identical matrix.
/// Fails with a trial-budget error when more than 0.1% of trials abort.
SimulationRun run_simulation(const SimulationSpec& spec);

/// Central interval by nearest-rank quantiles at (1-level)/2 and
/// (1+level)/2, plus the mean of all aggregates.
CertaintyInterval certainty_interval(std::vector<double> aggregates, double level);

struct SensitivityEntry {
    std::string variable;
    std::size_t day = 0;
    double contribution_pct = 0.0;  // signed; |values| sum to 100 when any input varies
    double rank_correlation = 0.0;
    bool constant = false;
};

/// Signed contribution-to-variance per stochastic (variable, day): squared
/// Spearman rank correlation against the per-trial totals, normalized to
/// 100%, ranked by magnitude.
std::vector<SensitivityEntry> sensitivity_chart(const TrialMatrix& trials);

Histogram freedman_diaconis_histogram(std::vector<double> values);

SimulationSpec parse_simulation_spec(const std::string& json_text);

/// Serialization helpers for the CLI file formats (no manifest lines; the
/// caller prepends those).
std::string trials_csv(const TrialMatrix& matrix);
std::string histogram_csv(const Histogram& histogram);
std::string report_json(const SimulationSpec& spec, const SimulationRun& run,
                        const std::vector<SensitivityEntry>& sensitivity,
                        const std::string& manifest_json);

}  // namespace cmcs
