#include "cmcs/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "cmcs/errors.hpp"
#include "cmcs/stats.hpp"

namespace cmcs {

using nlohmann::json;

double Forecaster::predict(std::span<const double> features) const {
    if (std::holds_alternative<LinearModel>(model))
        return std::get<LinearModel>(model).predict(features);
    return std::get<PnnModel>(model).predict(features);
}

double Forecaster::training_rmse(const SupervisedDataset& train) const {
    if (std::holds_alternative<LinearModel>(model))
        return rmse_on(std::get<LinearModel>(model), train);
    return rmse_on(std::get<PnnModel>(model), train);
}

ForecastResult predict_horizon(const Forecaster& model, std::span<const double> seed_window,
                               std::size_t horizon) {
    if (seed_window.size() != model.lag)
        raise(ErrorKind::Config, "predict_horizon: seed window length " +
                                     std::to_string(seed_window.size()) + " != lag " +
                                     std::to_string(model.lag));
    ForecastResult result;
    result.model_id = model.id;
    result.horizon = horizon;

    std::vector<double> window(seed_window.begin(), seed_window.end());
    for (std::size_t step = 0; step < horizon; ++step) {
        const double next = model.predict(window);
        if (!std::isfinite(next))
            raise(ErrorKind::Divergence,
                  "predict_horizon: non-finite prediction at step " + std::to_string(step + 1));
        result.values.push_back(next);
        window.erase(window.begin());
        window.push_back(next);
    }
    return result;
}

double rmse_log_median(const std::vector<std::vector<double>>& per_time_trials,
                       std::span<const double> actuals) {
    if (per_time_trials.size() != actuals.size() || actuals.empty())
        raise(ErrorKind::Config, "rmse_log_median: mismatched or empty inputs");
    double sum = 0.0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        if (!(actuals[i] > 0.0))
            raise(ErrorKind::Domain, "rmse_log_median: non-positive actual at index " +
                                         std::to_string(i));
        const double med = median_of(per_time_trials[i]);
        if (!(med > 0.0))
            raise(ErrorKind::Domain, "rmse_log_median: non-positive trial median at index " +
                                         std::to_string(i));
        const double eps = std::log(med / actuals[i]);
        sum += eps * eps;
    }
    return std::sqrt(sum / double(actuals.size()));
}

double rmse_log_median(std::span<const double> forecasts, std::span<const double> actuals) {
    std::vector<std::vector<double>> wrapped;
    wrapped.reserve(forecasts.size());
    for (double f : forecasts) wrapped.push_back({f});
    return rmse_log_median(wrapped, actuals);
}

Forecaster fit_candidate(const CandidateConfig& config, const SupervisedDataset& train) {
    Forecaster out;
    out.id = config.id;
    out.lag = train.lag ? train.lag : train.feature_count();
    if (config.kind == CandidateKind::Linear) {
        out.model = fit_linear(train);
    } else {
        auto [grow, val] = split_chronological(train, config.growth_split);
        out.model = fit_pnn(grow, val, config.pnn);
    }
    return out;
}

namespace {

GroomsSelection rank_candidates(const std::vector<CandidateConfig>& candidates,
                                std::vector<Forecaster>&& fitted, std::vector<bool>&& ok,
                                std::vector<std::string>&& failures,
                                const std::vector<double>& rmse) {
    GroomsSelection sel;
    sel.fitted = std::move(fitted);
    sel.fit_ok = std::move(ok);

    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!sel.fit_ok[i]) continue;
        if (best == candidates.size() || rmse[i] < rmse[best]) best = i;
    }
    if (best == candidates.size())
        raise(ErrorKind::Selection, "grooms_select: every candidate failed to fit");
    sel.winner_index = best;
    sel.winner_id = candidates[best].id;

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (sel.fit_ok[i]) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rmse[a] < rmse[b]; });
    for (std::size_t i : order)
        sel.ranking.push_back({candidates[i].id, rmse[i], true, ""});
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (!sel.fit_ok[i])
            sel.ranking.push_back({candidates[i].id, std::numeric_limits<double>::infinity(),
                                   false, failures[i]});
    return sel;
}

}  // namespace

GroomsSelection grooms_select(const std::vector<CandidateConfig>& candidates,
                              const SupervisedDataset& train, const SupervisedDataset& holdout) {
    if (candidates.empty()) raise(ErrorKind::Config, "grooms_select: no candidates");
    if (holdout.size() == 0) raise(ErrorKind::Config, "grooms_select: empty holdout");

    std::vector<Forecaster> fitted(candidates.size());
    std::vector<bool> ok(candidates.size(), false);
    std::vector<std::string> failures(candidates.size());
    std::vector<double> rmse(candidates.size(), 0.0);

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        try {
            fitted[i] = fit_candidate(candidates[i], train);
            std::vector<double> predictions;
            predictions.reserve(holdout.size());
            for (const auto& row : holdout.rows) predictions.push_back(fitted[i].predict(row));
            rmse[i] = rmse_log_median(predictions, holdout.targets);
            ok[i] = true;
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    }
    return rank_candidates(candidates, std::move(fitted), std::move(ok), std::move(failures), rmse);
}

GroomsSelection grooms_select_series(const std::vector<CandidateConfig>& candidates,
                                     const TimeSeries& series, std::size_t lag,
                                     std::size_t holdout_days) {
    if (candidates.empty()) raise(ErrorKind::Config, "grooms_select_series: no candidates");
    if (series.size() <= lag + holdout_days)
        raise(ErrorKind::InsufficientData,
              "series " + series.name + " too short for lag + holdout");

    TimeSeries head = series;
    head.dates.resize(series.size() - holdout_days);
    head.values.resize(series.size() - holdout_days);
    const SupervisedDataset train = lag_embed(head, lag);
    const std::vector<double> actuals(series.values.end() - holdout_days, series.values.end());
    const std::vector<double> seed(head.values.end() - lag, head.values.end());

    std::vector<Forecaster> fitted(candidates.size());
    std::vector<bool> ok(candidates.size(), false);
    std::vector<std::string> failures(candidates.size());
    std::vector<double> rmse(candidates.size(), 0.0);

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        try {
            fitted[i] = fit_candidate(candidates[i], train);
            const ForecastResult fc = predict_horizon(fitted[i], seed, holdout_days);
            rmse[i] = rmse_log_median(fc.values, actuals);
            ok[i] = true;
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    }
    return rank_candidates(candidates, std::move(fitted), std::move(ok), std::move(failures), rmse);
}

namespace {

json neuron_to_json(const PnnNeuron& n) {
    return json{{"input_a", n.input_a},
                {"input_b", n.input_b},
                {"coeff", n.coeff},
                {"validation_rmse", n.validation_rmse}};
}

PnnNeuron neuron_from_json(const json& j) {
    PnnNeuron n;
    n.input_a = j.at("input_a").get<std::size_t>();
    n.input_b = j.at("input_b").get<std::size_t>();
    const auto& c = j.at("coeff");
    for (std::size_t k = 0; k < 6; ++k) n.coeff[k] = c.at(k).get<double>();
    n.validation_rmse = j.value("validation_rmse", 0.0);
    return n;
}

}  // namespace

std::string forecaster_to_json(const Forecaster& model) {
    json j;
    j["id"] = model.id;
    j["lag"] = model.lag;
    if (std::holds_alternative<LinearModel>(model.model)) {
        const auto& lm = std::get<LinearModel>(model.model);
        j["family"] = "linear";
        j["intercept"] = lm.intercept;
        j["slopes"] = lm.slopes;
    } else {
        const auto& pnn = std::get<PnnModel>(model.model);
        j["family"] = "pnn";
        j["feature_count"] = pnn.feature_count;
        j["output_layer"] = pnn.output_layer;
        j["output_index"] = pnn.output_index;
        j["validation_trace"] = pnn.validation_trace;
        j["training_rmse"] = pnn.training_rmse;
        json layers = json::array();
        for (const auto& layer : pnn.layers) {
            json encoded = json::array();
            for (const auto& neuron : layer) encoded.push_back(neuron_to_json(neuron));
            layers.push_back(encoded);
        }
        j["layers"] = layers;
    }
    return j.dump(2);
}

Forecaster forecaster_from_json(const std::string& text) {
    json j = json::parse(text, nullptr, true, true);
    Forecaster out;
    out.id = j.at("id").get<std::string>();
    out.lag = j.at("lag").get<std::size_t>();
    const std::string family = j.at("family").get<std::string>();
    if (family == "linear") {
        LinearModel lm;
        lm.intercept = j.at("intercept").get<double>();
        lm.slopes = j.at("slopes").get<std::vector<double>>();
        out.model = std::move(lm);
    } else if (family == "pnn") {
        PnnModel pnn;
        pnn.feature_count = j.at("feature_count").get<std::size_t>();
        pnn.output_layer = j.at("output_layer").get<std::size_t>();
        pnn.output_index = j.at("output_index").get<std::size_t>();
        pnn.validation_trace = j.value("validation_trace", std::vector<double>{});
        pnn.training_rmse = j.value("training_rmse", 0.0);
        for (const auto& layer : j.at("layers")) {
            std::vector<PnnNeuron> neurons;
            for (const auto& nj : layer) neurons.push_back(neuron_from_json(nj));
            pnn.layers.push_back(std::move(neurons));
        }
        out.model = std::move(pnn);
    } else {
        raise(ErrorKind::Parse, "unknown model family: " + family);
    }
    return out;
}

}  // namespace cmcs
