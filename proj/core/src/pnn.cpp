#include "cmcs/pnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmcs/errors.hpp"
#include "cmcs/linalg.hpp"

namespace cmcs {
namespace {

constexpr std::size_t kCoeffs = 6;

Vector design_row(double a, double b) { return {1.0, a, b, a * b, a * a, b * b}; }

struct Candidate {
    PnnNeuron neuron;
    double val_rmse = 0.0;
};

// Least squares on column-scaled design (conditioning), optional BFGS polish
// of the squared error, validation RMSE for ranking.
Candidate fit_neuron(std::size_t ia, std::size_t ib, const std::vector<Vector>& pool_train,
                     const std::vector<double>& targets, const std::vector<Vector>& pool_val,
                     const std::vector<double>& val_targets, const PnnConfig& config) {
    const std::size_t n = targets.size();
    std::vector<Vector> rows(n);
    Vector scale(kCoeffs, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        rows[r] = design_row(pool_train[ia][r], pool_train[ib][r]);
        for (std::size_t k = 0; k < kCoeffs; ++k)
            scale[k] = std::max(scale[k], std::abs(rows[r][k]));
    }
    for (std::size_t k = 0; k < kCoeffs; ++k)
        if (scale[k] == 0.0) scale[k] = 1.0;
    for (auto& row : rows)
        for (std::size_t k = 0; k < kCoeffs; ++k) row[k] /= scale[k];

    Vector coeff = solve_least_squares(rows, targets, kCoeffs);

    if (config.bfgs_refine) {
        auto mse = [&](const Vector& c) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double e = dot(rows[r], c) - targets[r];
                s += e * e;
            }
            return s / double(n);
        };
        auto mse_grad = [&](const Vector& c) {
            Vector g(kCoeffs, 0.0);
            for (std::size_t r = 0; r < n; ++r) {
                const double e = dot(rows[r], c) - targets[r];
                for (std::size_t k = 0; k < kCoeffs; ++k) g[k] += 2.0 * e * rows[r][k] / double(n);
            }
            return g;
        };
        BfgsResult refined = bfgs_minimize(mse, GradientFn(mse_grad), coeff, config.refine_options);
        if (refined.value <= mse(coeff)) coeff = refined.minimizer;
    }

    Candidate cand;
    cand.neuron.input_a = ia;
    cand.neuron.input_b = ib;
    for (std::size_t k = 0; k < kCoeffs; ++k) cand.neuron.coeff[k] = coeff[k] / scale[k];

    double err = 0.0;
    for (std::size_t r = 0; r < val_targets.size(); ++r) {
        const double e = cand.neuron.evaluate(pool_val[ia][r], pool_val[ib][r]) - val_targets[r];
        err += e * e;
    }
    cand.val_rmse = std::sqrt(err / double(val_targets.size()));
    cand.neuron.validation_rmse = cand.val_rmse;
    return cand;
}

}  // namespace

double PnnModel::predict(std::span<const double> features) const {
    std::vector<double> previous;
    std::vector<double> current;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        current.clear();
        for (const PnnNeuron& neuron : layers[l]) {
            const double a = neuron.input_a < feature_count ? features[neuron.input_a]
                                                            : previous[neuron.input_a - feature_count];
            const double b = neuron.input_b < feature_count ? features[neuron.input_b]
                                                            : previous[neuron.input_b - feature_count];
            current.push_back(neuron.evaluate(a, b));
        }
        if (l == output_layer) return current[output_index];
        previous = current;
    }
    raise(ErrorKind::Config, "pnn predict: empty model");
}

PnnModel fit_pnn(const SupervisedDataset& train, const SupervisedDataset& validation,
                 const PnnConfig& config) {
    if (train.feature_names != validation.feature_names)
        raise(ErrorKind::Config, "fit_pnn: train and validation feature names differ");
    if (validation.size() == 0) raise(ErrorKind::Config, "fit_pnn: empty validation set");
    if (train.size() < kCoeffs)
        raise(ErrorKind::InsufficientData,
              "fit_pnn: " + std::to_string(train.size()) + " rows cannot determine " +
                  std::to_string(kCoeffs) + " coefficients");

    const std::size_t f = train.feature_count();
    const std::size_t n_train = train.size();
    const std::size_t n_val = validation.size();

    // Column pools: original features first, previous-layer survivors after.
    std::vector<Vector> pool_train(f), pool_val(f);
    for (std::size_t j = 0; j < f; ++j) {
        pool_train[j].resize(n_train);
        pool_val[j].resize(n_val);
        for (std::size_t r = 0; r < n_train; ++r) pool_train[j][r] = train.rows[r][j];
        for (std::size_t r = 0; r < n_val; ++r) pool_val[j][r] = validation.rows[r][j];
    }

    PnnModel model;
    model.feature_count = f;
    double best_so_far = std::numeric_limits<double>::infinity();

    for (std::size_t layer = 0; layer < config.max_layers; ++layer) {
        const std::size_t pool_size = pool_train.size();
        std::vector<Candidate> candidates;
        if (pool_size == 1) {
            candidates.push_back(fit_neuron(0, 0, pool_train, train.targets, pool_val,
                                            validation.targets, config));
        } else {
            for (std::size_t i = 0; i < pool_size; ++i)
                for (std::size_t j = i + 1; j < pool_size; ++j)
                    candidates.push_back(fit_neuron(i, j, pool_train, train.targets, pool_val,
                                                    validation.targets, config));
        }
        std::erase_if(candidates, [](const Candidate& c) { return !std::isfinite(c.val_rmse); });
        if (candidates.empty()) {
            if (model.layers.empty())
                raise(ErrorKind::Divergence, "fit_pnn: every candidate neuron diverged");
            break;
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const Candidate& a, const Candidate& b) { return a.val_rmse < b.val_rmse; });

        // Growth is only accepted while validation error strictly improves.
        if (!model.layers.empty() && candidates.front().val_rmse >= best_so_far) break;

        const std::size_t keep = std::min(config.survivor_count, candidates.size());
        std::vector<PnnNeuron> survivors;
        survivors.reserve(keep);
        for (std::size_t k = 0; k < keep; ++k) survivors.push_back(candidates[k].neuron);

        // Extend the pools with survivor outputs for the next layer.
        std::vector<Vector> next_train(pool_train.begin(), pool_train.begin() + f);
        std::vector<Vector> next_val(pool_val.begin(), pool_val.begin() + f);
        for (const PnnNeuron& s : survivors) {
            Vector col_t(n_train), col_v(n_val);
            for (std::size_t r = 0; r < n_train; ++r)
                col_t[r] = s.evaluate(pool_train[s.input_a][r], pool_train[s.input_b][r]);
            for (std::size_t r = 0; r < n_val; ++r)
                col_v[r] = s.evaluate(pool_val[s.input_a][r], pool_val[s.input_b][r]);
            next_train.push_back(std::move(col_t));
            next_val.push_back(std::move(col_v));
        }
        pool_train = std::move(next_train);
        pool_val = std::move(next_val);

        best_so_far = candidates.front().val_rmse;
        model.layers.push_back(std::move(survivors));
        model.validation_trace.push_back(best_so_far);
    }

    model.output_layer = model.layers.size() - 1;
    model.output_index = 0;
    model.training_rmse = rmse_on(model, train);
    return model;
}

double rmse_on(const PnnModel& model, const SupervisedDataset& data) {
    double sum = 0.0;
    for (std::size_t r = 0; r < data.size(); ++r) {
        const double e = model.predict(data.rows[r]) - data.targets[r];
        sum += e * e;
    }
    return data.size() ? std::sqrt(sum / double(data.size())) : 0.0;
}

}  // namespace cmcs
