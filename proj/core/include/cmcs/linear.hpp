#pragma once

#include <span>
#include <vector>

#include "cmcs/timeseries.hpp"

namespace cmcs {

struct LinearModel {
    double intercept = 0.0;
    std::vector<double> slopes;

    double predict(std::span<const double> features) const {
        double y = intercept;
        for (std::size_t i = 0; i < slopes.size(); ++i) y += slopes[i] * features[i];
        return y;
    }
};

/// Ordinary least squares. Throws a rank-deficiency error on a singular
/// design matrix.
LinearModel fit_linear(const SupervisedDataset& train);

double rmse_on(const LinearModel& model, const SupervisedDataset& data);

}  // namespace cmcs
