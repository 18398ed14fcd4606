#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cmcs/bfgs.hpp"
#include "cmcs/timeseries.hpp"

namespace cmcs {

/// One bivariate quadratic unit:
///   y = c0 + c1*a + c2*b + c3*a*b + c4*a^2 + c5*b^2
/// Input index < feature_count refers to an original feature; index
/// feature_count + k refers to the k-th survivor of the previous layer.
struct PnnNeuron {
    std::size_t input_a = 0;
    std::size_t input_b = 0;
    std::array<double, 6> coeff{};
    double validation_rmse = 0.0;

    double evaluate(double a, double b) const {
        return coeff[0] + coeff[1] * a + coeff[2] * b + coeff[3] * a * b + coeff[4] * a * a +
               coeff[5] * b * b;
    }
};

/// Self-organizing polynomial network grown layer by layer while the
/// validation error keeps improving.
struct PnnModel {
    std::size_t feature_count = 0;
    std::vector<std::vector<PnnNeuron>> layers;  // survivors per layer
    std::size_t output_layer = 0;
    std::size_t output_index = 0;
    std::vector<double> validation_trace;  // best validation RMSE per accepted layer
    double training_rmse = 0.0;

    double predict(std::span<const double> features) const;
};

struct PnnConfig {
    std::size_t max_layers = 4;
    std::size_t survivor_count = 4;
    bool bfgs_refine = true;
    BfgsOptions refine_options = [] {
        BfgsOptions o;
        o.max_iterations = 40;
        o.gradient_tolerance = 1e-10;
        return o;
    }();
};

/// Grows the network: every layer fits a bivariate quadratic per input pair
/// (least squares warm start, then BFGS refinement on the squared error),
/// keeps the `survivor_count` best by validation RMSE, and stops at the
/// first layer that fails to improve validation error.
PnnModel fit_pnn(const SupervisedDataset& train, const SupervisedDataset& validation,
                 const PnnConfig& config = {});

double rmse_on(const PnnModel& model, const SupervisedDataset& data);

}  // namespace cmcs
