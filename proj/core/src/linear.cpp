#include "cmcs/linear.hpp"

#include <cmath>

#include "cmcs/errors.hpp"
#include "cmcs/linalg.hpp"

namespace cmcs {

LinearModel fit_linear(const SupervisedDataset& train) {
    const std::size_t n = train.size();
    const std::size_t f = train.feature_count();
    if (n < f + 1)
        raise(ErrorKind::InsufficientData, "fit_linear needs at least features+1 rows");

    const std::size_t k = f + 1;  // intercept column first
    Matrix gram(k, k);
    Vector moment(k, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        Vector x(k, 1.0);
        for (std::size_t j = 0; j < f; ++j) x[j + 1] = train.rows[r][j];
        for (std::size_t i = 0; i < k; ++i) {
            moment[i] += x[i] * train.targets[r];
            for (std::size_t j = 0; j < k; ++j) gram(i, j) += x[i] * x[j];
        }
    }

    Vector beta;
    try {
        beta = solve_linear(gram, moment);
    } catch (const Error&) {
        raise(ErrorKind::RankDeficient, "fit_linear: singular design matrix");
    }

    LinearModel model;
    model.intercept = beta[0];
    model.slopes.assign(beta.begin() + 1, beta.end());
    return model;
}

double rmse_on(const LinearModel& model, const SupervisedDataset& data) {
    double sum = 0.0;
    for (std::size_t r = 0; r < data.size(); ++r) {
        const double e = model.predict(data.rows[r]) - data.targets[r];
        sum += e * e;
    }
    return data.size() ? std::sqrt(sum / double(data.size())) : 0.0;
}

}  // namespace cmcs
