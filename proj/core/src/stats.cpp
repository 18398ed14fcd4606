#include "cmcs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmcs/errors.hpp"

namespace cmcs {

double mean_of(std::span<const double> values) {
    if (values.empty()) raise(ErrorKind::Domain, "mean of empty set");
    double s = 0.0;
    for (double v : values) s += v;
    return s / double(values.size());
}

double sample_stdev(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const double m = mean_of(values);
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / double(n - 1));
}

double median_of(std::vector<double> values) {
    if (values.empty()) raise(ErrorKind::Domain, "median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double nearest_rank_quantile(const std::vector<double>& sorted_values, double q) {
    const std::size_t n = sorted_values.size();
    if (n == 0) raise(ErrorKind::Domain, "quantile of empty set");
    double rank = std::ceil(q * double(n));
    if (rank < 1.0) rank = 1.0;
    if (rank > double(n)) rank = double(n);
    return sorted_values[static_cast<std::size_t>(rank) - 1];
}

std::vector<double> fractional_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = 0.5 * (double(i + 1) + double(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        raise(ErrorKind::Domain, "spearman needs two equally sized samples");
    const std::vector<double> rx = fractional_ranks(x);
    const std::vector<double> ry = fractional_ranks(y);
    const double mx = mean_of(rx), my = mean_of(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace cmcs
