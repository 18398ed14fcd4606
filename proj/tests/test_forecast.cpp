#include <doctest.h>

#include <cmath>
#include <random>

#include "cmcs/errors.hpp"
#include "cmcs/forecast.hpp"
#include "oracles.hpp"

using namespace cmcs;

namespace {

double unit_draw(std::mt19937_64& gen) { return double(gen()) * 0x1.0p-64; }

SupervisedDataset dataset(std::vector<std::string> names,
                          std::vector<std::vector<double>> rows, std::vector<double> targets,
                          std::size_t lag = 0) {
    SupervisedDataset ds;
    ds.feature_names = std::move(names);
    ds.rows = std::move(rows);
    ds.targets = std::move(targets);
    ds.lag = lag;
    return ds;
}

}  // namespace

TEST_CASE("fit_linear recovers an exact affine relation") {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (double x = 0; x < 8; ++x) {
        rows.push_back({x});
        y.push_back(2.0 * x + 1.0);
    }
    const LinearModel m = fit_linear(dataset({"x"}, rows, y));
    CHECK(m.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.slopes[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fit_linear on a constant target gives zero slope and the mean") {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (double x = 0; x < 6; ++x) {
        rows.push_back({x});
        y.push_back(7.5);
    }
    const LinearModel m = fit_linear(dataset({"x"}, rows, y));
    CHECK(std::abs(m.slopes[0]) < 1e-12);
    CHECK(m.intercept == doctest::Approx(7.5));
}

TEST_CASE("fit_linear matches the normal-equations oracle on a random full-rank system") {
    std::mt19937_64 gen(321);
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    oracle::Mat design;
    for (int r = 0; r < 20; ++r) {
        std::vector<double> x{2 * unit_draw(gen) - 1, 2 * unit_draw(gen) - 1,
                              2 * unit_draw(gen) - 1};
        y.push_back(1.5 - 0.5 * x[0] + 2.0 * x[1] + 0.3 * x[2] + 0.01 * (unit_draw(gen) - 0.5));
        design.push_back({1.0, x[0], x[1], x[2]});
        rows.push_back(std::move(x));
    }
    const auto ds = dataset({"a", "b", "c"}, rows, y);
    const LinearModel m = fit_linear(ds);
    const oracle::Vec beta = oracle::normal_equations_fit(design, y);
    CHECK(std::abs(m.intercept - beta[0]) < 1e-8);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(m.slopes[std::size_t(j)] - beta[std::size_t(j) + 1]) < 1e-8);

    // Residuals orthogonal to every design column.
    for (std::size_t col = 0; col < 4; ++col) {
        double s = 0.0;
        for (std::size_t r = 0; r < 20; ++r)
            s += design[r][col] * (y[r] - m.predict(ds.rows[r]));
        CHECK(std::abs(s) < 1e-8);
    }
}

TEST_CASE("fit_linear raises rank deficiency on a singular design") {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (double x = 0; x < 8; ++x) {
        rows.push_back({x, 2.0 * x});  // second column is a multiple of the first
        y.push_back(x);
    }
    try {
        fit_linear(dataset({"a", "b"}, rows, y));
        FAIL("expected rank deficiency");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RankDeficient);
    }
}

namespace {

std::pair<SupervisedDataset, SupervisedDataset> grid_data(
    const std::function<double(double, double)>& f) {
    std::vector<std::vector<double>> train_rows, val_rows;
    std::vector<double> train_y, val_y;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double a = double(i), b = double(j);
            train_rows.push_back({a, b});
            train_y.push_back(f(a, b));
        }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double a = double(i) + 0.5, b = double(j) + 0.5;
            val_rows.push_back({a, b});
            val_y.push_back(f(a, b));
        }
    return {dataset({"x1", "x2"}, train_rows, train_y),
            dataset({"x1", "x2"}, val_rows, val_y)};
}

}  // namespace

TEST_CASE("pnn reproduces a target equal to one feature exactly") {
    auto [train, val] = grid_data([](double a, double) { return a; });
    const PnnModel model = fit_pnn(train, val);
    CHECK(model.training_rmse < 1e-9);
}

TEST_CASE("pnn fits a bivariate quadratic exactly, like the normal-equations oracle") {
    auto f = [](double a, double b) { return 1.0 + 2.0 * a + 3.0 * a * b; };
    auto [train, val] = grid_data(f);
    const PnnModel model = fit_pnn(train, val);
    CHECK(model.training_rmse <= 1e-6);

    // Oracle: one bivariate quadratic neuron solved by normal equations has
    // zero residual on this target.
    oracle::Mat design;
    oracle::Vec y;
    for (std::size_t r = 0; r < train.size(); ++r) {
        const double a = train.rows[r][0], b = train.rows[r][1];
        design.push_back({1.0, a, b, a * b, a * a, b * b});
        y.push_back(train.targets[r]);
    }
    const oracle::Vec coeff = oracle::normal_equations_fit(design, y);
    double residual = 0.0;
    for (std::size_t r = 0; r < design.size(); ++r)
        residual += std::pow(oracle::dot(design[r], coeff) - y[r], 2);
    CHECK(std::sqrt(residual / double(design.size())) < 1e-9);
}

TEST_CASE("pnn beats the linear baseline on a sine target") {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) {
        const double x = -2.0 + 4.0 * double(i) / 49.0;
        rows.push_back({x, x * 0.5});
        y.push_back(std::sin(x));
    }
    const auto train = dataset({"x1", "x2"}, rows, y);
    const auto [grow, val] = split_chronological(train, 0.7);
    const PnnModel pnn = fit_pnn(grow, val);
    const LinearModel lin = fit_linear(train);
    CHECK(rmse_on(pnn, train) < rmse_on(lin, train));
}

TEST_CASE("pnn validation trace is non-increasing and bounded by the best single neuron") {
    std::mt19937_64 gen(55);
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 80; ++i) {
        const double a = 2 * unit_draw(gen) - 1, b = 2 * unit_draw(gen) - 1,
                     c = 2 * unit_draw(gen) - 1;
        rows.push_back({a, b, c});
        y.push_back(std::tanh(2 * a) + a * b - 0.5 * c * c * c + 0.05 * (unit_draw(gen) - 0.5));
    }
    const auto all = dataset({"a", "b", "c"}, rows, y);
    const auto [train, val] = split_chronological(all, 0.7);
    const PnnModel model = fit_pnn(train, val);
    REQUIRE(!model.validation_trace.empty());
    for (std::size_t i = 1; i < model.validation_trace.size(); ++i)
        CHECK(model.validation_trace[i] <= model.validation_trace[i - 1]);
    CHECK(rmse_on(model, val) <= model.validation_trace.front() + 1e-12);
}

TEST_CASE("pnn underdetermined and empty-validation errors") {
    auto [train, val] = grid_data([](double a, double b) { return a + b; });
    SupervisedDataset tiny = train;
    tiny.rows.resize(5);
    tiny.targets.resize(5);
    try {
        fit_pnn(tiny, val);
        FAIL("expected underdetermined");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientData);
    }
    SupervisedDataset empty_val = val;
    empty_val.rows.clear();
    empty_val.targets.clear();
    CHECK_THROWS_AS(fit_pnn(train, empty_val), Error);
}

TEST_CASE("predict_horizon unrolls a successor model recursively") {
    // y_t = y_{t-1} + 1, representable linearly; fit from the actual series.
    TimeSeries s;
    s.name = "inc";
    const CalendarDay start = parse_iso_date("2020-01-01");
    for (int i = 0; i < 12; ++i) {
        s.dates.push_back(start + std::chrono::days{i});
        s.values.push_back(double(i + 1));
    }
    const auto ds = lag_embed(s, 2);
    Forecaster model{"linreg", 2, fit_linear(ds)};

    const ForecastResult fc = predict_horizon(model, std::vector<double>{5.0, 6.0}, 3);
    REQUIRE(fc.values.size() == 3);

    // Closed-form recursion oracle.
    double window0 = 5.0, window1 = 6.0;
    for (double expected : {7.0, 8.0, 9.0}) {
        const double next = window1 + 1.0;
        CHECK(next == doctest::Approx(expected).epsilon(1e-9));
        window0 = window1;
        window1 = next;
    }
    CHECK(fc.values[0] == doctest::Approx(7.0).epsilon(1e-6));
    CHECK(fc.values[1] == doctest::Approx(8.0).epsilon(1e-6));
    CHECK(fc.values[2] == doctest::Approx(9.0).epsilon(1e-6));
}

TEST_CASE("predict_horizon boundary behavior") {
    LinearModel constant;
    constant.intercept = 4.25;
    constant.slopes = {0.0, 0.0};
    Forecaster model{"const", 2, constant};

    CHECK(predict_horizon(model, std::vector<double>{1.0, 2.0}, 0).values.empty());

    const ForecastResult fc = predict_horizon(model, std::vector<double>{1.0, 2.0}, 14);
    REQUIRE(fc.values.size() == 14);
    for (double v : fc.values) CHECK(v == 4.25);

    LinearModel exploding;
    exploding.intercept = 0.0;
    exploding.slopes = {1e300, 1e300};
    Forecaster bad{"boom", 2, exploding};
    try {
        predict_horizon(bad, std::vector<double>{1e10, 1e10}, 5);
        FAIL("expected propagation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Divergence);
    }
}

TEST_CASE("log-median rmse on the worked examples") {
    CHECK(rmse_log_median(std::vector<double>{10, 20, 30}, std::vector<double>{10, 20, 30}) ==
          0.0);

    const double e = std::exp(1.0);
    CHECK(rmse_log_median(std::vector<double>{e * 5.0}, std::vector<double>{5.0}) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const double two = rmse_log_median(std::vector<double>{e * 1.0, e * e * 2.0},
                                       std::vector<double>{1.0, 2.0});
    CHECK(two == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
    CHECK(two == doctest::Approx(1.5811).epsilon(1e-4));
}

TEST_CASE("log-median rmse uses the trial median and is scale consistent") {
    const std::vector<std::vector<double>> trials{{1.0, 2.0, 3.0}, {4.0, 6.0, 8.0}};
    const std::vector<double> actuals{2.0, 6.0};
    CHECK(rmse_log_median(trials, actuals) == 0.0);

    std::mt19937_64 gen(8);
    std::vector<std::vector<double>> random_trials;
    std::vector<double> random_actuals;
    for (int i = 0; i < 6; ++i) {
        std::vector<double> t;
        for (int k = 0; k < 9; ++k) t.push_back(0.5 + unit_draw(gen) * 4.0);
        random_trials.push_back(t);
        random_actuals.push_back(0.5 + unit_draw(gen) * 4.0);
    }
    const double base = rmse_log_median(random_trials, random_actuals);
    const double k = 37.25;
    std::vector<std::vector<double>> scaled_trials = random_trials;
    std::vector<double> scaled_actuals = random_actuals;
    for (auto& t : scaled_trials)
        for (auto& v : t) v *= k;
    for (auto& v : scaled_actuals) v *= k;
    CHECK(rmse_log_median(scaled_trials, scaled_actuals) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("log-median rmse domain errors") {
    CHECK_THROWS_AS(rmse_log_median(std::vector<double>{1.0}, std::vector<double>{0.0}), Error);
    CHECK_THROWS_AS(rmse_log_median(std::vector<double>{0.0}, std::vector<double>{1.0}), Error);
}

namespace {

std::pair<SupervisedDataset, SupervisedDataset> square_law_data() {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        const double x = 1.0 + 2.0 * double(i) / 39.0;
        rows.push_back({x, x});
        y.push_back(x * x);
    }
    auto all = dataset({"x1", "x2"}, rows, y, 2);
    return split_chronological(all, 0.7);
}

}  // namespace

TEST_CASE("grooms picks the pnn on square-law data where linear cannot keep up") {
    auto [train, holdout] = square_law_data();
    const std::vector<CandidateConfig> candidates{
        {"linreg", CandidateKind::Linear, {}, 0.7},
        {"pnn", CandidateKind::Pnn, {}, 0.7},
    };
    const GroomsSelection sel = grooms_select(candidates, train, holdout);
    CHECK(sel.winner_id == "pnn");
    REQUIRE(sel.ranking.size() == 2);
    CHECK(sel.ranking[0].id == "pnn");
    CHECK(sel.ranking[0].holdout_rmse < sel.ranking[1].holdout_rmse);

    // Reordering the candidates does not change the winner.
    const std::vector<CandidateConfig> flipped{candidates[1], candidates[0]};
    CHECK(grooms_select(flipped, train, holdout).winner_id == "pnn");
}

TEST_CASE("grooms breaks exact ties by candidate order") {
    auto [train, holdout] = square_law_data();
    const std::vector<CandidateConfig> candidates{
        {"first_linear", CandidateKind::Linear, {}, 0.7},
        {"second_linear", CandidateKind::Linear, {}, 0.7},
    };
    const GroomsSelection sel = grooms_select(candidates, train, holdout);
    CHECK(sel.winner_id == "first_linear");
}

TEST_CASE("grooms excludes failing candidates and errors when all fail") {
    auto [train, holdout] = square_law_data();
    SupervisedDataset tiny = train;
    tiny.rows.resize(4);
    tiny.targets.resize(4);

    const std::vector<CandidateConfig> mixed{
        {"pnn", CandidateKind::Pnn, {}, 0.7},  // needs more rows than tiny has
        {"linreg", CandidateKind::Linear, {}, 0.7},
    };
    const GroomsSelection sel = grooms_select(mixed, tiny, holdout);
    CHECK(sel.winner_id == "linreg");
    REQUIRE(sel.ranking.size() == 2);
    CHECK(sel.ranking.back().id == "pnn");
    CHECK_FALSE(sel.ranking.back().fitted);
    CHECK_FALSE(sel.ranking.back().failure.empty());

    const std::vector<CandidateConfig> impossible{{"pnn", CandidateKind::Pnn, {}, 0.7}};
    try {
        grooms_select(impossible, tiny, holdout);
        FAIL("expected selection error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Selection);
    }
}

TEST_CASE("model json round-trips coefficients exactly") {
    auto [train, val] = grid_data([](double a, double b) { return a * b - 0.25 * b * b + 3.0; });
    Forecaster pnn{"pnn", 2, fit_pnn(train, val)};
    const Forecaster pnn2 = forecaster_from_json(forecaster_to_json(pnn));
    const auto& m1 = std::get<PnnModel>(pnn.model);
    const auto& m2 = std::get<PnnModel>(pnn2.model);
    REQUIRE(m1.layers.size() == m2.layers.size());
    for (std::size_t l = 0; l < m1.layers.size(); ++l) {
        REQUIRE(m1.layers[l].size() == m2.layers[l].size());
        for (std::size_t k = 0; k < m1.layers[l].size(); ++k)
            for (int c = 0; c < 6; ++c)
                CHECK(m1.layers[l][k].coeff[std::size_t(c)] ==
                      m2.layers[l][k].coeff[std::size_t(c)]);
    }
    const std::vector<double> probe{1.37, -2.81};
    CHECK(pnn.predict(probe) == pnn2.predict(probe));

    Forecaster lin{"linreg", 2, LinearModel{0.1 + 0.2, {1.0 / 3.0, -7.0 / 11.0}}};
    const Forecaster lin2 = forecaster_from_json(forecaster_to_json(lin));
    CHECK(std::get<LinearModel>(lin.model).intercept ==
          std::get<LinearModel>(lin2.model).intercept);
    CHECK(std::get<LinearModel>(lin.model).slopes == std::get<LinearModel>(lin2.model).slopes);
}
