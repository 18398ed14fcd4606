#include <doctest.h>

#include <cmath>
#include <random>

#include "cmcs/errors.hpp"
#include "cmcs/timeseries.hpp"
#include "oracles.hpp"

using namespace cmcs;

namespace {

double unit_draw(std::mt19937_64& gen) { return double(gen()) * 0x1.0p-64; }

}  // namespace

TEST_CASE("load_csv parses a small file into one series per column") {
    const std::string text =
        "date,ndic\n"
        "2020-01-25,100\n"
        "2020-01-26,200\n"
        "2020-01-27,300\n";
    const auto series = load_csv_text(text);
    REQUIRE(series.size() == 1);
    CHECK(series[0].name == "ndic");
    CHECK(series[0].values == std::vector<double>{100, 200, 300});
    CHECK(format_iso_date(series[0].dates.front()) == "2020-01-25");
}

TEST_CASE("load_csv rejects rates outside 0..100") {
    const std::string text =
        "date,cured_rate\n"
        "2020-01-25,50\n"
        "2020-01-26,150\n";
    CHECK_THROWS_WITH_AS(load_csv_text(text), doctest::Contains("cured_rate"), Error);
    try {
        load_csv_text(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Range);
    }
}

TEST_CASE("load_csv rejects duplicated and out-of-order dates") {
    const std::string dup =
        "date,x\n"
        "2020-01-25,1\n"
        "2020-01-25,2\n";
    try {
        load_csv_text(dup);
        FAIL("expected ordering error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Ordering);
    }

    const std::string backwards =
        "date,x\n"
        "2020-01-25,1\n"
        "2020-01-24,2\n";
    CHECK_THROWS_AS(load_csv_text(backwards), Error);
}

TEST_CASE("load_csv rejects gaps in daily data") {
    const std::string text =
        "date,x\n"
        "2020-01-25,1\n"
        "2020-01-27,2\n";
    try {
        load_csv_text(text);
        FAIL("expected gap rejection");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Ordering);
        CHECK(std::string(e.what()).find("gap") != std::string::npos);
    }
}

TEST_CASE("load_csv names the missing schema column") {
    const std::string text =
        "date,a\n"
        "2020-01-25,1\n";
    try {
        load_csv_text(text, {"a", "b"});
        FAIL("expected schema error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Schema);
        CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
}

TEST_CASE("load_csv reports the line of an unparseable value") {
    const std::string text =
        "date,x\n"
        "2020-01-25,1\n"
        "2020-01-26,oops\n";
    try {
        load_csv_text(text);
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("missing file is its own error") {
    try {
        load_csv("/nonexistent/input.csv");
        FAIL("expected missing file error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingFile);
    }
}

namespace {

TimeSeries make_series(std::vector<double> values) {
    TimeSeries s;
    s.name = "s";
    const CalendarDay start = parse_iso_date("2020-01-25");
    for (std::size_t i = 0; i < values.size(); ++i)
        s.dates.push_back(start + std::chrono::days{long(i)});
    s.values = std::move(values);
    return s;
}

}  // namespace

TEST_CASE("lag_embed produces the sliding rows") {
    const auto ds = lag_embed(make_series({1, 2, 3, 4, 5}), 2);
    REQUIRE(ds.size() == 3);
    CHECK(ds.rows[0] == std::vector<double>{1, 2});
    CHECK(ds.targets[0] == 3);
    CHECK(ds.rows[2] == std::vector<double>{3, 4});
    CHECK(ds.targets[2] == 5);
    CHECK(ds.feature_names == std::vector<std::string>{"s_tminus2", "s_tminus1"});
}

TEST_CASE("lag_embed boundary cases") {
    try {
        lag_embed(make_series({7}), 1);
        FAIL("expected insufficient data");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientData);
    }
    const auto single = lag_embed(make_series({1, 2, 3}), 2);
    REQUIRE(single.size() == 1);
    CHECK(single.rows[0] == std::vector<double>{1, 2});
    CHECK(single.targets[0] == 3);
}

TEST_CASE("lag_embed rows reconstruct the original series tail") {
    const std::vector<double> values{3, 1, 4, 1, 5, 9, 2, 6, 5, 3};
    const auto ds = lag_embed(make_series(values), 3);
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t k = 0; k < 3; ++k) CHECK(ds.rows[r][k] == values[r + k]);
        CHECK(ds.targets[r] == values[r + 3]);
    }
}

namespace {

SupervisedDataset three_feature_data(std::size_t n, std::mt19937_64& gen) {
    SupervisedDataset ds;
    ds.feature_names = {"echo", "flat", "noise"};
    for (std::size_t i = 0; i < n; ++i) {
        const double target = 2.0 * unit_draw(gen) - 1.0;
        ds.targets.push_back(target);
        ds.rows.push_back({target, 5.0, 2.0 * unit_draw(gen) - 1.0});
    }
    return ds;
}

}  // namespace

TEST_CASE("correlation_filter keeps a copy of the target and drops constants and noise") {
    std::mt19937_64 gen(314159);
    const auto ds = three_feature_data(1000, gen);

    // Independent two-pass Pearson on the noise column stays under 0.3.
    oracle::Vec noise, target;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        noise.push_back(ds.rows[i][2]);
        target.push_back(ds.targets[i]);
    }
    const double noise_r = oracle::pearson_two_pass(noise, target);
    REQUIRE(std::abs(noise_r) < 0.3);

    const FilterResult res = correlation_filter(ds, 0.3);
    CHECK(res.dataset.feature_names == std::vector<std::string>{"echo"});
    REQUIRE(res.dropped.size() == 2);
    CHECK(res.dropped[0].name == "flat");
    CHECK(res.dropped[0].reason == "zero variance");
    CHECK(res.dropped[1].name == "noise");
}

TEST_CASE("a feature identical to the target survives any threshold up to 1") {
    std::mt19937_64 gen(7);
    const auto ds = three_feature_data(50, gen);
    const FilterResult res = correlation_filter(ds, 1.0);
    CHECK(res.dataset.feature_names.front() == "echo");
}

TEST_CASE("correlation_filter is idempotent") {
    std::mt19937_64 gen(11);
    const auto ds = three_feature_data(200, gen);
    const FilterResult once = correlation_filter(ds, 0.3);
    const FilterResult twice = correlation_filter(once.dataset, 0.3);
    CHECK(twice.dataset.feature_names == once.dataset.feature_names);
    CHECK(twice.dataset.rows == once.dataset.rows);
    CHECK(twice.dropped.empty());
}

TEST_CASE("dropping every feature is an empty-selection error") {
    SupervisedDataset ds;
    ds.feature_names = {"flat"};
    for (int i = 0; i < 10; ++i) {
        ds.rows.push_back({1.0});
        ds.targets.push_back(double(i));
    }
    try {
        correlation_filter(ds, 0.5);
        FAIL("expected empty selection");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptySelection);
    }
}

TEST_CASE("chronological split keeps order and sizes") {
    std::mt19937_64 gen(3);
    const auto ds = three_feature_data(10, gen);
    const auto [head, tail] = split_chronological(ds, 0.7);
    CHECK(head.size() == 7);
    CHECK(tail.size() == 3);
    CHECK(head.targets[0] == ds.targets[0]);
    CHECK(tail.targets[0] == ds.targets[7]);
}
