#include <doctest.h>

#include <cmath>

#include "cmcs/errors.hpp"
#include "cmcs/stochastic.hpp"
#include "oracles.hpp"

using namespace cmcs;

TEST_CASE("uniform draws stay inside the range") {
    const Distribution d = Distribution::uniform(11.0, 26.0);
    RngStream s = RngStream::derive(1, 0, 0, 0);
    for (int i = 0; i < 1000; ++i) {
        const double v = sample(d, s);
        CHECK(v >= 11.0);
        CHECK(v <= 26.0);
    }
}

TEST_CASE("a degenerate normal returns its mean exactly") {
    const Distribution d = Distribution::normal(35.9, 0.0);
    RngStream s = RngStream::derive(7, 1, 2, 3);
    CHECK(sample(d, s) == 35.9);
}

TEST_CASE("point mass samples to exactly its value") {
    const Distribution d = Distribution::point_mass(42.5);
    RngStream s = RngStream::derive(7, 1, 2, 3);
    CHECK(sample(d, s) == 42.5);
}

TEST_CASE("normal sample mean obeys the clt bound at 10000 draws") {
    const Distribution d = Distribution::normal(35.9, 6.37);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        RngStream s = RngStream::derive(2020, std::uint64_t(i), 0, 0);
        sum += sample(d, s);
    }
    const double mean = sum / 10000.0;
    CHECK(std::abs(mean - 35.9) < 3.0 * 6.37 / std::sqrt(10000.0));
}

TEST_CASE("uniform empirical mean over 1e5 draws") {
    const double a = 11.0, b = 26.0;
    const Distribution d = Distribution::uniform(a, b);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        RngStream s = RngStream::derive(77, std::uint64_t(i), 1, 0);
        sum += sample(d, s);
    }
    const double bound = 4.0 * (b - a) / std::sqrt(12.0 * double(n));
    CHECK(std::abs(sum / n - (a + b) / 2.0) < bound);
}

TEST_CASE("growth_normal compounds the mean daily") {
    const Distribution day0 = growth_normal(1000.0, 0.05, 0, 9.0);
    CHECK(day0.kind() == Distribution::Kind::Normal);
    CHECK(day0.param_a() == 1000.0);
    CHECK(day0.param_b() == 9.0);

    const Distribution day2 = growth_normal(1000.0, 0.05, 2, 9.0);
    CHECK(day2.param_a() == doctest::Approx(1102.5).epsilon(1e-12));

    for (std::uint64_t day : {0ull, 3ull, 14ull})
        CHECK(growth_normal(500.0, 0.0, day, 1.0).param_a() == 500.0);
}

TEST_CASE("invalid distribution parameters fail at construction") {
    CHECK_THROWS_AS(Distribution::normal(0.0, -1.0), Error);
    CHECK_THROWS_AS(Distribution::uniform(5.0, 4.0), Error);
    CHECK_THROWS_AS(growth_normal(-1.0, 0.1, 0, 9.0), Error);
    CHECK_THROWS_AS(growth_normal(10.0, -1.5, 0, 9.0), Error);
}

TEST_CASE("identical seed and stream id reproduce the same sequence") {
    RngStream a = RngStream::derive(123, 4, 5, 6);
    RngStream b = RngStream::derive(123, 4, 5, 6);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams decorrelate") {
    const int n = 10000;
    oracle::Vec xs, ys;
    for (int i = 0; i < n; ++i) {
        RngStream a = RngStream::derive(9, std::uint64_t(i), 0, 0);
        RngStream b = RngStream::derive(9, std::uint64_t(i), 1, 0);
        xs.push_back(a.next_unit());
        ys.push_back(b.next_unit());
    }
    CHECK(std::abs(oracle::pearson_two_pass(xs, ys)) < 0.05);

    // Lag-1 within one stream as well.
    oracle::Vec lead, lag;
    RngStream s = RngStream::derive(10, 0, 0, 0);
    double prev = s.next_unit();
    for (int i = 0; i < n; ++i) {
        const double cur = s.next_unit();
        lead.push_back(prev);
        lag.push_back(cur);
        prev = cur;
    }
    CHECK(std::abs(oracle::pearson_two_pass(lead, lag)) < 0.05);
}

TEST_CASE("inverse normal cdf hits textbook quantiles") {
    CHECK(inverse_normal_cdf(0.5) == 0.0);
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
}

TEST_CASE("inverse normal cdf matches a bisection oracle across the unit interval") {
    const double grid[] = {1e-12, 1e-9,  1e-6, 1e-3, 0.01, 0.1,  0.25,    0.5,
                           0.75,  0.9,   0.99, 1.0 - 1e-3, 1.0 - 1e-6, 1.0 - 1e-9};
    for (double u : grid) {
        const double expected = oracle::bisect_inverse_normal(u);
        CHECK(inverse_normal_cdf(u) == doctest::Approx(expected).epsilon(1e-10));
    }
    CHECK_THROWS_AS(inverse_normal_cdf(0.0), Error);
    CHECK_THROWS_AS(inverse_normal_cdf(1.0), Error);
}

TEST_CASE("round trip: cdf(inverse(u)) returns u") {
    for (double u = 0.02; u < 1.0; u += 0.02) {
        const double z = inverse_normal_cdf(u);
        CHECK(oracle::normal_cdf(z) == doctest::Approx(u).epsilon(1e-12));
    }
}
