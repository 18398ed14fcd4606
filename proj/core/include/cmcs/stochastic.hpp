#pragma once

#include <cstdint>
#include <string>

namespace cmcs {

// Parametric input distribution. Parameters are validated at construction so
// sampling itself never fails.
class Distribution {
public:
    enum class Kind { Normal, Uniform, PointMass };

    static Distribution normal(double mean, double stdev);
    static Distribution uniform(double min, double max);
    static Distribution point_mass(double value);

    Kind kind() const { return kind_; }
    double param_a() const { return a_; }  // mean / min / value
    double param_b() const { return b_; }  // stdev / max / unused

    double mean() const;
    std::string describe() const;

private:
    Distribution(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
    Kind kind_;
    double a_;
    double b_;
};

// Counter-derived random stream: the state is a pure function of
// (seed, trial, variable, day), so any evaluation order - or thread
// schedule - yields the same draws.
struct RngStream {
    std::uint64_t state;

    static RngStream derive(std::uint64_t seed, std::uint64_t trial, std::uint64_t variable,
                            std::uint64_t day);

    std::uint64_t next_u64();
    // Uniform on (0,1), never exactly 0 or 1.
    double next_unit();
};

// Quantile of the standard normal; strictly increasing, pure arithmetic
// (initial rational guess polished by bracketed Newton on erfc).
double inverse_normal_cdf(double u);

double sample(const Distribution& dist, RngStream& stream);

// Normal whose mean compounds daily: initial*(1+daily_rate)^day.
Distribution growth_normal(double initial, double daily_rate, std::uint64_t day, double stdev);

}  // namespace cmcs
