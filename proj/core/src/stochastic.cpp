#include "cmcs/stochastic.hpp"

#include <cmath>

#include "cmcs/errors.hpp"
#include "cmcs/numfmt.hpp"

namespace cmcs {
namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// splitmix64 finalizer (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
inline double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

}  // namespace

Distribution Distribution::normal(double mean, double stdev) {
    if (!(stdev >= 0.0) || !std::isfinite(mean) || !std::isfinite(stdev))
        raise(ErrorKind::Config, "normal distribution requires finite mean and stdev >= 0");
    return Distribution(Kind::Normal, mean, stdev);
}

Distribution Distribution::uniform(double min, double max) {
    if (!(min <= max) || !std::isfinite(min) || !std::isfinite(max))
        raise(ErrorKind::Config, "uniform distribution requires finite min <= max");
    return Distribution(Kind::Uniform, min, max);
}

Distribution Distribution::point_mass(double value) {
    if (!std::isfinite(value))
        raise(ErrorKind::Config, "point mass requires a finite value");
    return Distribution(Kind::PointMass, value, 0.0);
}

double Distribution::mean() const {
    switch (kind_) {
        case Kind::Normal: return a_;
        case Kind::Uniform: return 0.5 * (a_ + b_);
        case Kind::PointMass: return a_;
    }
    return a_;
}

std::string Distribution::describe() const {
    switch (kind_) {
        case Kind::Normal:
            return "normal(" + format_double(a_) + ", " + format_double(b_) + ")";
        case Kind::Uniform:
            return "uniform(" + format_double(a_) + ", " + format_double(b_) + ")";
        case Kind::PointMass:
            return "point(" + format_double(a_) + ")";
    }
    return "";
}

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t trial, std::uint64_t variable,
                            std::uint64_t day) {
    std::uint64_t s = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    s = mix64(s ^ (trial + 0x9e3779b97f4a7c15ULL));
    s = mix64(s ^ (variable + 0xbb67ae8584caa73bULL));
    s = mix64(s ^ (day + 0x3c6ef372fe94f82bULL));
    return RngStream{s};
}

std::uint64_t RngStream::next_u64() {
    state += 0x9e3779b97f4a7c15ULL;
    return mix64(state);
}

double RngStream::next_unit() {
    // 53 mantissa bits, centered in the bin: result lies strictly in (0,1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double inverse_normal_cdf(double u) {
    if (!(u > 0.0 && u < 1.0))
        raise(ErrorKind::Domain, "inverse_normal_cdf requires u in (0,1)");
    if (u == 0.5) return 0.0;

    // Work in the lower tail; 1-u is exact for u in [0.5,1].
    const bool upper = u > 0.5;
    const double p = upper ? 1.0 - u : u;

    // Abramowitz-Stegun 26.2.22 starting point, |error| < 4.5e-4.
    const double r = std::sqrt(-2.0 * std::log(p));
    double z = -(r - (2.30753 + 0.27061 * r) / (1.0 + r * (0.99229 + 0.04481 * r)));

    // Bracketed Newton on Phi(z) - p. The CDF is evaluated through erfc on
    // the small side, so there is no cancellation in the tail.
    double lo = z - 1.0, hi = z + 1.0;
    for (int it = 0; it < 16; ++it) {
        const double f = std_normal_cdf(z) - p;
        if (f == 0.0) break;
        if (f > 0.0) hi = z; else lo = z;
        const double d = std_normal_pdf(z);
        double step = f / d;
        double znew = z - step;
        if (!(znew > lo && znew < hi)) znew = 0.5 * (lo + hi);
        if (std::abs(znew - z) < 1e-15 * (1.0 + std::abs(z))) {
            z = znew;
            break;
        }
        z = znew;
    }
    return upper ? -z : z;
}

double sample(const Distribution& dist, RngStream& stream) {
    switch (dist.kind()) {
        case Distribution::Kind::PointMass:
            return dist.param_a();
        case Distribution::Kind::Uniform: {
            const double u = stream.next_unit();
            return dist.param_a() + (dist.param_b() - dist.param_a()) * u;
        }
        case Distribution::Kind::Normal: {
            const double u = stream.next_unit();
            return dist.param_a() + dist.param_b() * inverse_normal_cdf(u);
        }
    }
    return dist.param_a();
}

Distribution growth_normal(double initial, double daily_rate, std::uint64_t day, double stdev) {
    if (!(initial > 0.0))
        raise(ErrorKind::Config, "growth_normal requires initial > 0");
    if (!(daily_rate > -1.0))
        raise(ErrorKind::Config, "growth_normal requires daily_rate > -1");
    const double mean = initial * std::pow(1.0 + daily_rate, static_cast<double>(day));
    return Distribution::normal(mean, stdev);
}

}  // namespace cmcs
