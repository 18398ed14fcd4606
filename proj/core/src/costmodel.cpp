#include "cmcs/costmodel.hpp"

#include <cmath>

#include "cmcs/errors.hpp"

namespace cmcs {

DayCostBreakdown total_daily_cost(const DayCostInputs& in) {
    const double fields[] = {in.ndic,        in.ndis,        in.cured_rate,
                             in.death_rate,  in.ppi_per_day, in.ppq_per_day,
                             in.days_for_recovery, in.days_till_death};
    for (double v : fields)
        if (!(v >= 0.0) || !std::isfinite(v))
            raise(ErrorKind::ModelEval, "day cost inputs must be finite and non-negative");
    if (in.cured_rate > 1.0 || in.death_rate > 1.0)
        raise(ErrorKind::ModelEval, "cured_rate and death_rate are fractions in [0,1]");

    const double rate_sum = in.cured_rate + in.death_rate;
    if (rate_sum == 0.0)
        raise(ErrorKind::ModelEval, "degenerate rates: cured_rate + death_rate == 0");

    const double recovery_weight = in.cured_rate / rate_sum;
    const double death_weight = in.death_rate / rate_sum;

    const double quarantine = in.ndis * in.ppq_per_day;
    const double recovery = recovery_weight * (in.ndic * in.ppi_per_day * in.days_for_recovery);
    const double death = death_weight * (in.ndic * in.ppi_per_day * in.days_till_death);
    return breakdown_from_components(quarantine, recovery, death);
}

DayCostBreakdown breakdown_from_components(double quarantine, double isolation_recovery,
                                           double isolation_death) {
    DayCostBreakdown out;
    out.cost_for_quarantine = quarantine;
    out.cost_for_isolation_till_recovery = isolation_recovery;
    out.cost_for_isolation_till_death = isolation_death;
    out.total_daily_cost = quarantine + isolation_recovery + isolation_death;
    return out;
}

const std::array<std::string, 8>& cost_model_inputs() {
    static const std::array<std::string, 8> names = {
        "new_daily_increase_confirmed",
        "new_daily_increase_suspected",
        "cured_rate",
        "death_rate",
        "ppi_per_day",
        "ppq_per_day",
        "days_for_recovery",
        "days_till_death",
    };
    return names;
}

DayCostInputs day_cost_inputs_from(const std::array<double, 8>& values) {
    DayCostInputs in;
    in.ndic = values[0];
    in.ndis = values[1];
    in.cured_rate = values[2];
    in.death_rate = values[3];
    in.ppi_per_day = values[4];
    in.ppq_per_day = values[5];
    in.days_for_recovery = values[6];
    in.days_till_death = values[7];
    return in;
}

}  // namespace cmcs
