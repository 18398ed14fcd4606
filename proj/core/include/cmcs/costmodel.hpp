#pragma once

#include <array>
#include <string>

namespace cmcs {

/// One day's model inputs. Counts and currencies are non-negative;
/// cured_rate and death_rate are fractions in [0,1] whose sum must be
/// positive (their ratio weights the isolation costs).
struct DayCostInputs {
    double ndic = 0.0;  // new daily confirmed
    double ndis = 0.0;  // new daily suspected
    double cured_rate = 0.0;
    double death_rate = 0.0;
    double ppi_per_day = 0.0;  // per-person isolation cost
    double ppq_per_day = 0.0;  // per-person quarantine cost
    double days_for_recovery = 0.0;
    double days_till_death = 0.0;
};

struct DayCostBreakdown {
    double cost_for_quarantine = 0.0;
    double cost_for_isolation_till_recovery = 0.0;
    double cost_for_isolation_till_death = 0.0;
    double total_daily_cost = 0.0;
};

/// total = quarantine + recovery-weighted isolation + death-weighted
/// isolation, with the total formed as the exact sum of the three parts.
DayCostBreakdown total_daily_cost(const DayCostInputs& in);

/// The aggregation alone: quarantine + recovery + death components.
DayCostBreakdown breakdown_from_components(double quarantine, double isolation_recovery,
                                           double isolation_death);

/// Canonical input variable names for the built-in simulation model, in
/// binding order.
const std::array<std::string, 8>& cost_model_inputs();

DayCostInputs day_cost_inputs_from(const std::array<double, 8>& values);

}  // namespace cmcs
