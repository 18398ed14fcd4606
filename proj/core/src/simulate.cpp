#include "cmcs/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "cmcs/costmodel.hpp"
#include "cmcs/errors.hpp"
#include "cmcs/numfmt.hpp"
#include "cmcs/stats.hpp"

namespace cmcs {

using nlohmann::json;

namespace {

constexpr double kAbortBudget = 0.001;  // fraction of trials allowed to abort
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::map<std::string, SimModel>& registry() {
    static std::map<std::string, SimModel> models = [] {
        std::map<std::string, SimModel> m;
        SimModel covid;
        covid.inputs.assign(cost_model_inputs().begin(), cost_model_inputs().end());
        covid.evaluate_day = [](std::span<const double> v) {
            std::array<double, 8> a;
            std::copy(v.begin(), v.end(), a.begin());
            return total_daily_cost(day_cost_inputs_from(a)).total_daily_cost;
        };
        m.emplace("covid_direct_cost", std::move(covid));
        return m;
    }();
    return models;
}

}  // namespace

Distribution StochasticSource::for_day(std::size_t day) const {
    if (std::holds_alternative<Distribution>(body)) return std::get<Distribution>(body);
    if (std::holds_alternative<std::vector<Distribution>>(body)) {
        const auto& sched = std::get<std::vector<Distribution>>(body);
        if (day >= sched.size())
            raise(ErrorKind::Binding, "distribution schedule does not cover day " +
                                          std::to_string(day + 1));
        return sched[day];
    }
    const Growth& g = std::get<Growth>(body);
    return growth_normal(g.initial, g.daily_rate, day, g.stdev);
}

void register_model(const std::string& name, SimModel model) {
    if (model.inputs.empty() || !model.evaluate_day)
        raise(ErrorKind::Config, "register_model: model needs inputs and an evaluator");
    registry()[name] = std::move(model);
}

bool model_registered(const std::string& name) { return registry().count(name) > 0; }

const SimModel& lookup_model(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end())
        raise(ErrorKind::Binding, "unknown simulation model: " + name);
    return it->second;
}

namespace {

// Bindings reordered to match the model input list, validated for exact
// one-to-one coverage of the model variables.
std::vector<const InputBinding*> resolve_bindings(const SimulationSpec& spec,
                                                  const SimModel& model) {
    std::vector<const InputBinding*> resolved(model.inputs.size(), nullptr);
    for (const auto& binding : spec.bindings) {
        auto it = std::find(model.inputs.begin(), model.inputs.end(), binding.variable);
        if (it == model.inputs.end())
            raise(ErrorKind::Binding,
                  "binding for unknown model variable: " + binding.variable);
        const std::size_t idx = std::size_t(it - model.inputs.begin());
        if (resolved[idx])
            raise(ErrorKind::Binding, "duplicate binding for variable: " + binding.variable);
        resolved[idx] = &binding;
    }
    for (std::size_t i = 0; i < resolved.size(); ++i) {
        if (!resolved[i])
            raise(ErrorKind::Binding, "unbound model variable: " + model.inputs[i]);
        if (!resolved[i]->stochastic()) {
            const auto& det = std::get<DeterministicSource>(resolved[i]->source);
            if (det.values.size() < spec.horizon)
                raise(ErrorKind::Binding, "deterministic binding for " + model.inputs[i] +
                                              " covers " + std::to_string(det.values.size()) +
                                              " days, horizon needs " +
                                              std::to_string(spec.horizon));
        } else {
            // Validate the whole schedule up front; sampling must never fail.
            const auto& sto = std::get<StochasticSource>(resolved[i]->source);
            for (std::size_t d = 0; d < spec.horizon; ++d) (void)sto.for_day(d);
        }
    }
    return resolved;
}

}  // namespace

SimulationRun run_simulation(const SimulationSpec& spec) {
    if (spec.trials < 1) raise(ErrorKind::Config, "trials must be >= 1");
    if (spec.horizon < 1) raise(ErrorKind::Config, "horizon must be >= 1");
    const SimModel& model = lookup_model(spec.model);
    const auto bindings = resolve_bindings(spec, model);

    const std::size_t n_vars = model.inputs.size();
    TrialMatrix matrix;
    matrix.trials = spec.trials;
    matrix.horizon = spec.horizon;
    matrix.variables = model.inputs;
    matrix.variable_stochastic.resize(n_vars);
    for (std::size_t v = 0; v < n_vars; ++v)
        matrix.variable_stochastic[v] = bindings[v]->stochastic();
    matrix.outcomes.assign(spec.trials * spec.horizon, kNaN);
    matrix.draws.assign(spec.trials * spec.horizon * n_vars, kNaN);
    matrix.aggregates.assign(spec.trials, kNaN);
    matrix.trial_aborted.assign(spec.trials, 0);

    std::vector<std::uint32_t> clamped_per_trial(spec.trials, 0);

    auto run_trial = [&](std::size_t t) {
        std::vector<double> inputs(n_vars, 0.0);
        double aggregate = 0.0;
        for (std::size_t d = 0; d < spec.horizon; ++d) {
            for (std::size_t v = 0; v < n_vars; ++v) {
                double value;
                if (bindings[v]->stochastic()) {
                    const auto& sto = std::get<StochasticSource>(bindings[v]->source);
                    RngStream stream = RngStream::derive(spec.seed, t, v, d);
                    value = sample(sto.for_day(d), stream);
                    if (value < 0.0) {
                        value = 0.0;
                        ++clamped_per_trial[t];
                    }
                } else {
                    value = std::get<DeterministicSource>(bindings[v]->source).values[d];
                }
                inputs[v] = value;
                matrix.draws[(t * spec.horizon + d) * n_vars + v] = value;
            }
            double outcome;
            try {
                outcome = model.evaluate_day(inputs);
            } catch (const Error&) {
                matrix.trial_aborted[t] = 1;
                return;
            }
            if (!std::isfinite(outcome)) {
                matrix.trial_aborted[t] = 1;
                return;
            }
            matrix.outcomes[t * spec.horizon + d] = outcome;
            aggregate += outcome;
        }
        matrix.aggregates[t] = aggregate;
    };

    const std::size_t workers = std::max<std::size_t>(1, spec.threads);
    if (workers == 1) {
        for (std::size_t t = 0; t < spec.trials; ++t) run_trial(t);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (spec.trials + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(spec.trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                for (std::size_t t = begin; t < end; ++t) run_trial(t);
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t t = 0; t < spec.trials; ++t) {
        matrix.aborted_count += matrix.trial_aborted[t];
        matrix.clamped_draws += clamped_per_trial[t];
    }
    if (double(matrix.aborted_count) > kAbortBudget * double(spec.trials))
        raise(ErrorKind::TrialBudget,
              std::to_string(matrix.aborted_count) + " of " + std::to_string(spec.trials) +
                  " trials aborted (budget 0.1%)");

    std::vector<double> usable;
    usable.reserve(spec.trials);
    for (std::size_t t = 0; t < spec.trials; ++t)
        if (!matrix.trial_aborted[t]) usable.push_back(matrix.aggregates[t]);

    SimulationRun run;
    run.summary.trial_count = usable.size();
    run.summary.aborted_trials = matrix.aborted_count;
    run.summary.clamped_draws = matrix.clamped_draws;
    run.summary.mean = mean_of(usable);
    run.summary.median = median_of(usable);
    run.summary.stdev = sample_stdev(usable);

    std::vector<double> levels = {0.50, 0.80, 0.98};
    for (double l : spec.extra_levels) levels.push_back(l);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (double level : levels)
        run.summary.certainty_intervals.push_back(certainty_interval(usable, level));

    run.summary.histogram = freedman_diaconis_histogram(usable);
    run.trials = std::move(matrix);
    return run;
}

CertaintyInterval certainty_interval(std::vector<double> aggregates, double level) {
    if (aggregates.empty()) raise(ErrorKind::Config, "certainty_interval: empty aggregates");
    if (!(level > 0.0 && level <= 1.0))
        raise(ErrorKind::Config, "certainty level must lie in (0,1]");
    CertaintyInterval out;
    out.level = level;
    out.mean = mean_of(aggregates);
    std::sort(aggregates.begin(), aggregates.end());
    out.low = nearest_rank_quantile(aggregates, (1.0 - level) / 2.0);
    out.high = nearest_rank_quantile(aggregates, (1.0 + level) / 2.0);
    return out;
}

std::vector<SensitivityEntry> sensitivity_chart(const TrialMatrix& matrix) {
    std::size_t stochastic_vars = 0;
    for (bool s : matrix.variable_stochastic) stochastic_vars += s ? 1 : 0;
    if (stochastic_vars == 0)
        raise(ErrorKind::Config, "sensitivity_chart: no stochastic inputs");

    std::vector<std::size_t> usable_trials;
    for (std::size_t t = 0; t < matrix.trials; ++t)
        if (!matrix.trial_aborted[t]) usable_trials.push_back(t);
    if (usable_trials.size() < 2)
        raise(ErrorKind::Config, "sensitivity_chart: need at least two usable trials");

    std::vector<double> aggregates;
    aggregates.reserve(usable_trials.size());
    for (std::size_t t : usable_trials) aggregates.push_back(matrix.aggregates[t]);

    std::vector<SensitivityEntry> entries;
    double sum_r2 = 0.0;
    std::vector<double> column(usable_trials.size());
    for (std::size_t v = 0; v < matrix.variables.size(); ++v) {
        if (!matrix.variable_stochastic[v]) continue;
        for (std::size_t d = 0; d < matrix.horizon; ++d) {
            for (std::size_t i = 0; i < usable_trials.size(); ++i)
                column[i] = matrix.draw(usable_trials[i], d, v);
            SensitivityEntry entry;
            entry.variable = matrix.variables[v];
            entry.day = d;
            const double lo = *std::min_element(column.begin(), column.end());
            const double hi = *std::max_element(column.begin(), column.end());
            if (lo == hi) {
                entry.constant = true;
            } else {
                entry.rank_correlation = spearman(column, aggregates);
                sum_r2 += entry.rank_correlation * entry.rank_correlation;
            }
            entries.push_back(std::move(entry));
        }
    }

    if (sum_r2 > 0.0) {
        for (auto& entry : entries) {
            const double r = entry.rank_correlation;
            entry.contribution_pct = entry.constant ? 0.0 : (r >= 0 ? 1.0 : -1.0) * r * r / sum_r2 * 100.0;
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::abs(a.contribution_pct) > std::abs(b.contribution_pct);
    });
    return entries;
}

Histogram freedman_diaconis_histogram(std::vector<double> values) {
    Histogram h;
    if (values.empty()) return h;
    std::sort(values.begin(), values.end());
    const double lo = values.front();
    const double hi = values.back();
    const double iqr = nearest_rank_quantile(values, 0.75) - nearest_rank_quantile(values, 0.25);
    const double width = 2.0 * iqr / std::cbrt(double(values.size()));
    if (!(width > 0.0) || hi == lo) {
        h.edges = {lo, hi};
        h.counts = {values.size()};
        h.bin_width = hi - lo;
        return h;
    }
    std::size_t bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    bins = std::clamp<std::size_t>(bins, 1, 10000);
    h.bin_width = (hi - lo) / double(bins);
    h.counts.assign(bins, 0);
    for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lo + double(b) * h.bin_width);
    h.edges.back() = hi;
    for (double v : values) {
        std::size_t b = static_cast<std::size_t>((v - lo) / h.bin_width);
        if (b >= bins) b = bins - 1;
        ++h.counts[b];
    }
    return h;
}

namespace {

Distribution distribution_from_json(const json& j) {
    if (j.contains("normal"))
        return Distribution::normal(j["normal"].at("mean").get<double>(),
                                    j["normal"].at("stdev").get<double>());
    if (j.contains("uniform"))
        return Distribution::uniform(j["uniform"].at("min").get<double>(),
                                     j["uniform"].at("max").get<double>());
    if (j.contains("point")) return Distribution::point_mass(j["point"].get<double>());
    raise(ErrorKind::Config, "unknown distribution literal: " + j.dump());
}

json distribution_to_json(const Distribution& d) {
    switch (d.kind()) {
        case Distribution::Kind::Normal:
            return json{{"normal", {{"mean", d.param_a()}, {"stdev", d.param_b()}}}};
        case Distribution::Kind::Uniform:
            return json{{"uniform", {{"min", d.param_a()}, {"max", d.param_b()}}}};
        case Distribution::Kind::PointMass:
            return json{{"point", d.param_a()}};
    }
    return json{};
}

}  // namespace

SimulationSpec parse_simulation_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, true);
    } catch (const json::exception& e) {
        raise(ErrorKind::Config, std::string("simulation config is not valid JSON: ") + e.what());
    }
    SimulationSpec spec;
    try {
        spec.model = j.value("model", std::string("covid_direct_cost"));
        spec.horizon = j.at("horizon").get<std::size_t>();
        spec.trials = j.at("trials").get<std::size_t>();
        spec.seed = j.value("seed", std::uint64_t(0));
        spec.threads = j.value("threads", std::size_t(1));
        if (j.contains("levels"))
            spec.extra_levels = j["levels"].get<std::vector<double>>();
        for (const auto& bj : j.at("bindings")) {
            InputBinding binding;
            binding.variable = bj.at("variable").get<std::string>();
            const json& src = bj.at("source");
            if (src.contains("deterministic")) {
                DeterministicSource det;
                const json& dj = src["deterministic"];
                det.values = dj.at("values").get<std::vector<double>>();
                const double scale = dj.value("scale", 1.0);
                if (scale != 1.0)
                    for (double& v : det.values) v *= scale;
                det.origin = dj.value("origin", std::string());
                binding.source = std::move(det);
            } else if (src.contains("growth_normal")) {
                StochasticSource sto;
                StochasticSource::Growth g;
                g.initial = src["growth_normal"].at("initial").get<double>();
                g.daily_rate = src["growth_normal"].at("daily_rate").get<double>();
                g.stdev = src["growth_normal"].at("stdev").get<double>();
                sto.body = g;
                binding.source = std::move(sto);
            } else if (src.contains("schedule")) {
                StochasticSource sto;
                std::vector<Distribution> sched;
                for (const auto& dj : src["schedule"]) sched.push_back(distribution_from_json(dj));
                sto.body = std::move(sched);
                binding.source = std::move(sto);
            } else {
                StochasticSource sto;
                sto.body = distribution_from_json(src);
                binding.source = std::move(sto);
            }
            spec.bindings.push_back(std::move(binding));
        }
    } catch (const json::exception& e) {
        raise(ErrorKind::Config, std::string("simulation config field error: ") + e.what());
    }
    return spec;
}

std::string trials_csv(const TrialMatrix& matrix) {
    std::string out = "trial,day,outcome";
    for (const auto& v : matrix.variables) out += "," + v;
    out += "\n";
    for (std::size_t t = 0; t < matrix.trials; ++t) {
        for (std::size_t d = 0; d < matrix.horizon; ++d) {
            out += std::to_string(t) + "," + std::to_string(d + 1) + "," +
                   format_double(matrix.outcome(t, d));
            for (std::size_t v = 0; v < matrix.variables.size(); ++v)
                out += "," + format_double(matrix.draw(t, d, v));
            out += "\n";
        }
    }
    return out;
}

std::string histogram_csv(const Histogram& histogram) {
    std::string out = "bin_low,bin_high,count\n";
    for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
        out += format_double(histogram.edges[b]) + "," + format_double(histogram.edges[b + 1]) +
               "," + std::to_string(histogram.counts[b]) + "\n";
    }
    return out;
}

std::string report_json(const SimulationSpec& spec, const SimulationRun& run,
                        const std::vector<SensitivityEntry>& sensitivity,
                        const std::string& manifest_json) {
    json j;
    if (!manifest_json.empty()) j["manifest"] = json::parse(manifest_json);
    j["model"] = spec.model;
    j["horizon"] = spec.horizon;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["summary"] = {
        {"mean", run.summary.mean},
        {"median", run.summary.median},
        {"stdev", run.summary.stdev},
        {"trial_count", run.summary.trial_count},
        {"aborted_trials", run.summary.aborted_trials},
        {"clamped_draws", run.summary.clamped_draws},
    };
    json intervals = json::array();
    for (const auto& ci : run.summary.certainty_intervals)
        intervals.push_back(
            {{"level", ci.level}, {"low", ci.low}, {"high", ci.high}, {"mean", ci.mean}});
    j["certainty_intervals"] = intervals;
    json sens = json::array();
    std::size_t rank = 1;
    for (const auto& s : sensitivity)
        sens.push_back({{"rank", rank++},
                        {"variable", s.variable},
                        {"day", s.day + 1},
                        {"contribution_pct", s.contribution_pct},
                        {"rank_correlation", s.rank_correlation},
                        {"constant", s.constant}});
    j["sensitivity"] = sens;
    j["histogram"] = {{"bin_width", run.summary.histogram.bin_width},
                      {"edges", run.summary.histogram.edges},
                      {"counts", run.summary.histogram.counts}};
    json bindings = json::array();
    for (const auto& b : spec.bindings) {
        json bj;
        bj["variable"] = b.variable;
        if (b.stochastic()) {
            const auto& sto = std::get<StochasticSource>(b.source);
            if (std::holds_alternative<Distribution>(sto.body))
                bj["source"] = distribution_to_json(std::get<Distribution>(sto.body));
            else if (std::holds_alternative<StochasticSource::Growth>(sto.body)) {
                const auto& g = std::get<StochasticSource::Growth>(sto.body);
                bj["source"] = {{"growth_normal",
                                 {{"initial", g.initial},
                                  {"daily_rate", g.daily_rate},
                                  {"stdev", g.stdev}}}};
            } else {
                bj["source"] = "per-day schedule";
            }
        } else {
            const auto& det = std::get<DeterministicSource>(b.source);
            bj["source"] = det.origin.empty() ? "deterministic" : det.origin;
        }
        bindings.push_back(bj);
    }
    j["bindings"] = bindings;
    return j.dump(2) + "\n";
}

}  // namespace cmcs
