#include "cmcs/fri.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "cmcs/errors.hpp"
#include "cmcs/numfmt.hpp"

namespace cmcs {

using nlohmann::json;

double trapezoid_membership(const FuzzySet& set, double value) {
    if (value >= set.core_low && value <= set.core_high) return 1.0;
    if (value > set.support_low && value < set.core_low)
        return (value - set.support_low) / (set.core_low - set.support_low);
    if (value > set.core_high && value < set.support_high)
        return (set.support_high - value) / (set.support_high - set.core_high);
    return 0.0;
}

bool CrispRule::covers(std::span<const double> row) const {
    for (const auto& c : conditions)
        if (!c.covers(row[c.attribute])) return false;
    return true;
}

double purity(double positives, double negatives) {
    if (positives < 0.0 || negatives < 0.0)
        raise(ErrorKind::Config, "purity: negative membership sums");
    const double denom = positives + negatives;
    if (denom <= 0.0) raise(ErrorKind::Domain, "purity undefined: phi + varpi == 0");
    return positives / denom;
}

namespace {

// One-sided threshold test; two on the same attribute merge into an interval.
struct Test {
    std::size_t attr = 0;
    bool is_upper = false;  // true: value <= threshold; false: value > threshold
    double threshold = 0.0;
};

bool test_covers(const Test& t, std::span<const double> row) {
    return t.is_upper ? row[t.attr] <= t.threshold : row[t.attr] > t.threshold;
}

bool tests_cover(const std::vector<Test>& tests, std::size_t n_tests,
                 std::span<const double> row) {
    for (std::size_t k = 0; k < n_tests; ++k)
        if (!test_covers(tests[k], row)) return false;
    return true;
}

std::vector<Test> grow_rule(const SupervisedDataset& data,
                            const std::vector<std::size_t>& grow_set, double label) {
    std::vector<Test> tests;
    std::vector<std::size_t> covered = grow_set;

    auto count_positives = [&](const std::vector<std::size_t>& idx) {
        std::size_t pos = 0;
        for (std::size_t i : idx) pos += data.targets[i] == label ? 1 : 0;
        return pos;
    };

    double current_precision =
        covered.empty() ? 0.0 : double(count_positives(covered)) / double(covered.size());

    while (true) {
        const std::size_t covered_pos = count_positives(covered);
        if (covered_pos == covered.size()) break;  // no negatives left

        double best_precision = -1.0;
        std::size_t best_coverage = 0;
        Test best_test;
        std::vector<std::size_t> best_covered;
        bool found = false;

        for (std::size_t attr = 0; attr < data.feature_count(); ++attr) {
            std::vector<double> values;
            values.reserve(covered.size());
            for (std::size_t i : covered) values.push_back(data.rows[i][attr]);
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());

            for (std::size_t k = 0; k + 1 < values.size(); ++k) {
                const double threshold = 0.5 * (values[k] + values[k + 1]);
                for (bool is_upper : {true, false}) {
                    const Test t{attr, is_upper, threshold};
                    std::vector<std::size_t> next;
                    for (std::size_t i : covered)
                        if (test_covers(t, data.rows[i])) next.push_back(i);
                    if (next.empty() || next.size() == covered.size()) continue;
                    const double prec = double(count_positives(next)) / double(next.size());
                    if (prec > best_precision ||
                        (prec == best_precision && next.size() > best_coverage)) {
                        best_precision = prec;
                        best_coverage = next.size();
                        best_test = t;
                        best_covered = std::move(next);
                        found = true;
                    }
                }
            }
        }

        if (!found || best_precision <= current_precision) break;
        tests.push_back(best_test);
        covered = std::move(best_covered);
        current_precision = best_precision;
    }
    return tests;
}

void prune_rule(std::vector<Test>& tests, const SupervisedDataset& data,
                const std::vector<std::size_t>& prune_set, double label) {
    if (prune_set.empty()) return;
    auto accuracy = [&](std::size_t n_tests) {
        std::size_t correct = 0;
        for (std::size_t i : prune_set) {
            const bool covered = tests_cover(tests, n_tests, data.rows[i]);
            const bool positive = data.targets[i] == label;
            if (covered == positive) ++correct;
        }
        return double(correct) / double(prune_set.size());
    };
    while (!tests.empty()) {
        if (accuracy(tests.size() - 1) >= accuracy(tests.size()))
            tests.pop_back();
        else
            break;
    }
}

std::vector<CrispCondition> merge_tests(const std::vector<Test>& tests) {
    std::vector<CrispCondition> conditions;
    for (const Test& t : tests) {
        CrispCondition* cond = nullptr;
        for (auto& c : conditions)
            if (c.attribute == t.attr) cond = &c;
        if (!cond) {
            conditions.push_back(CrispCondition{t.attr, kNegInf, kPosInf});
            cond = &conditions.back();
        }
        if (t.is_upper)
            cond->upper = std::min(cond->upper, t.threshold);
        else
            cond->lower = std::max(cond->lower, t.threshold);
    }
    return conditions;
}

std::vector<ClassCount> count_classes(const SupervisedDataset& data) {
    std::map<double, std::size_t> counts;
    for (double t : data.targets) ++counts[t];
    std::vector<ClassCount> out;
    for (const auto& [label, count] : counts) out.push_back({label, count});
    return out;
}

}  // namespace

CrispModel induce_crisp_rules(const SupervisedDataset& data, const RuleInductionConfig& config) {
    if (data.size() == 0) raise(ErrorKind::InsufficientData, "induce_crisp_rules: empty dataset");
    if (!(config.prune_fraction >= 0.0 && config.prune_fraction <= 0.5))
        raise(ErrorKind::Config, "prune_fraction must lie in [0, 0.5]");

    CrispModel model;
    model.class_counts = count_classes(data);
    if (model.class_counts.size() == 1) {
        model.default_label = model.class_counts.front().label;
        return model;
    }

    const std::size_t n = data.size();
    const std::size_t n_prune = static_cast<std::size_t>(std::floor(config.prune_fraction * double(n)));
    const std::size_t n_grow = n - n_prune;
    std::vector<std::size_t> prune_set;
    for (std::size_t i = n_grow; i < n; ++i) prune_set.push_back(i);

    std::vector<char> removed(n, 0);

    for (const ClassCount& cls : model.class_counts) {
        const double label = cls.label;
        const double prior = double(cls.count) / double(n);
        std::fill(removed.begin(), removed.end(), 0);

        while (true) {
            std::vector<std::size_t> grow_set;
            bool any_positive = false;
            for (std::size_t i = 0; i < n_grow; ++i) {
                const bool positive = data.targets[i] == label;
                if (positive && removed[i]) continue;
                grow_set.push_back(i);
                any_positive = any_positive || positive;
            }
            if (!any_positive) break;

            std::vector<Test> tests = grow_rule(data, grow_set, label);
            prune_rule(tests, data, prune_set, label);

            CrispRule rule;
            rule.conditions = merge_tests(tests);
            rule.label = label;
            for (std::size_t i = 0; i < n; ++i) {
                if (!rule.covers(data.rows[i])) continue;
                if (data.targets[i] == label)
                    ++rule.covered_positives;
                else
                    ++rule.covered_negatives;
            }
            const std::size_t covered = rule.covered_positives + rule.covered_negatives;
            if (covered == 0) break;
            const double precision = double(rule.covered_positives) / double(covered);
            if (precision <= prior) break;

            bool removed_any = false;
            for (std::size_t i = 0; i < n_grow; ++i) {
                if (data.targets[i] == label && !removed[i] && rule.covers(data.rows[i])) {
                    removed[i] = 1;
                    removed_any = true;
                }
            }
            model.rules.push_back(std::move(rule));
            if (!removed_any) break;  // no progress; avoid spinning
        }
    }

    // Default label: majority class among instances no rule covers.
    std::map<double, std::size_t> residual;
    for (std::size_t i = 0; i < n; ++i) {
        bool covered = false;
        for (const auto& rule : model.rules)
            if (rule.covers(data.rows[i])) {
                covered = true;
                break;
            }
        if (!covered) ++residual[data.targets[i]];
    }
    if (residual.empty()) {
        const auto best = std::max_element(
            model.class_counts.begin(), model.class_counts.end(),
            [](const ClassCount& a, const ClassCount& b) { return a.count < b.count; });
        model.default_label = best->label;
    } else {
        std::size_t best_count = 0;
        double best_label = 0.0;
        for (const auto& [label, count] : residual) {
            if (count > best_count) {
                best_count = count;
                best_label = label;
            }
        }
        model.default_label = best_label;
    }
    return model;
}

double crisp_classify(const CrispModel& model, std::span<const double> row) {
    for (const auto& rule : model.rules)
        if (rule.covers(row)) return rule.label;
    return model.default_label;
}

double FuzzyRule::membership(std::span<const double> row) const {
    double mu = 1.0;
    for (const auto& c : conditions)
        mu = std::min(mu, trapezoid_membership(c.set, row[c.attribute]));
    return mu;
}

namespace {

struct SidePick {
    double support = 0.0;
    bool any_defined = false;
};

// Best support extension for one side of one condition: the candidate set is
// the core endpoint plus every admitted attribute value beyond it; the score
// is Eq.-style membership-weighted purity, ties to the widest support.
SidePick pick_support(const SupervisedDataset& data, const std::vector<std::size_t>& admitted,
                      std::size_t attr, double label, const FuzzySet& base, bool lower_side) {
    const double core_edge = lower_side ? base.core_low : base.core_high;
    std::set<double> candidates{core_edge};
    for (std::size_t i : admitted) {
        const double v = data.rows[i][attr];
        if (lower_side ? v < core_edge : v > core_edge) candidates.insert(v);
    }

    SidePick pick{core_edge, false};
    double best_purity = -1.0;
    for (double cand : candidates) {
        FuzzySet trial = base;
        (lower_side ? trial.support_low : trial.support_high) = cand;
        double phi = 0.0, varpi = 0.0;
        for (std::size_t i : admitted) {
            const double mu = trapezoid_membership(trial, data.rows[i][attr]);
            if (data.targets[i] == label)
                phi += mu;
            else
                varpi += mu;
        }
        if (phi + varpi <= 0.0) continue;  // candidate admits nothing
        const double p = phi / (phi + varpi);
        const bool wider = lower_side ? cand < pick.support : cand > pick.support;
        if (p > best_purity || (p == best_purity && wider)) {
            best_purity = p;
            pick.support = cand;
            pick.any_defined = true;
        }
    }
    if (!pick.any_defined) pick.support = core_edge;
    return pick;
}

}  // namespace

FuzzyRule fuzzify_rule(const CrispRule& rule, const SupervisedDataset& data) {
    FuzzyRule out;
    out.label = rule.label;
    for (const auto& c : rule.conditions) {
        FuzzyCondition fc;
        fc.attribute = c.attribute;
        fc.set = FuzzySet{c.lower, c.lower, c.upper, c.upper};
        out.conditions.push_back(std::move(fc));
    }

    for (std::size_t i = 0; i < out.conditions.size(); ++i) {
        FuzzyCondition& cond = out.conditions[i];

        // Instances admitted by every other condition in its current form
        // (already-fuzzified ones included).
        std::vector<std::size_t> admitted;
        for (std::size_t r = 0; r < data.size(); ++r) {
            bool ok = true;
            for (std::size_t j = 0; j < out.conditions.size() && ok; ++j) {
                if (j == i) continue;
                const FuzzyCondition& other = out.conditions[j];
                ok = trapezoid_membership(other.set, data.rows[r][other.attribute]) > 0.0;
            }
            if (ok) admitted.push_back(r);
        }
        if (admitted.empty()) {
            cond.collapsed = true;
            continue;
        }

        bool any_side_defined = false;
        if (std::isfinite(cond.set.core_low)) {
            const SidePick pick =
                pick_support(data, admitted, cond.attribute, rule.label, cond.set, true);
            cond.set.support_low = pick.support;
            any_side_defined = any_side_defined || pick.any_defined;
        }
        if (std::isfinite(cond.set.core_high)) {
            const SidePick pick =
                pick_support(data, admitted, cond.attribute, rule.label, cond.set, false);
            cond.set.support_high = pick.support;
            any_side_defined = any_side_defined || pick.any_defined;
        }
        cond.collapsed = !any_side_defined && (std::isfinite(cond.set.core_low) ||
                                               std::isfinite(cond.set.core_high));
    }
    return out;
}

double certainty_factor(const FuzzyRule& rule, const SupervisedDataset& train) {
    const std::size_t n = train.size();
    if (n == 0) raise(ErrorKind::Config, "certainty_factor: empty training data");
    double sum_all = 0.0, sum_class = 0.0;
    std::size_t n_class = 0;
    for (std::size_t r = 0; r < n; ++r) {
        const double mu = rule.membership(train.rows[r]);
        sum_all += mu;
        if (train.targets[r] == rule.label) {
            sum_class += mu;
            ++n_class;
        }
    }
    const double share = double(n_class) / double(n);
    return (2.0 * share + sum_class) / (2.0 + sum_all);
}

double support_for_class(std::span<const double> row, const FuzzyModel& model, double label) {
    double s = 0.0;
    for (const auto& rule : model.rules)
        if (rule.label == label) s += rule.membership(row) * rule.certainty;
    return s;
}

double classify(std::span<const double> row, const FuzzyModel& model) {
    if (model.class_counts.empty()) return model.default_label;
    double best_label = model.default_label;
    double best_support = 0.0;
    std::size_t best_prior = 0;
    bool any_positive = false;
    for (const auto& cls : model.class_counts) {
        const double s = support_for_class(row, model, cls.label);
        if (s <= 0.0) continue;
        const bool better = !any_positive || s > best_support ||
                            (s == best_support && cls.count > best_prior) ||
                            (s == best_support && cls.count == best_prior &&
                             cls.label < best_label);
        if (better) {
            best_support = s;
            best_prior = cls.count;
            best_label = cls.label;
            any_positive = true;
        }
    }
    return any_positive ? best_label : model.default_label;
}

namespace {

template <typename T>
std::optional<T> boyer_moore(std::span<const T> stream) {
    if (stream.empty()) return std::nullopt;
    T candidate = stream.front();
    std::size_t count = 0;
    for (const T& x : stream) {
        if (count == 0) {
            candidate = x;
            count = 1;
        } else if (x == candidate) {
            ++count;
        } else {
            --count;
        }
    }
    std::size_t frequency = 0;
    for (const T& x : stream)
        if (x == candidate) ++frequency;
    if (2 * frequency > stream.size()) return candidate;
    return std::nullopt;
}

}  // namespace

std::optional<std::string> majority_vote(std::span<const std::string> stream) {
    return boyer_moore(stream);
}

std::optional<long long> majority_vote(std::span<const long long> stream) {
    return boyer_moore(stream);
}

FuzzyModel build_fuzzy_model(const SupervisedDataset& data, const RuleInductionConfig& config) {
    const CrispModel crisp = induce_crisp_rules(data, config);
    FuzzyModel model;
    model.default_label = crisp.default_label;
    model.class_counts = crisp.class_counts;
    model.attribute_names = data.feature_names;
    for (const auto& rule : crisp.rules) {
        FuzzyRule fuzzy = fuzzify_rule(rule, data);
        fuzzy.certainty = certainty_factor(fuzzy, data);
        model.rules.push_back(std::move(fuzzy));
    }
    return model;
}

namespace {

// yester3days_ndic -> ndic; full Table I names collapse to the short
// attribute aliases used by the labeled dataset.
std::string canonical_attribute(const std::string& name) {
    std::string base = name;
    if (base.rfind("yester", 0) == 0) {
        const auto pos = base.find("days_");
        if (pos != std::string::npos) base = base.substr(pos + 5);
    }
    if (base == "new_daily_increase_confirmed") return "ndic";
    if (base == "new_daily_increase_suspected") return "ndis";
    return base;
}

}  // namespace

std::vector<FuzzyRule> annotate_and_filter(const FuzzyModel& model,
                                           const std::vector<SensitivityRef>& sensitivity,
                                           double display_threshold) {
    if (!(display_threshold >= 0.0 && display_threshold <= 1.0))
        raise(ErrorKind::Config, "display threshold must lie in [0,1]");

    std::vector<FuzzyRule> rules = model.rules;
    for (auto& rule : rules) {
        for (auto& cond : rule.conditions) {
            const std::string base = canonical_attribute(model.attribute_names[cond.attribute]);
            double total = 0.0;
            std::set<std::string> matched_variables;
            std::map<std::size_t, std::pair<double, std::string>> top_per_day;
            for (const auto& entry : sensitivity) {
                if (canonical_attribute(entry.variable) != base) continue;
                total += std::abs(entry.contribution_pct);
                matched_variables.insert(entry.variable);
                auto& slot = top_per_day[entry.day];
                if (slot.second.empty() || std::abs(entry.contribution_pct) > slot.first)
                    slot = {std::abs(entry.contribution_pct), entry.variable};
            }
            cond.sensitivity_annotation = total;
            cond.annotated = !matched_variables.empty();
            if (matched_variables.size() == 1) {
                cond.sensitivity_variable = *matched_variables.begin();
            } else if (matched_variables.size() > 1) {
                std::vector<std::string> picks;
                for (const auto& [day, top] : top_per_day) picks.push_back(top.second);
                const auto winner = majority_vote(std::span<const std::string>(picks));
                cond.sensitivity_variable = winner ? *winner : *matched_variables.begin();
            }
        }
    }

    std::erase_if(rules, [&](const FuzzyRule& r) { return r.certainty < display_threshold; });
    std::stable_sort(rules.begin(), rules.end(),
                     [](const FuzzyRule& a, const FuzzyRule& b) { return a.certainty > b.certainty; });
    return rules;
}

namespace {

std::string bound_text(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    return format_double(v);
}

std::string label_text(double label) {
    if (label == std::floor(label) && std::abs(label) < 1e15)
        return std::to_string(static_cast<long long>(label));
    return format_double(label);
}

}  // namespace

std::string format_rule_text(const FuzzyRule& rule, const FuzzyModel& model, std::size_t number) {
    std::string out = "RULE " + std::to_string(number) + ": ";
    if (rule.conditions.empty()) {
        out += "(any)";
    } else {
        for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
            const auto& cond = rule.conditions[i];
            if (i) out += " & ";
            out += "(" + model.attribute_names[cond.attribute] + " = '(" +
                   bound_text(cond.set.core_low) + " .. " + bound_text(cond.set.core_high) +
                   (std::isinf(cond.set.core_high) ? ")'" : "]'") + ")";
        }
    }
    out += " -> " + model.target_name + "=" + label_text(rule.label) +
           " (CF = " + format_fixed(rule.certainty, 2) + ")";
    return out;
}

std::string rules_to_text(const std::vector<FuzzyRule>& rules, const FuzzyModel& model) {
    std::string out;
    for (std::size_t i = 0; i < rules.size(); ++i)
        out += format_rule_text(rules[i], model, i + 1) + "\n";
    return out;
}

std::string rules_to_json(const std::vector<FuzzyRule>& rules, const FuzzyModel& model,
                          double display_threshold, const std::string& manifest_json) {
    json j;
    if (!manifest_json.empty()) j["manifest"] = json::parse(manifest_json);
    j["display_threshold"] = display_threshold;
    j["target"] = model.target_name;
    j["default_label"] = model.default_label;
    json arr = json::array();
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& rule = rules[i];
        json rj;
        rj["rule"] = i + 1;
        rj["label"] = rule.label;
        rj["certainty"] = rule.certainty;
        rj["text"] = format_rule_text(rule, model, i + 1);
        json conds = json::array();
        for (const auto& cond : rule.conditions) {
            json cj;
            cj["attribute"] = model.attribute_names[cond.attribute];
            cj["support_low"] = bound_text(cond.set.support_low);
            cj["core_low"] = bound_text(cond.set.core_low);
            cj["core_high"] = bound_text(cond.set.core_high);
            cj["support_high"] = bound_text(cond.set.support_high);
            cj["sensitivity_total_pct"] = cond.sensitivity_annotation;
            cj["sensitivity_variable"] = cond.sensitivity_variable;
            cj["annotated"] = cond.annotated;
            if (cond.collapsed) cj["collapsed"] = true;
            conds.push_back(cj);
        }
        rj["conditions"] = conds;
        arr.push_back(rj);
    }
    j["rules"] = arr;
    return j.dump(2) + "\n";
}

}  // namespace cmcs
