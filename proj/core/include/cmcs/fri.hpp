#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmcs/timeseries.hpp"

namespace cmcs {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Trapezoidal fuzzy set (support_low, core_low, core_high, support_high).
/// Membership is 1 on the closed core, ramps linearly over the open support
/// margins, and is 0 outside. Outer bounds may be infinite.
struct FuzzySet {
    double support_low = kNegInf;
    double core_low = kNegInf;
    double core_high = kPosInf;
    double support_high = kPosInf;
};

double trapezoid_membership(const FuzzySet& set, double value);

/// Half-open interval test lower < value <= upper. Infinite bounds mean the
/// side is untested; both sides set means two one-sided tests were merged.
struct CrispCondition {
    std::size_t attribute = 0;
    double lower = kNegInf;
    double upper = kPosInf;

    bool covers(double value) const { return value > lower && value <= upper; }
};

struct CrispRule {
    std::vector<CrispCondition> conditions;  // at most one per attribute
    double label = 0.0;
    std::size_t covered_positives = 0;  // on the training data
    std::size_t covered_negatives = 0;

    bool covers(std::span<const double> row) const;
};

struct ClassCount {
    double label = 0.0;
    std::size_t count = 0;
};

struct CrispModel {
    std::vector<CrispRule> rules;
    double default_label = 0.0;
    std::vector<ClassCount> class_counts;
};

struct RuleInductionConfig {
    double prune_fraction = 1.0 / 3.0;  // chronological tail held out for pruning
};

/// Separate-and-conquer learner with reduced-error pruning. Conditions are
/// grown greedily from midpoint thresholds by rule precision (ties: higher
/// coverage, then lower attribute index); trailing conditions are dropped
/// while prune-split accuracy does not decrease; rule learning for a class
/// stops once the best rule's precision falls to the class prior.
CrispModel induce_crisp_rules(const SupervisedDataset& data,
                              const RuleInductionConfig& config = {});

/// First matching rule wins, default label otherwise.
double crisp_classify(const CrispModel& model, std::span<const double> row);

/// phi / (phi + varpi). Undefined (error) when both are zero.
double purity(double positives, double negatives);

struct FuzzyCondition {
    std::size_t attribute = 0;
    FuzzySet set;
    double sensitivity_annotation = 0.0;
    std::string sensitivity_variable;  // representative matched variable
    bool annotated = false;
    bool collapsed = false;  // no instances available, supports stayed crisp
};

struct FuzzyRule {
    std::vector<FuzzyCondition> conditions;
    double label = 0.0;
    double certainty = 0.0;

    /// min over conditions (1 when the rule has no conditions).
    double membership(std::span<const double> row) const;
};

struct FuzzyModel {
    std::vector<FuzzyRule> rules;
    double default_label = 0.0;
    std::vector<ClassCount> class_counts;
    std::vector<std::string> attribute_names;
    std::string target_name = "win";
};

/// Chooses each side's support extension among the attribute values beyond
/// the core (plus the core endpoint), maximizing membership-weighted purity
/// over the instances admitted by the rule's other conditions; ties prefer
/// the widest support. Cores equal the crisp intervals.
FuzzyRule fuzzify_rule(const CrispRule& rule, const SupervisedDataset& data);

double certainty_factor(const FuzzyRule& rule, const SupervisedDataset& train);

double support_for_class(std::span<const double> row, const FuzzyModel& model, double label);

/// argmax of class support; ties go to the higher-prior class, then the
/// smaller label. All-zero support falls back to the default label.
double classify(std::span<const double> row, const FuzzyModel& model);

/// Boyer-Moore majority vote with a verification pass; empty when no strict
/// majority exists.
std::optional<std::string> majority_vote(std::span<const std::string> stream);
std::optional<long long> majority_vote(std::span<const long long> stream);

/// induce + fuzzify + certainty factors, wired together.
FuzzyModel build_fuzzy_model(const SupervisedDataset& data,
                             const RuleInductionConfig& config = {});

struct SensitivityRef {
    std::string variable;
    std::size_t day = 0;  // 0-based
    double contribution_pct = 0.0;
};

/// Annotates every rule condition with the total |contribution| of the
/// matching sensitivity variable (lag prefixes yester{k}days_ stripped for
/// matching; a multi-variable match is represented by the Boyer-Moore
/// majority of per-day top picks). Keeps rules with CF >= threshold, sorted
/// by CF descending.
std::vector<FuzzyRule> annotate_and_filter(const FuzzyModel& model,
                                           const std::vector<SensitivityRef>& sensitivity,
                                           double display_threshold);

std::string format_rule_text(const FuzzyRule& rule, const FuzzyModel& model, std::size_t number);
std::string rules_to_text(const std::vector<FuzzyRule>& rules, const FuzzyModel& model);
std::string rules_to_json(const std::vector<FuzzyRule>& rules, const FuzzyModel& model,
                          double display_threshold, const std::string& manifest_json);

}  // namespace cmcs
