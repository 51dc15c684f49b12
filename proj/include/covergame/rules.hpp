#ifndef COVERGAME_RULES_HPP
#define COVERGAME_RULES_HPP

#include <string>
#include <vector>

#include "covergame/rational.hpp"

namespace covergame {

/// How many rule entries we are willing to build (factorial growth).
constexpr int kMaxRuleK = 64;

/// A non-increasing sequence f(1..k) of non-negative shares: f(j) is the
/// fraction of a resource's value paid to each of j co-located agents.
class DistributionRule {
 public:
  explicit DistributionRule(std::vector<Rational> values);

  int k() const { return static_cast<int>(values_.size()); }
  /// f(j), 1-based.
  const Rational& operator()(int j) const { return values_[j - 1]; }
  const std::vector<Rational>& values() const { return values_; }

  bool operator==(const DistributionRule&) const = default;

 private:
  std::vector<Rational> values_;
};

/// Non-fatal observations about a rule (the canonical rules have f(1)=1).
std::vector<std::string> rule_warnings(const DistributionRule& f);

/// max{ j*f(j) - f(j+1) for j < k, (k-1)*f(k) }; zero when k = 1. The
/// price of anarchy over games with cardinality k is exactly 1/(1+gap).
Rational anarchy_gap(const DistributionRule& f);

Rational poa_bound(const DistributionRule& f);

/// min over 1<=j<=k of 1/(1 + (j-1)*f(j)).
Rational pos_bound(const DistributionRule& f);

/// The factorial-form rule maximizing the price of anarchy:
///   f(j) = (j-1)! * (1/((k-1)(k-1)!) + sum_{i=j}^{k-1} 1/i!)
///                 / (1/((k-1)(k-1)!) + sum_{i=1}^{k-1} 1/i!)
DistributionRule gairing_rule(int k);

/// f(1)=1, zero afterwards; optimizes the price of stability.
DistributionRule marginal_contribution_rule(int k);

/// Budget-balanced baseline f(j) = 1/j.
DistributionRule equal_share_rule(int k);

/// The rule meeting every anarchy constraint for target alpha with
/// equality: f(j) = max{ (j-1)! * (1 - (1/alpha - 1) sum_{i<j} 1/i!), 0 }.
/// Throws InfeasibleRuleError when no valid rule reaches alpha.
DistributionRule frontier_rule(const Rational& alpha, int k);

/// Best price of stability attainable with anarchy at least alpha:
///   Z^k(alpha) = 1/(1 + max_{j<=k} (j-1)(j-1)!(1 - (1/alpha-1) sum_{i<j} 1/i!))
/// equal to 1 for alpha <= 1/2. Domain: 0 < alpha <= optimal_poa(k).
Rational frontier_value(const Rational& alpha, int k);

/// poa_bound(gairing_rule(k)); cross-checked against the closed form
///   (1/((k-1)(k-1)!) + sum_{i=1}^{k-1} 1/i!) /
///   (1/((k-1)(k-1)!) + sum_{i=0}^{k-1} 1/i!).
Rational optimal_poa(int k);

/// The k linear anarchy constraints at level alpha:
///   j*f(j) - f(j+1) <= 1/alpha - 1 and (k-1)*f(k) <= 1/alpha - 1.
/// Equivalent to poa_bound(f) >= alpha.
bool satisfies_poa_constraints(const DistributionRule& f, const Rational& alpha);

struct FrontierPoint {
  Rational alpha;
  Rational z;
  DistributionRule rule;
};

FrontierPoint frontier_point(const Rational& alpha, int k);

}  // namespace covergame

#endif
