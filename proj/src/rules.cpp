#include "covergame/rules.hpp"

#include <stdexcept>

#include "covergame/errors.hpp"

namespace covergame {

namespace {

void check_k(int k) {
  if (k < 1) throw std::domain_error("rule needs k >= 1");
  if (k > kMaxRuleK) throw std::domain_error("rules beyond k=64 are not supported");
}

Rational inv_factorial_sum(int from, int to) {
  Rational out = 0;
  for (int i = from; i <= to; ++i) out += Rational(1, factorial(i));
  return out;
}

}  // namespace

DistributionRule::DistributionRule(std::vector<Rational> values) : values_(std::move(values)) {
  check_k(static_cast<int>(values_.size()));
  for (size_t j = 0; j < values_.size(); ++j) {
    if (values_[j] < 0) throw std::invalid_argument("distribution rule entries must be >= 0");
    if (j > 0 && values_[j] > values_[j - 1])
      throw std::invalid_argument("distribution rule must be non-increasing");
  }
}

std::vector<std::string> rule_warnings(const DistributionRule& f) {
  std::vector<std::string> out;
  if (f(1) != 1) out.push_back("f(1) != 1; the canonical rules pay a lone agent the full value");
  return out;
}

Rational anarchy_gap(const DistributionRule& f) {
  const int k = f.k();
  if (k == 1) return Rational(0);
  Rational gap = (k - 1) * f(k);
  for (int j = 1; j <= k - 1; ++j) {
    const Rational candidate = j * f(j) - f(j + 1);
    if (candidate > gap) gap = candidate;
  }
  return gap;
}

Rational poa_bound(const DistributionRule& f) { return Rational(1) / (1 + anarchy_gap(f)); }

Rational pos_bound(const DistributionRule& f) {
  Rational out = 1;
  for (int j = 2; j <= f.k(); ++j) {
    const Rational candidate = Rational(1) / (1 + (j - 1) * f(j));
    if (candidate < out) out = candidate;
  }
  return out;
}

DistributionRule gairing_rule(int k) {
  check_k(k);
  if (k == 1) return DistributionRule({Rational(1)});
  const Rational head = Rational(1, BigInt(k - 1) * factorial(k - 1));
  const Rational den = head + inv_factorial_sum(1, k - 1);
  std::vector<Rational> values;
  values.reserve(k);
  for (int j = 1; j <= k; ++j)
    values.push_back(Rational(factorial(j - 1)) * (head + inv_factorial_sum(j, k - 1)) / den);
  return DistributionRule(std::move(values));
}

DistributionRule marginal_contribution_rule(int k) {
  check_k(k);
  std::vector<Rational> values(k, Rational(0));
  values[0] = 1;
  return DistributionRule(std::move(values));
}

DistributionRule equal_share_rule(int k) {
  check_k(k);
  std::vector<Rational> values;
  values.reserve(k);
  for (int j = 1; j <= k; ++j) values.emplace_back(1, j);
  return DistributionRule(std::move(values));
}

DistributionRule frontier_rule(const Rational& alpha, int k) {
  check_k(k);
  if (alpha <= 0 || alpha >= 1) throw std::domain_error("frontier rule needs 0 < alpha < 1");
  const Rational slack = Rational(1) / alpha - 1;
  std::vector<Rational> values;
  values.reserve(k);
  for (int j = 1; j <= k; ++j) {
    Rational v = Rational(factorial(j - 1)) * (1 - slack * inv_factorial_sum(1, j - 1));
    if (v < 0) v = 0;
    values.push_back(std::move(v));
  }
  for (int j = 1; j < k; ++j)
    if (values[j] > values[j - 1])
      throw InfeasibleRuleError("no non-increasing rule attains anarchy target " +
                                to_fraction_string(alpha));
  DistributionRule rule(std::move(values));
  if (poa_bound(rule) < alpha)
    throw InfeasibleRuleError("anarchy target " + to_fraction_string(alpha) +
                              " is above the optimum for k=" + std::to_string(k));
  return rule;
}

Rational frontier_value(const Rational& alpha, int k) {
  check_k(k);
  if (alpha <= 0 || alpha > optimal_poa(k))
    throw std::domain_error("frontier is defined for 0 < alpha <= optimal_poa(k)");
  if (alpha <= Rational(1, 2)) return Rational(1);
  const Rational slack = Rational(1) / alpha - 1;
  Rational inner = 0;  // j = 1 term
  for (int j = 2; j <= k; ++j) {
    const Rational candidate =
        Rational((j - 1) * factorial(j - 1)) * (1 - slack * inv_factorial_sum(1, j - 1));
    if (candidate > inner) inner = candidate;
  }
  return Rational(1) / (1 + inner);
}

Rational optimal_poa(int k) {
  check_k(k);
  const Rational out = poa_bound(gairing_rule(k));
  if (k >= 2) {
    const Rational head = Rational(1, BigInt(k - 1) * factorial(k - 1));
    const Rational closed =
        (head + inv_factorial_sum(1, k - 1)) / (head + inv_factorial_sum(0, k - 1));
    if (closed != out)
      throw InternalInconsistencyError("optimal anarchy closed form disagrees with the gap route");
  }
  return out;
}

bool satisfies_poa_constraints(const DistributionRule& f, const Rational& alpha) {
  if (alpha <= 0 || alpha >= 1) throw std::domain_error("constraints need 0 < alpha < 1");
  const Rational slack = Rational(1) / alpha - 1;
  const int k = f.k();
  for (int j = 1; j <= k - 1; ++j)
    if (j * f(j) - f(j + 1) > slack) return false;
  return (k - 1) * f(k) <= slack;
}

FrontierPoint frontier_point(const Rational& alpha, int k) {
  DistributionRule rule = alpha < 1 ? frontier_rule(alpha, k) : gairing_rule(k);
  return FrontierPoint{alpha, frontier_value(alpha, k), std::move(rule)};
}

}  // namespace covergame
