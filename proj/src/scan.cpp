#include "covergame/scan.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "covergame/errors.hpp"

namespace covergame {

ProfileSpace::ProfileSpace(const Game& game) {
  actions_.reserve(game.num_agents());
  for (const auto& agent : game.agents()) {
    std::vector<int32_t> acts = agent.actions;
    if (agent.allow_null) acts.push_back(kNullChoice);
    const uint64_t radix = acts.size();
    actions_.push_back(std::move(acts));
    if (total_ > std::numeric_limits<uint64_t>::max() / radix) {
      overflow_ = true;
      total_ = std::numeric_limits<uint64_t>::max();
    } else if (!overflow_) {
      total_ *= radix;
    }
  }
}

void ProfileSpace::decode(uint64_t index, int32_t* digits) const {
  for (int i = static_cast<int>(actions_.size()) - 1; i >= 0; --i) {
    const uint64_t radix = actions_[i].size();
    digits[i] = static_cast<int32_t>(index % radix);
    index /= radix;
  }
}

Allocation ProfileSpace::allocation_at(uint64_t index) const {
  const int n = static_cast<int>(actions_.size());
  std::vector<int32_t> digits(n);
  decode(index, digits.data());
  Allocation a;
  a.choice.resize(n);
  for (int i = 0; i < n; ++i) a.choice[i] = actions_[i][digits[i]];
  return a;
}

uint64_t ProfileSpace::index_of(const Allocation& a) const {
  uint64_t index = 0;
  for (size_t i = 0; i < actions_.size(); ++i) {
    const auto& acts = actions_[i];
    const auto it = std::find(acts.begin(), acts.end(), a.choice[i]);
    if (it == acts.end()) throw std::invalid_argument("allocation not in profile space");
    index = index * acts.size() + static_cast<uint64_t>(it - acts.begin());
  }
  return index;
}

namespace {

// Per-scalar tables: payoff[r * (k+1) + c] = v_r * f(c), wvalue[r] = v_r,
// both pre-scaled for the integer kernel.
template <typename S>
struct Tables {
  int n = 0;
  int num_resources = 0;
  int rule_k = 0;
  std::vector<int32_t> act;       // concatenated action lists
  std::vector<int32_t> act_off;   // n + 1 offsets
  std::vector<S> payoff;
  std::vector<S> wvalue;
  S tol{};
  Rational welfare_unit;  // exact welfare = scaled value * welfare_unit
};

template <typename S>
void flatten_actions(const ProfileSpace& space, Tables<S>& t) {
  t.act_off.push_back(0);
  for (const auto& acts : space.actions()) {
    t.act.insert(t.act.end(), acts.begin(), acts.end());
    t.act_off.push_back(static_cast<int32_t>(t.act.size()));
  }
}

Tables<Rational> build_rational_tables(const Game& game, const ProfileSpace& space,
                                       const DistributionRule& f, const Rational& tol) {
  Tables<Rational> t;
  t.n = game.num_agents();
  t.num_resources = game.num_resources();
  t.rule_k = f.k();
  flatten_actions(space, t);
  t.payoff.assign(static_cast<size_t>(t.num_resources) * (t.rule_k + 1), Rational(0));
  for (int32_t r = 0; r < t.num_resources; ++r) {
    t.wvalue.push_back(game.resource(r).value);
    for (int c = 1; c <= t.rule_k; ++c)
      t.payoff[static_cast<size_t>(r) * (t.rule_k + 1) + c] = game.resource(r).value * f(c);
  }
  t.tol = tol;
  t.welfare_unit = 1;
  return t;
}

// Margin so sums and tolerance-shifted comparisons cannot overflow.
constexpr int64_t kIntLimit = std::numeric_limits<int64_t>::max() / 8;

std::optional<Tables<int64_t>> build_integer_tables(const Game& game, const ProfileSpace& space,
                                                    const DistributionRule& f,
                                                    const Rational& tol) {
  BigInt value_lcm = 1;
  for (const auto& r : game.resources()) value_lcm = lcm(value_lcm, denominator(r.value));
  BigInt rule_lcm = 1;
  for (const auto& v : f.values()) rule_lcm = lcm(rule_lcm, denominator(v));
  const BigInt scale = value_lcm * rule_lcm;

  const auto fits = [](const BigInt& x) { return x >= -kIntLimit && x <= kIntLimit; };

  Tables<int64_t> t;
  t.n = game.num_agents();
  t.num_resources = game.num_resources();
  t.rule_k = f.k();
  flatten_actions(space, t);
  t.payoff.assign(static_cast<size_t>(t.num_resources) * (t.rule_k + 1), 0);

  BigInt welfare_sum = 0;
  for (int32_t r = 0; r < t.num_resources; ++r) {
    const Rational& v = game.resource(r).value;
    const BigInt scaled_value = numerator(v) * (value_lcm / denominator(v));
    welfare_sum += scaled_value;
    if (!fits(scaled_value) || !fits(welfare_sum)) return std::nullopt;
    t.wvalue.push_back(scaled_value.convert_to<int64_t>());
    for (int c = 1; c <= t.rule_k; ++c) {
      const Rational u = v * f(c);
      const BigInt scaled = numerator(u) * (scale / denominator(u));
      if (!fits(scaled)) return std::nullopt;
      t.payoff[static_cast<size_t>(r) * (t.rule_k + 1) + c] = scaled.convert_to<int64_t>();
    }
  }
  // floor(tol * scale): exact because utilities live on the 1/scale grid.
  const BigInt tol_scaled = numerator(tol) * scale / denominator(tol);
  if (!fits(tol_scaled)) return std::nullopt;
  t.tol = tol_scaled.convert_to<int64_t>();
  t.welfare_unit = Rational(1, value_lcm);
  return t;
}

template <typename S>
struct BlockStats {
  uint64_t profiles = 0;
  uint64_t num_equilibria = 0;
  bool has_profile = false;
  S opt_w{};
  uint64_t opt_idx = 0;
  bool has_eq = false;
  S worst_w{};
  uint64_t worst_idx = 0;
  S best_w{};
  uint64_t best_idx = 0;
  std::vector<uint64_t> eq_indices;
  bool local_truncated = false;
};

// Walks profiles [lo, hi) with incremental coverage counts. Exact
// arithmetic makes the incremental welfare independent of the walk path,
// so block results merge into exactly the single-pass answer.
template <typename S>
BlockStats<S> scan_block(const ProfileSpace& space, const Tables<S>& t, uint64_t lo, uint64_t hi,
                         uint64_t collect_limit) {
  BlockStats<S> stats;
  const int n = t.n;
  const int stride = t.rule_k + 1;

  std::vector<int32_t> digits(n);
  space.decode(lo, digits.data());
  std::vector<int32_t> counts(t.num_resources, 0);
  for (int i = 0; i < n; ++i) {
    const int32_t r = t.act[t.act_off[i] + digits[i]];
    if (r >= 0) ++counts[r];
  }
  S w{};
  for (int32_t r = 0; r < t.num_resources; ++r)
    if (counts[r] > 0) w += t.wvalue[r];

  for (uint64_t idx = lo; idx < hi; ++idx) {
    ++stats.profiles;
    if (!stats.has_profile || w > stats.opt_w) {
      stats.has_profile = true;
      stats.opt_w = w;
      stats.opt_idx = idx;
    }

    bool is_eq = true;
    for (int i = 0; i < n && is_eq; ++i) {
      const int32_t* acts = t.act.data() + t.act_off[i];
      const int len = t.act_off[i + 1] - t.act_off[i];
      const int d = digits[i];
      const int32_t r = acts[d];
      const S ucur = r >= 0 ? t.payoff[static_cast<size_t>(r) * stride + counts[r]] : S{};
      for (int p = 0; p < len; ++p) {
        if (p == d) continue;
        const int32_t q = acts[p];
        const S udev = q >= 0 ? t.payoff[static_cast<size_t>(q) * stride + counts[q] + 1] : S{};
        if (ucur + t.tol < udev) {
          is_eq = false;
          break;
        }
      }
    }
    if (is_eq) {
      ++stats.num_equilibria;
      if (!stats.has_eq) {
        stats.has_eq = true;
        stats.worst_w = w;
        stats.worst_idx = idx;
        stats.best_w = w;
        stats.best_idx = idx;
      } else {
        if (w < stats.worst_w) {
          stats.worst_w = w;
          stats.worst_idx = idx;
        }
        if (w > stats.best_w) {
          stats.best_w = w;
          stats.best_idx = idx;
        }
      }
      if (stats.eq_indices.size() < collect_limit)
        stats.eq_indices.push_back(idx);
      else
        stats.local_truncated = true;
    }

    if (idx + 1 == hi) break;
    // odometer step, least significant digit last
    for (int i = n - 1; i >= 0; --i) {
      const int32_t* acts = t.act.data() + t.act_off[i];
      const int len = t.act_off[i + 1] - t.act_off[i];
      const int32_t old_r = acts[digits[i]];
      if (old_r >= 0 && --counts[old_r] == 0) w -= t.wvalue[old_r];
      const bool carry = ++digits[i] == len;
      if (carry) digits[i] = 0;
      const int32_t new_r = acts[digits[i]];
      if (new_r >= 0 && ++counts[new_r] == 1) w += t.wvalue[new_r];
      if (!carry) break;
    }
  }
  return stats;
}

template <typename S>
ScanResult run_scan(const ProfileSpace& space, const Tables<S>& t, uint64_t collect_limit,
                    int jobs) {
  const uint64_t total = space.count();
  int threads = jobs;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  if (threads <= 0) threads = 1;
#endif
  const uint64_t nblocks = std::max<uint64_t>(
      1, std::min<uint64_t>(static_cast<uint64_t>(threads), total));
  std::vector<BlockStats<S>> blocks(nblocks);

#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1) num_threads(static_cast<int>(nblocks))
#endif
  for (int64_t b = 0; b < static_cast<int64_t>(nblocks); ++b) {
    const uint64_t lo = total / nblocks * b + std::min<uint64_t>(b, total % nblocks);
    const uint64_t hi = total / nblocks * (b + 1) + std::min<uint64_t>(b + 1, total % nblocks);
    blocks[b] = scan_block(space, t, lo, hi, collect_limit);
  }

  // merge in block (= index) order
  ScanResult out;
  S opt_w{}, worst_w{}, best_w{};
  bool have_opt = false;
  for (const auto& s : blocks) {
    out.profiles += s.profiles;
    out.num_equilibria += s.num_equilibria;
    if (s.has_profile && (!have_opt || s.opt_w > opt_w)) {
      have_opt = true;
      opt_w = s.opt_w;
      out.opt_index = s.opt_idx;
    }
    if (s.has_eq) {
      if (!out.has_equilibrium) {
        out.has_equilibrium = true;
        worst_w = s.worst_w;
        out.worst_eq_index = s.worst_idx;
        best_w = s.best_w;
        out.best_eq_index = s.best_idx;
      } else {
        if (s.worst_w < worst_w) {
          worst_w = s.worst_w;
          out.worst_eq_index = s.worst_idx;
        }
        if (s.best_w > best_w) {
          best_w = s.best_w;
          out.best_eq_index = s.best_idx;
        }
      }
    }
    if (s.local_truncated) out.truncated = true;
    for (uint64_t idx : s.eq_indices) {
      if (out.equilibrium_indices.size() < collect_limit)
        out.equilibrium_indices.push_back(idx);
      else
        out.truncated = true;
    }
  }
  out.opt_welfare = Rational(opt_w) * t.welfare_unit;
  if (out.has_equilibrium) {
    out.worst_eq_welfare = Rational(worst_w) * t.welfare_unit;
    out.best_eq_welfare = Rational(best_w) * t.welfare_unit;
  }
  return out;
}

void check_rule_covers_game(const Game& game, const DistributionRule& f) {
  if (f.k() < game.cardinality())
    throw std::domain_error("rule is undefined above coverage " + std::to_string(f.k()) +
                            " but the game has cardinality " +
                            std::to_string(game.cardinality()));
}

void check_tolerance(const Rational& tol) {
  if (tol < 0) throw std::domain_error("equilibrium tolerance must be non-negative");
}

}  // namespace

ScanResult scan_profiles_reference(const Game& game, const DistributionRule& f,
                                   const Rational& tol, uint64_t collect_limit) {
  check_rule_covers_game(game, f);
  check_tolerance(tol);
  const ProfileSpace space(game);
  if (space.overflowed()) throw CapExceededError(space.count());
  const int n = game.num_agents();

  ScanResult out;
  std::vector<int32_t> digits(n);
  for (uint64_t idx = 0; idx < space.count(); ++idx) {
    space.decode(idx, digits.data());
    Allocation a;
    a.choice.resize(n);
    for (int i = 0; i < n; ++i) a.choice[i] = space.actions()[i][digits[i]];

    const Rational w = welfare(game, a);
    ++out.profiles;
    if (out.profiles == 1 || w > out.opt_welfare) {
      out.opt_welfare = w;
      out.opt_index = idx;
    }

    bool is_eq = true;
    for (int i = 0; i < n && is_eq; ++i) {
      const Rational ucur = utility(game, f, i, a);
      Allocation b = a;
      for (int32_t alt : space.actions()[i]) {
        if (alt == a.choice[i]) continue;
        b.choice[i] = alt;
        if (ucur + tol < utility(game, f, i, b)) {
          is_eq = false;
          break;
        }
      }
    }
    if (!is_eq) continue;
    ++out.num_equilibria;
    if (!out.has_equilibrium) {
      out.has_equilibrium = true;
      out.worst_eq_welfare = out.best_eq_welfare = w;
      out.worst_eq_index = out.best_eq_index = idx;
    } else {
      if (w < out.worst_eq_welfare) {
        out.worst_eq_welfare = w;
        out.worst_eq_index = idx;
      }
      if (w > out.best_eq_welfare) {
        out.best_eq_welfare = w;
        out.best_eq_index = idx;
      }
    }
    if (out.equilibrium_indices.size() < collect_limit)
      out.equilibrium_indices.push_back(idx);
    else
      out.truncated = true;
  }
  return out;
}

ScanResult scan_profiles(const Game& game, const DistributionRule& f, const Rational& tol,
                         uint64_t collect_limit, int jobs) {
  check_rule_covers_game(game, f);
  check_tolerance(tol);
  const ProfileSpace space(game);
  if (space.overflowed()) throw CapExceededError(space.count());
  if (auto tables = build_integer_tables(game, space, f, tol))
    return run_scan(space, *tables, collect_limit, jobs);
  const auto tables = build_rational_tables(game, space, f, tol);
  return run_scan(space, tables, collect_limit, jobs);
}

bool integer_kernel_applicable(const Game& game, const DistributionRule& f, const Rational& tol) {
  const ProfileSpace space(game);
  return build_integer_tables(game, space, f, tol).has_value();
}

}  // namespace covergame
