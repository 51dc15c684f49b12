#ifndef COVERGAME_VERIFICATION_HPP
#define COVERGAME_VERIFICATION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace covergame {

struct CheckResult {
  std::string id;
  std::string description;
  bool pass = false;
  std::string measured;
  std::string expected;
  std::string tolerance;
  double millis = 0.0;
};

struct VerifyOptions {
  int k_max = 12;        // >= 2; the Gairing-table check needs >= 10
  int sweep_size = 500;  // random games behind the sweep checks
  uint64_t seed = 1;
  int jobs = 0;      // 0: all hardware threads
  int level_m = 30;  // depth of the geometric tightness instance
  std::ostream* progress = nullptr;
};

/// Runs the full guarantee suite: closed-form tables, tightness of the
/// anarchy/stability constructions, the random-game lower-bound sweeps,
/// the frontier grid search, the state-based mechanism guarantees, the
/// reduction/repair machinery and the potential identities. Deterministic
/// given the options.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace covergame

#endif
