#ifndef COVERGAME_ERRORS_HPP
#define COVERGAME_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace covergame {

/// Malformed input files or invalid game documents.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Profile space larger than the configured cap; carries the required count.
struct CapExceededError : std::runtime_error {
  uint64_t required;
  explicit CapExceededError(uint64_t required_profiles)
      : std::runtime_error("profile cap exceeded, enumeration needs " +
                           std::to_string(required_profiles) + " profiles"),
        required(required_profiles) {}
};

/// The requested anarchy target admits no valid non-increasing rule.
struct InfeasibleRuleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A condition the theory guarantees failed to hold; indicates a bug.
struct InternalInconsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace covergame

#endif
