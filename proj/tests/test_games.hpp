#ifndef COVERGAME_TEST_GAMES_HPP
#define COVERGAME_TEST_GAMES_HPP

#include "covergame/game.hpp"
#include "covergame/rational.hpp"
#include "covergame/rules.hpp"

namespace covergame::testing {

// two agents sharing r0, private alternatives worth 0.6 and 0.4
inline Game make_e1() {
  return Game({{"r0", Rational(1)}, {"r1", Rational(3, 5)}, {"r2", Rational(2, 5)}},
              {{"a1", {0, 1}, false}, {"a2", {0, 2}, false}}, 2);
}

// like e1 but the outside option r2 is the most valuable resource
inline Game make_e2() {
  return Game({{"r0", Rational(1)}, {"r1", Rational(1, 2)}, {"r2", Rational(2)}},
              {{"a1", {0, 1}, false}, {"a2", {0, 2}, false}}, 2);
}

// three agents over two resources, cardinality 3
inline Game make_e3() {
  return Game({{"r0", Rational(1)}, {"r1", Rational(3, 5)}},
              {{"a1", {0, 1}, false}, {"a2", {0, 1}, false}, {"a3", {0, 1}, false}}, 3);
}

inline Allocation alloc(std::vector<int32_t> choice) { return Allocation{std::move(choice)}; }

inline DistributionRule half_rule() { return DistributionRule({Rational(1), Rational(1, 2)}); }

}  // namespace covergame::testing

#endif
