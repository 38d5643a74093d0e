#pragma once

namespace lexent {

// Output of a pair classifier. Pairs with an out-of-vocabulary token are
// `predictable == false`; the caller decides how to score them.
struct PairPrediction {
  bool predictable = true;
  bool label = false;
  double decision = 0.0;
};

}  // namespace lexent
