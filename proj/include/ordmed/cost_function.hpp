#pragma once

#include <vector>

#include "ordmed/rational.hpp"

namespace ordmed {

/// Smallest T >= 0 with eps * (1+eps)^T > m.
int interval_count(const Rational& eps, int m);

/// Piecewise-linear surrogate: slope t on interval t, where interval T+1 is [0, base],
/// interval t in [1, T] is (base (1+eps)^(T-t), base (1+eps)^(T-t+1)] and interval 0 is
/// everything above, with base = eps * o1 / m. With o1 = 0 the function is a single ray.
class CostFunction {
 public:
  CostFunction() = default;
  CostFunction(const Rational& o1, std::vector<Rational> slopes, const Rational& eps, int m);

  static CostFunction linear(const Rational& slope);

  Rational operator()(const Rational& x) const { return slopes_[interval_of(x)] * x; }
  int interval_of(const Rational& x) const;

  bool degenerate() const { return uppers_.empty(); }
  int T() const { return degenerate() ? 0 : static_cast<int>(slopes_.size()) - 2; }
  const Rational& o1() const { return o1_; }
  const std::vector<Rational>& slopes() const { return slopes_; }
  /// Upper end of interval t for t in [1, T+1]; index 0 unused.
  const std::vector<Rational>& uppers() const { return uppers_; }

 private:
  Rational o1_ = 0;
  std::vector<Rational> slopes_{Rational(1)};
  std::vector<Rational> uppers_;
};

}  // namespace ordmed
