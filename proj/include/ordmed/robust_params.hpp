#pragma once

#include "ordmed/instance.hpp"
#include "ordmed/rational.hpp"

namespace ordmed {

/// Constants of the single-assignment reduction. The LP scales follow from tau and lambda:
/// lambda1 = lambda / sigma, lambda2 = lambda1 / tau with sigma = (tau-1) / (tau (3 tau - 1)).
struct ReductionParams {
  Rational eps{1, 4};
  Rational delta;
  Rational rho{1, 10};
  Rational tau;
  Rational lambda;

  Rational sigma() const { return (tau - 1) / (tau * (3 * tau - 1)); }
  Rational lambda1() const { return lambda / sigma(); }
  Rational lambda2() const { return lambda1() / tau; }

  /// Ratio of the distance scale used by star costs: 2/(2+delta) for robust, 1 otherwise.
  Rational star_scale(VariantKind v) const;

  /// Throws std::invalid_argument when the constants fall outside the admissible region for `v`.
  void validate(VariantKind v) const;

  static ReductionParams robust_preset();
  static ReductionParams knapsack_preset();
  static ReductionParams matroid_preset();
  static ReductionParams preset(VariantKind v);
};

/// Largest lambda admitted by the two robust rounding conditions at (delta, tau).
Rational robust_lambda(const Rational& delta, const Rational& tau);

/// Largest lambda admitted by the two knapsack rounding conditions at (delta, tau).
Rational knapsack_lambda(const Rational& delta, const Rational& tau);

/// Discretized distance grid: level -2 is -1, level -1 is 0, level l >= 0 is tau^l.
Rational grid_value(const Rational& tau, int level);

/// Smallest level whose grid value is >= d.
int grid_level(const Rational& tau, const Rational& d);

}  // namespace ordmed
