#include "ordmed/robust_params.hpp"

#include <algorithm>
#include <stdexcept>

namespace ordmed {

namespace {

Rational sigma_of(const Rational& tau) { return (tau - 1) / (tau * (3 * tau - 1)); }

}  // namespace

Rational robust_lambda(const Rational& delta, const Rational& tau) {
  const Rational s = sigma_of(tau);
  const Rational gamma = delta * s / (4 + 3 * delta + delta * s);
  const Rational a = Rational(2) / (2 + delta) * gamma / (1 + gamma);
  const Rational b = (1 - delta) * (1 - delta / 4) / (1 + 3 * delta / 4) * s * (1 - gamma) / (1 + gamma);
  return std::min(a, b);
}

Rational knapsack_lambda(const Rational& delta, const Rational& tau) {
  const Rational s = sigma_of(tau);
  const Rational gamma = delta * s / (2 + delta * s);
  const Rational a = gamma / (1 + gamma);
  const Rational b = (1 - delta) * s * (1 - gamma) / (1 + gamma);
  return std::min(a, b);
}

ReductionParams ReductionParams::robust_preset() {
  ReductionParams p;
  p.delta = Rational(81765, 100000);
  p.tau = Rational(184, 100);
  p.delta.canonicalize();
  p.tau.canonicalize();
  p.lambda = robust_lambda(p.delta, p.tau);
  return p;
}

ReductionParams ReductionParams::knapsack_preset() {
  ReductionParams p;
  p.delta = Rational(2, 3);
  p.tau = Rational(9, 5);
  p.lambda = knapsack_lambda(p.delta, p.tau);
  return p;
}

ReductionParams ReductionParams::matroid_preset() {
  ReductionParams p;
  p.delta = Rational(1, 2);
  p.tau = Rational(9, 5);
  p.lambda = p.sigma();
  return p;
}

ReductionParams ReductionParams::preset(VariantKind v) {
  switch (v) {
    case VariantKind::robust: return robust_preset();
    case VariantKind::knapsack: return knapsack_preset();
    case VariantKind::matroid: return matroid_preset();
    case VariantKind::fault_tolerant: break;
  }
  throw std::invalid_argument("no reduction preset for fault-tolerant instances");
}

Rational ReductionParams::star_scale(VariantKind v) const {
  return v == VariantKind::robust ? Rational(2 / (2 + delta)) : Rational(1);
}

void ReductionParams::validate(VariantKind v) const {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0,1)");
  if (rho <= 0) throw std::invalid_argument("rho must be positive");
  if (tau <= 1) throw std::invalid_argument("tau must exceed 1");
  if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
  const Rational cap = v == VariantKind::robust ? Rational(2 / (2 + delta)) : Rational(1);
  if (lambda1() > cap)
    throw std::invalid_argument("lambda too large: lambda1 = " + to_string(lambda1()) + " exceeds " + to_string(cap));
}

Rational grid_value(const Rational& tau, int level) {
  if (level == -2) return -1;
  if (level == -1) return 0;
  return power(tau, level);
}

int grid_level(const Rational& tau, const Rational& d) {
  if (d < 0) throw std::invalid_argument("negative distance");
  if (d == 0) return -1;
  if (d <= 1) return 0;
  return static_cast<int>(ceil_log(tau, d));
}

}  // namespace ordmed
