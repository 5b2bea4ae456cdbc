#include "ordmed/cost_function.hpp"

#include <stdexcept>

namespace ordmed {

int interval_count(const Rational& eps, int m) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  int t = 0;
  Rational v = eps;
  while (v <= m) {
    v *= 1 + eps;
    ++t;
  }
  return t;
}

CostFunction::CostFunction(const Rational& o1, std::vector<Rational> slopes, const Rational& eps, int m)
    : o1_(o1), slopes_(std::move(slopes)) {
  if (slopes_.empty()) throw std::invalid_argument("cost function needs at least one slope");
  for (std::size_t t = 1; t < slopes_.size(); ++t)
    if (slopes_[t] > slopes_[t - 1]) throw std::invalid_argument("slope sequence must be non-increasing");
  for (const auto& s : slopes_)
    if (s < 0) throw std::invalid_argument("slopes must be non-negative");
  if (o1_ < 0) throw std::invalid_argument("o1 must be non-negative");
  if (o1_ == 0) {
    slopes_.resize(1);
    return;
  }
  const int T = interval_count(eps, m);
  if (static_cast<int>(slopes_.size()) != T + 2)
    throw std::invalid_argument("expected " + std::to_string(T + 2) + " slopes");
  const Rational base = eps * o1_ / m;
  uppers_.assign(T + 2, 0);
  Rational up = base;
  for (int t = T + 1; t >= 1; --t) {
    uppers_[t] = up;
    up *= 1 + eps;
  }
}

CostFunction CostFunction::linear(const Rational& slope) {
  CostFunction f;
  f.slopes_ = {slope};
  return f;
}

int CostFunction::interval_of(const Rational& x) const {
  if (degenerate()) return 0;
  for (int t = static_cast<int>(uppers_.size()) - 1; t >= 1; --t)
    if (x <= uppers_[t]) return t;
  return 0;
}

}  // namespace ordmed
