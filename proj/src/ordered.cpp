#include "ordmed/ordered.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ordmed {

std::vector<Rational> sorted_desc(std::span<const Rational> c) {
  std::vector<Rational> out(c.begin(), c.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Rational ordered_cost(std::span<const Rational> w, std::span<const Rational> c) {
  if (w.size() != c.size()) throw std::invalid_argument("ordered_cost: length mismatch");
  auto s = sorted_desc(c);
  Rational total = 0;
  for (std::size_t i = 0; i < s.size(); ++i) total += w[i] * s[i];
  return total;
}

Rational top_ell(std::span<const Rational> c, int ell) {
  if (ell < 1 || ell > static_cast<int>(c.size())) throw std::out_of_range("top_ell: ell out of range");
  auto s = sorted_desc(c);
  Rational total = 0;
  for (int i = 0; i < ell; ++i) total += s[i];
  return total;
}

Rational conic_cost(std::span<const Rational> w, std::span<const Rational> c) {
  if (w.size() != c.size()) throw std::invalid_argument("conic_cost: length mismatch");
  auto s = sorted_desc(c);
  Rational total = 0, prefix = 0;
  for (std::size_t l = 0; l < s.size(); ++l) {
    prefix += s[l];
    Rational next = l + 1 < w.size() ? w[l + 1] : Rational(0);
    total += (w[l] - next) * prefix;
  }
  return total;
}

std::vector<Rational> pad_weights(std::span<const Rational> w, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("pad_weights: eps must be positive");
  std::vector<Rational> out(w.begin(), w.end());
  if (out.empty()) return out;
  const Rational floor = eps * w[0] / static_cast<long>(w.size());
  for (auto& x : out) x = std::max(x, floor);
  return out;
}

SparseWeights sparsify_weights(std::span<const Rational> w, const Rational& delta) {
  if (delta <= 0) throw std::invalid_argument("sparsify_weights: delta must be positive");
  const long n = static_cast<long>(w.size());
  SparseWeights out;
  if (n == 0) return out;
  std::set<long> pos;
  Rational p = 1;
  while (true) {
    Integer c = ceil_of(p);
    if (c >= n) break;
    pos.insert(c.get_si());
    p *= 1 + delta;
  }
  pos.insert(n);
  out.pos.assign(pos.begin(), pos.end());
  out.w.assign(w.begin(), w.end());
  for (std::size_t a = 0; a + 1 < out.pos.size(); ++a)
    for (long i = out.pos[a] + 1; i < out.pos[a + 1]; ++i) out.w[i - 1] = w[out.pos[a + 1] - 1];
  return out;
}

Rational anchored_conic_cost(const SparseWeights& s, std::span<const Rational> c) {
  auto sorted = sorted_desc(c);
  Rational total = 0;
  for (std::size_t a = 0; a < s.pos.size(); ++a) {
    const int ell = s.pos[a];
    Rational next = a + 1 < s.pos.size() ? s.w[s.pos[a + 1] - 1] : Rational(0);
    Rational top = 0;
    for (int i = 0; i < ell; ++i) top += sorted[i];
    total += (s.w[ell - 1] - next) * top;
  }
  return total;
}

Rational fault_cost(const Instance& inst, int client, std::span<const int> open, int r) {
  std::vector<Rational> d;
  d.reserve(open.size());
  for (int i : open) d.push_back(inst.d(i, client));
  if (static_cast<int>(d.size()) < r) throw InfeasibleSolution("fewer open facilities than r_j");
  std::partial_sort(d.begin(), d.begin() + r, d.end());
  Rational total = 0;
  for (int p = 0; p < r; ++p) total += d[p];
  return total;
}

Solution make_solution(const Instance& inst, std::vector<int> open, std::vector<int> served) {
  std::sort(open.begin(), open.end());
  std::sort(served.begin(), served.end());
  Solution sol{std::move(open), std::move(served), {}};
  for (int j : sol.served) {
    std::vector<int> order = sol.open;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return inst.d(a, j) < inst.d(b, j); });
    const int r = inst.kind() == VariantKind::fault_tolerant ? inst.fault().r[j] : 1;
    order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(r)));
    sol.assignment.push_back(std::move(order));
  }
  return sol;
}

Evaluation evaluate_solution(const Instance& inst, const Solution& sol) {
  if (!inst.feasible_open_set(sol.open)) throw InfeasibleSolution("open set infeasible for the variant");
  const int need = inst.served_count();
  std::set<int> served(sol.served.begin(), sol.served.end());
  if (static_cast<int>(served.size()) != need || static_cast<int>(sol.served.size()) != need)
    throw InfeasibleSolution("served set must contain exactly " + std::to_string(need) + " distinct clients");
  for (int j : sol.served)
    if (j < 0 || j >= inst.n_clients()) throw InfeasibleSolution("served client out of range");

  Evaluation ev;
  ev.costs.reserve(sol.served.size());
  for (int j : sol.served) {
    if (inst.kind() == VariantKind::fault_tolerant) {
      ev.costs.push_back(fault_cost(inst, j, sol.open, inst.fault().r[j]));
    } else {
      Rational best = inst.d(sol.open.front(), j);
      for (int i : sol.open) best = std::min(best, inst.d(i, j));
      ev.costs.push_back(best);
    }
  }
  ev.value = ordered_cost(inst.w, ev.costs);
  return ev;
}

}  // namespace ordmed
