#include "ordmed/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace ordmed {

std::vector<int> mask_members(std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1U) out.push_back(i);
  return out;
}

std::vector<std::uint64_t> feasible_open_masks(const Instance& inst, long budget) {
  const int nf = inst.n_facilities();
  if (nf > 30) throw BudgetExceeded("brute force supports at most 30 facilities");
  std::vector<std::uint64_t> out;
  const std::uint64_t total = std::uint64_t{1} << nf;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    const int size = std::popcount(mask);
    bool ok = false;
    switch (inst.kind()) {
      case VariantKind::robust: ok = size <= inst.robust().k; break;
      case VariantKind::fault_tolerant: {
        const auto& r = inst.fault().r;
        ok = size <= inst.fault().k && size >= *std::max_element(r.begin(), r.end());
        break;
      }
      case VariantKind::matroid: ok = inst.matroid().is_independent(mask); break;
      case VariantKind::knapsack: {
        Rational w = 0;
        for (int i : mask_members(mask)) w += inst.knapsack().wt[i];
        ok = w <= inst.knapsack().budget;
        break;
      }
    }
    if (ok) out.push_back(mask);
  }
  const long work = static_cast<long>(out.size()) * inst.n_clients() * nf;
  if (work > budget)
    throw BudgetExceeded("oracle work " + std::to_string(work) + " exceeds budget " + std::to_string(budget));
  if (out.empty()) throw std::runtime_error("instance has no feasible facility set");
  return out;
}

std::pair<int, Rational> nearest_open(const Instance& inst, std::span<const int> open, int point) {
  int best = -1;
  Rational bd;
  for (int i : open) {
    const Rational& d = inst.metric.at(inst.metric.facility_point(i), point);
    if (best < 0 || d < bd) {
      best = i;
      bd = d;
    }
  }
  return {best, bd};
}

namespace {

// Clients ordered by (distance to the open set, index).
std::vector<int> clients_by_distance(const std::vector<Rational>& dist) {
  std::vector<int> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
  return order;
}

std::vector<Rational> distances_to(const Instance& inst, std::span<const int> open) {
  std::vector<Rational> d(inst.n_clients());
  for (int j = 0; j < inst.n_clients(); ++j) d[j] = nearest_open(inst, open, inst.metric.client_point(j)).second;
  return d;
}

ExactOptimum single_assignment_optimum(const Instance& inst, long budget) {
  const int need = inst.served_count();
  bool have = false;
  ExactOptimum best;
  for (auto mask : feasible_open_masks(inst, budget)) {
    auto open = mask_members(mask);
    auto dist = distances_to(inst, open);
    auto order = clients_by_distance(dist);
    order.resize(need);
    std::vector<Rational> cost;
    for (int j : order) cost.push_back(dist[j]);
    Rational value = ordered_cost(inst.w, cost);
    if (!have || value < best.value) {
      have = true;
      best.open = open;
      std::sort(order.begin(), order.end());
      best.served = order;
      best.value = value;
    }
  }
  best.nearest.resize(inst.n_clients());
  best.distance.resize(inst.n_clients());
  for (int j = 0; j < inst.n_clients(); ++j)
    std::tie(best.nearest[j], best.distance[j]) = nearest_open(inst, best.open, inst.metric.client_point(j));
  for (int j : best.served) best.service.push_back(best.distance[j]);
  return best;
}

}  // namespace

ExactOptimum solve_robust_exact(const Instance& inst, long budget) {
  if (inst.kind() != VariantKind::robust) throw std::invalid_argument("robust oracle on a non-robust instance");
  return single_assignment_optimum(inst, budget);
}

ExactOptimum solve_matroid_exact(const Instance& inst, long budget) {
  if (inst.kind() != VariantKind::matroid) throw std::invalid_argument("matroid oracle on a non-matroid instance");
  return single_assignment_optimum(inst, budget);
}

ExactOptimum solve_knapsack_exact(const Instance& inst, long budget) {
  if (inst.kind() != VariantKind::knapsack) throw std::invalid_argument("knapsack oracle on a non-knapsack instance");
  return single_assignment_optimum(inst, budget);
}

ExactOptimum solve_ft_exact(const Instance& inst, long budget) {
  if (inst.kind() != VariantKind::fault_tolerant)
    throw std::invalid_argument("fault-tolerant oracle on another variant");
  const auto& r = inst.fault().r;
  if (inst.fault().k < *std::max_element(r.begin(), r.end())) throw std::invalid_argument("k < max r_j");
  bool have = false;
  ExactOptimum best;
  for (auto mask : feasible_open_masks(inst, budget)) {
    auto open = mask_members(mask);
    std::vector<Rational> cost;
    for (int j = 0; j < inst.n_clients(); ++j) cost.push_back(fault_cost(inst, j, open, r[j]));
    Rational value = ordered_cost(inst.w, cost);
    if (!have || value < best.value) {
      have = true;
      best.open = open;
      best.value = value;
      best.service = cost;
    }
  }
  best.served.resize(inst.n_clients());
  std::iota(best.served.begin(), best.served.end(), 0);
  for (int j = 0; j < inst.n_clients(); ++j) {
    std::vector<int> order = best.open;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return inst.d(a, j) < inst.d(b, j); });
    order.resize(r[j]);
    for (int i : order) best.xi.push_back(inst.d(i, j));
    best.nearest.push_back(order.front());
    best.distance.push_back(inst.d(order.front(), j));
    best.connections.push_back(std::move(order));
  }
  return best;
}

ExactOptimum solve_exact(const Instance& inst, long budget) {
  switch (inst.kind()) {
    case VariantKind::robust: return solve_robust_exact(inst, budget);
    case VariantKind::matroid: return solve_matroid_exact(inst, budget);
    case VariantKind::knapsack: return solve_knapsack_exact(inst, budget);
    case VariantKind::fault_tolerant: return solve_ft_exact(inst, budget);
  }
  throw std::logic_error("unknown variant");
}

ReducedOptimum reduced_instance_solve(const Instance& inst, const CostFunction& f, const Rational& lambda, long budget) {
  if (inst.kind() == VariantKind::fault_tolerant)
    throw std::invalid_argument("reduced instances are defined for single-assignment variants");
  const int need = inst.served_count();
  bool have = false;
  ReducedOptimum best;
  for (auto mask : feasible_open_masks(inst, budget)) {
    auto open = mask_members(mask);
    auto dist = distances_to(inst, open);
    auto order = clients_by_distance(dist);
    order.resize(need);
    Rational value = 0;
    for (int j : order) value += f(lambda * dist[j]);
    if (!have || value < best.value) {
      have = true;
      best.open = open;
      std::sort(order.begin(), order.end());
      best.served = order;
      best.value = value;
    }
  }
  return best;
}

}  // namespace ordmed
