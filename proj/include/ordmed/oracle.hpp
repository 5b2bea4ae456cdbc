#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ordmed/cost_function.hpp"
#include "ordmed/instance.hpp"
#include "ordmed/ordered.hpp"

namespace ordmed {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr long default_work_budget = 20'000'000;

struct ExactOptimum {
  std::vector<int> open;
  std::vector<int> served;
  Rational value;
  std::vector<Rational> service;              // parallel to `served`
  std::vector<int> nearest;                   // nearest open facility, every client
  std::vector<Rational> distance;             // distance to it, every client
  std::vector<std::vector<int>> connections;  // fault-tolerant: r_j nearest open facilities
  std::vector<Rational> xi;                   // fault-tolerant: every connection distance
};

ExactOptimum solve_robust_exact(const Instance& inst, long budget = default_work_budget);
ExactOptimum solve_matroid_exact(const Instance& inst, long budget = default_work_budget);
ExactOptimum solve_knapsack_exact(const Instance& inst, long budget = default_work_budget);
ExactOptimum solve_ft_exact(const Instance& inst, long budget = default_work_budget);
ExactOptimum solve_exact(const Instance& inst, long budget = default_work_budget);

/// Nearest member of `open` to an arbitrary point of the metric, ties by facility index.
std::pair<int, Rational> nearest_open(const Instance& inst, std::span<const int> open, int point);

struct ReducedOptimum {
  std::vector<int> open;
  std::vector<int> served;
  Rational value;
};

/// Minimum of sum f(lambda * d(j, F)) over feasible (F, served set); not defined for fault-tolerant instances.
ReducedOptimum reduced_instance_solve(const Instance& inst, const CostFunction& f, const Rational& lambda,
                                      long budget = default_work_budget);

inline Rational reduced_instance_opt(const Instance& inst, const CostFunction& f, const Rational& lambda,
                                     long budget = default_work_budget) {
  return reduced_instance_solve(inst, f, lambda, budget).value;
}

/// Feasible open sets of the instance as bitmasks, in increasing mask order.
std::vector<std::uint64_t> feasible_open_masks(const Instance& inst, long budget = default_work_budget);

std::vector<int> mask_members(std::uint64_t mask);

}  // namespace ordmed
