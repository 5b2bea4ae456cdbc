#pragma once

#include <span>
#include <vector>

#include "ordmed/instance.hpp"
#include "ordmed/rational.hpp"

namespace ordmed {

std::vector<Rational> sorted_desc(std::span<const Rational> c);

/// w · c sorted non-increasingly.
Rational ordered_cost(std::span<const Rational> w, std::span<const Rational> c);

/// Sum of the `ell` largest entries.
Rational top_ell(std::span<const Rational> c, int ell);

/// Sum over ell of (w_ell - w_{ell+1}) * Top_ell(c); equals ordered_cost.
Rational conic_cost(std::span<const Rational> w, std::span<const Rational> c);

std::vector<Rational> pad_weights(std::span<const Rational> w, const Rational& eps);

struct SparseWeights {
  std::vector<int> pos;  // 1-based anchor indices, ascending, always ending at n
  std::vector<Rational> w;
};

SparseWeights sparsify_weights(std::span<const Rational> w, const Rational& delta);

/// Sum over anchors of (w_ell - w_next(ell)) * Top_ell(c).
Rational anchored_conic_cost(const SparseWeights& s, std::span<const Rational> c);

inline Rational truncated_distance(const Rational& d, const Rational& threshold) {
  return d >= threshold ? d : Rational(0);
}

struct Evaluation {
  std::vector<Rational> costs;  // parallel to the served list
  Rational value;
};

struct InfeasibleSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Recomputes every served client's cost from the open set and prices it with the instance weights.
Evaluation evaluate_solution(const Instance& inst, const Solution& sol);

/// Builds a solution whose assignments are the nearest open facilities (r_j of them for
/// fault-tolerant instances), ties broken by facility index.
Solution make_solution(const Instance& inst, std::vector<int> open, std::vector<int> served);

/// Sum of the r smallest distances from `client` to `open`.
Rational fault_cost(const Instance& inst, int client, std::span<const int> open, int r);

}  // namespace ordmed
