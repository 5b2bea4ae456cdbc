#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ordmed/cost_function.hpp"
#include "ordmed/instance.hpp"
#include "ordmed/lp.hpp"
#include "ordmed/oracle.hpp"
#include "ordmed/robust_params.hpp"

namespace ordmed {

struct SparseInstance {
  std::vector<int> clients;  // surviving clients, ascending
  int m_prime = 0;
  std::vector<int> s0;  // pre-opened facilities, ascending
  Rational U;
  Rational U_prime;

  bool operator==(const SparseInstance&) const = default;
};

struct SparseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Upper bound on pre-opened facilities and removed balls for a given rho.
int sparse_limit(const Rational& rho);

/// Reference solution used to sparsify: the optimum of the reduced instance at scale 1.
struct StarSolution {
  std::vector<int> open;
  std::vector<int> served;  // ascending
  std::vector<int> nearest_of_point;
  std::vector<Rational> dist_of_point;  // distance of every metric point to `open`
};

StarSolution make_star(const Instance& inst, const ReducedOptimum& opt);

/// Runs the heavy-star and dense-ball removal loops against the star solution.
SparseInstance build_sparse_instance(const Instance& inst, const CostFunction& f, const Rational& U,
                                     const ReductionParams& params, const StarSolution& star);

struct SparseConditions {
  bool light_stars = true;
  bool sparse_balls = true;
  bool removed_cost = true;
  bool small_s0 = true;

  bool all() const { return light_stars && sparse_balls && removed_cost && small_s0; }
};

SparseConditions check_sparse_conditions(const Instance& inst, const CostFunction& f, const SparseInstance& sp,
                                         const ReductionParams& params, const StarSolution& star);

/// Streams candidate (surviving clients, m', pre-opened set) triples at a fixed U; returns true if cut at `cap`.
bool enumerate_sparse_instances(const Instance& inst, const Rational& U, const ReductionParams& params, long cap,
                                const std::function<bool(const SparseInstance&)>& sink);

/// Per surviving client radius caps R-hat from the greedy sequential assignment (robust variant).
std::vector<Rational> compute_radius_bounds(const Instance& inst, const SparseInstance& sp, const CostFunction& f,
                                            const ReductionParams& params);

/// Checks the small-backup property at every threshold in the distance set and every R-hat value.
bool check_radius_bounds(const Instance& inst, const SparseInstance& sp, const CostFunction& f,
                         const ReductionParams& params, const std::vector<Rational>& r_hat);

/// Knapsack radii: the largest facility distance whose ball density stays within rho U.
std::vector<Rational> knapsack_radii(const Instance& inst, const SparseInstance& sp, const CostFunction& f,
                                     const ReductionParams& params);

struct ExtLp {
  LinearProgram lp;
  std::vector<int> y_var;                             // per facility
  std::vector<std::vector<std::pair<int, int>>> x_var;  // per surviving client: (facility, variable)
  std::optional<SeparationOracle> oracle;              // explicit matroids only
};

/// `radius` holds the connection caps R_j parallel to sp.clients; empty means uncapped.
ExtLp build_ext_lp(const Instance& inst, const SparseInstance& sp, const std::vector<Rational>& radius,
                   const CostFunction& f, const ReductionParams& params);

LpResult solve_ext_lp(const ExtLp& ext);

/// Cuts of the rank inequalities y(copies of S) <= r(S) violated by `values`.
std::vector<Constraint> matroid_cuts(const MatroidSpec& matroid, int n_facilities,
                                     const std::vector<std::vector<int>>& vars_of_facility,
                                     std::span<const Rational> values);

/// Co-located facility copies with per-client outer balls.
struct CopySet {
  std::vector<int> origin;
  std::vector<Rational> y;
  std::vector<std::vector<int>> balls;  // parallel to sp.clients, ascending copy ids
};

/// Splits facilities so that each client's outer ball carries exactly its LP connection volume,
/// filling copies in order of their current star cost. Zero-volume copies are dropped.
CopySet duplicate_and_balance(const Instance& inst, const SparseInstance& sp, const ExtLp& ext,
                              std::span<const Rational> values, const CostFunction& f, const ReductionParams& params);

/// Names of the duplication guarantees that fail; empty when all hold.
std::vector<std::string> check_duplication(const Instance& inst, const SparseInstance& sp, const CopySet& cs,
                                           const CostFunction& f, const ReductionParams& params,
                                           const Rational& ext_value, bool star_bounds);

}  // namespace ordmed
