#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordmed/instance.hpp"
#include "ordmed/lp.hpp"

namespace ordmed {

/// A structural guarantee of the stochastic rounding failed.
struct FaultRoundingError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Co-located facility copies where every client is served by its nearest r_j volume,
/// with unit-volume boundaries falling between copies.
struct FractionalFt {
  std::vector<int> origin;
  std::vector<Rational> y;
  std::vector<int> r;
  std::vector<std::vector<int>> ball;                // F_j, nearest first
  std::vector<std::vector<std::vector<int>>> parts;  // F_{j,p}, p = 0..r_j-1
  std::vector<std::vector<Rational>> d_av_p, d_max_p, d_min_p;
  std::vector<Rational> d_av;

  int n_copies() const { return static_cast<int>(origin.size()); }
  const Rational& dist(const Instance& inst, int copy, int client) const { return inst.d(origin[copy], client); }

  /// Splits `copy` so it keeps volume `keep`; the remainder becomes a twin placed right after it
  /// in every client list. Returns the twin.
  int split(int copy, const Rational& keep);
};

/// Duplicates facilities so each client's nearest r_j volume and its unit parts are unions of copies.
FractionalFt split_facilities(const Instance& inst, std::span<const Rational> y);

struct BundleFamily {
  std::vector<std::vector<int>> bundles;  // copy ids, each of unit volume
  std::vector<std::vector<int>> queue;    // per client: r_j distinct bundle indices
};

/// Greedy bundle creation; further splits may be applied to `ft`.
BundleFamily create_bundles(const Instance& inst, FractionalFt& ft);

/// Disjointness, unit volume, queue shape and the 3 d_max^p bound; names of failures.
std::vector<std::string> check_bundles(const Instance& inst, const FractionalFt& ft, const BundleFamily& bf);

struct DangerFilter {
  std::vector<int> dangerous;
  std::vector<int> kept;  // pairwise non-conflicting, in selection order
};

DangerFilter filter_dangerous(const Instance& inst, const FractionalFt& ft);

struct LaminarFamily {
  std::vector<int> clients;                // the kept dangerous clients, in construction order
  std::vector<std::vector<int>> ball;      // B_j
  std::vector<std::vector<int>> merged;    // B'_j
};

/// Merges balls of smaller demand into larger ones; throws FaultRoundingError if the result is not
/// laminar or some B'_j leaves Ball(j, d_max(j)/10).
LaminarFamily build_laminar(const Instance& inst, const FractionalFt& ft, const DangerFilter& filter);

/// Feasibility system whose integral points are the admissible roundings.
LinearProgram build_aux_polytope(const Instance& inst, const FractionalFt& ft, const BundleFamily& bf,
                                 const LaminarFamily& lam);

struct SampledSolution {
  std::vector<int> z;     // per copy, 0 or 1
  std::vector<int> open;  // distinct origins, ascending
};

/// Everything needed to draw roundings of one fractional solution.
struct RoundingPlan {
  FractionalFt ft;
  BundleFamily bundles;
  DangerFilter filter;
  LaminarFamily laminar;
  LinearProgram polytope;
  VertexDecomposition decomposition;
  std::vector<std::string> bundle_failures;
};

/// Runs splitting, bundling, filtering, laminar construction and decomposition.
RoundingPlan prepare_rounding(const Instance& inst, std::span<const Rational> y);

/// Draws one vertex and checks every per-sample guarantee.
SampledSolution stochastic_round(const Instance& inst, const RoundingPlan& plan, std::mt19937_64& rng);

struct MarginalReport {
  long samples = 0;
  double max_copy_z = 0;    // largest |freq - y| / sigma over fractional copies
  double max_ball_z = 0;    // same for Pr[z'(B'_j) = r_j]
  bool within(double bound) const { return max_copy_z <= bound && max_ball_z <= bound; }
};

MarginalReport marginal_test(const Instance& inst, const RoundingPlan& plan, long samples, std::uint64_t seed);

/// Per-sample generator derived from the master seed.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace ordmed
