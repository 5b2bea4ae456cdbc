#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ordmed/cost_function.hpp"
#include "ordmed/instance.hpp"
#include "ordmed/lp.hpp"
#include "ordmed/robust_params.hpp"
#include "ordmed/robust_preprocess.hpp"

namespace ordmed {

/// A structural guarantee of the rounding failed; these always indicate a bug.
struct RoundingInvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

/// The rounding premise failed (e.g. a fractional pair not summing to one); the candidate is unusable.
struct RoundingPremiseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rounding clients are the surviving clients [0, n_real) followed by one virtual client per pre-opened facility.
struct RoundingState {
  std::vector<int> origin;  // per copy
  std::vector<int> clients;
  std::vector<int> s0;
  std::vector<std::vector<int>> outer;
  std::vector<std::vector<int>> inner;
  std::vector<int> level;
  std::vector<char> full;  // real clients only
  std::vector<int> core;   // ascending
  std::vector<Rational> radius;  // R_j per real client; empty when uncapped

  int n_real() const { return static_cast<int>(clients.size()); }
  int n_copies() const { return static_cast<int>(origin.size()); }
  bool in_core(int j) const;
};

RoundingState initial_state(const Instance& inst, const SparseInstance& sp, const CopySet& cs,
                            std::vector<Rational> radius, const Rational& tau);

/// Rounded-up distance between a copy and a real client.
Rational grid_distance(const Instance& inst, const RoundingState& st, int copy, int client_slot, const Rational& tau);

struct AuxLp {
  LinearProgram lp;
  std::optional<SeparationOracle> oracle;
};

AuxLp build_aux_lp(const Instance& inst, const RoundingState& st, const CostFunction& f,
                   const ReductionParams& params, int m_prime);

/// Value of the auxiliary objective at `y` (copy-indexed).
Rational aux_objective(const Instance& inst, const RoundingState& st, const CostFunction& f,
                       const ReductionParams& params, std::span<const Rational> y);

/// Names of the five structural properties that fail for `st`; empty when all hold.
std::vector<std::string> check_rounding_properties(const Instance& inst, const RoundingState& st,
                                                   const CostFunction& f, const ReductionParams& params,
                                                   const Rational& U);

struct RoundingTrace {
  std::vector<Rational> objectives;
  int iterations = 0;
  int fractional = 0;
  int property_checks = 0;
  std::vector<std::string> violations;
};

struct RoundingResult {
  std::vector<Rational> y;
  RoundingState state;
  RoundingTrace trace;
};

/// Solves the auxiliary LP repeatedly, promoting clients and shrinking balls until no constraint
/// of the two promotion kinds is tight. Throws RoundingInvariantError on any structural failure.
RoundingResult iterative_round(const Instance& inst, RoundingState st, const CostFunction& f,
                               const ReductionParams& params, int m_prime, const Rational& U);

/// Turns the almost-integral vector into an integral one per variant; returns the open copies.
std::vector<int> fix_fractional(const Instance& inst, const RoundingResult& rounded);

/// Opens the origins of `open_copies` and serves clients per variant.
Solution complete_solution(const Instance& inst, const RoundingState& st, const std::vector<int>& open_copies,
                           const SparseInstance& sp);

}  // namespace ordmed
