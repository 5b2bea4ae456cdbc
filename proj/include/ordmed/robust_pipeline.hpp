#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ordmed/guesses.hpp"
#include "ordmed/instance_io.hpp"
#include "ordmed/ordered.hpp"
#include "ordmed/robust_params.hpp"
#include "ordmed/robust_preprocess.hpp"
#include "ordmed/robust_rounding.hpp"

namespace ordmed {

enum class SolveMode { oracle, enumerate };

std::string to_string(SolveMode m);
SolveMode parse_solve_mode(std::string_view s);

struct PipelineOptions {
  ReductionParams params;
  SolveMode mode = SolveMode::oracle;
  long cap = 100000;
  long budget = default_work_budget;
};

/// Outcome of the exact per-stage checks on one candidate.
struct StageChecks {
  bool sparse = true;       // heavy-star, dense-ball and removed-cost conditions
  bool radius = true;       // small-backup property of the radius caps
  bool ext_bound = true;    // ExtLP optimum within its scaled U' bound
  bool duplication = true;  // the five duplication guarantees
  bool embedding = true;    // first auxiliary optimum <= ExtLP value re-priced <= ExtLP optimum
  std::vector<std::string> notes;

  bool all() const { return sparse && radius && ext_bound && duplication && embedding; }
};

struct CandidateTrace {
  GuessBundle guess;
  Rational U;
  SparseInstance sparse;
  std::optional<Rational> ext_value;
  std::optional<Rational> aux_start;
  RoundingTrace rounding;
  std::vector<int> open;
  Rational cost;
  StageChecks checks;
  bool short_circuit = false;
};

struct PipelineResult {
  Solution solution;
  Evaluation evaluation;
  CandidateTrace best;
  std::optional<Rational> opt;  // oracle mode only
  long candidates = 0;
  long rejected = 0;
  bool truncated = false;

  Json trace_json() const;
};

PipelineResult solve_robust(const Instance& inst, const PipelineOptions& opts);
PipelineResult solve_matroid(const Instance& inst, const PipelineOptions& opts);
PipelineResult solve_knapsack(const Instance& inst, const PipelineOptions& opts);

/// Dispatches on the instance variant (single-assignment variants only).
PipelineResult solve_single_assignment(const Instance& inst, const PipelineOptions& opts);

/// Cost of the best feasible set found by adding facilities one at a time, priced by f.
std::pair<std::vector<int>, Rational> greedy_surrogate(const Instance& inst, const CostFunction& f);

/// The faithful surrogate built from the brute-force optimum.
CostFunction faithful_function(const Instance& inst, const ExactOptimum& opt, const Rational& eps);

}  // namespace ordmed
