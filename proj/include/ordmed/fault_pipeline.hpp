#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordmed/fault_lp.hpp"
#include "ordmed/fault_rounding.hpp"
#include "ordmed/guesses.hpp"
#include "ordmed/instance_io.hpp"
#include "ordmed/oracle.hpp"
#include "ordmed/robust_pipeline.hpp"

namespace ordmed {

struct FtOptions {
  Rational eps{1, 4};
  Rational delta{1, 4};
  SolveMode mode = SolveMode::oracle;
  long cap = 100000;
  long budget = default_work_budget;
  int samples = 200;
  std::uint64_t seed = 1;
  long marginal_samples = 0;  // extra draws for the marginal report; 0 skips it
};

struct FtChecks {
  bool lp_within_opt = true;  // oracle mode only
  bool guess_sanity = true;   // oracle mode, general weights only
  std::vector<std::string> bundle_failures;
  int client_bound_flags = 0;  // (client, rank) pairs whose mean exceeds the per-client bound; informational
  std::optional<MarginalReport> marginals;

  bool all() const { return lp_within_opt && guess_sanity && bundle_failures.empty(); }
};

struct FtResult {
  Solution solution;  // best sample
  Evaluation evaluation;
  Rational mean_cost, min_cost, max_cost;
  int samples = 0;
  std::optional<Rational> opt;
  bool top_ell = false;
  GuessBundle guess;
  std::vector<RankRow> ranks;
  FtLpSolution lp;
  RoundingPlan plan;
  FtChecks checks;
  long candidates = 0;
  bool truncated = false;

  Json stats_json() const;
};

/// Rounds one LP solution `samples` times; exposed for tests that vary the threshold rows.
FtResult round_ft_solution(const Instance& inst, const FtLpSolution& lp, std::vector<RankRow> ranks,
                           const FtOptions& opts);

/// Oracle-assisted threshold guess: exact xi values for Top-ell weights, grid values otherwise.
GuessBundle ft_guess(const Instance& inst, const ExactOptimum& opt, const FtOptions& opts);

/// Builds the program matching the guess: the single-rank program for Top-ell weights, else the conic one.
FtLp ft_program(const Instance& inst, const GuessBundle& guess);

FtResult solve_ft(const Instance& inst, const FtOptions& opts);

}  // namespace ordmed
