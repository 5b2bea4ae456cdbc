#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ordmed/guesses.hpp"
#include "ordmed/instance.hpp"
#include "ordmed/lp.hpp"

namespace ordmed {

/// Multiplier on the guessed threshold in the single-rank truncated-mass row.
inline const Rational top_lp_threshold_factor{1001, 1000};

/// One rank of the ordered objective: its top-ell bound variable, truncation threshold and weight.
struct RankRow {
  int ell = 1;
  Rational threshold;
  Rational weight;
};

struct FtLp {
  LinearProgram lp;
  std::vector<int> y_var;               // per facility
  std::vector<std::vector<int>> x_var;  // [facility][client]
  std::vector<RankRow> ranks;
  std::vector<int> r_var;  // parallel to ranks
  SeparationOracle oracle;
};

/// Single-rank program: min R subject to the truncated mass at 1.001 T and every ell-subset bound.
FtLp build_top_lp(const Instance& inst, int ell, const Rational& T);

/// Conic program over the anchor ranks of the guess, weights w~_ell - w~_next(ell).
FtLp build_ft_lp(const Instance& inst, const GuessBundle& guess);

struct FtLpSolution {
  std::vector<Rational> y;
  std::vector<std::vector<Rational>> x;  // [facility][client]
  std::vector<Rational> R;               // parallel to ranks
  Rational value;
  int rounds = 0;
};

/// Nullopt when the program is infeasible.
std::optional<FtLpSolution> solve_ft_lp(const FtLp& ft);

/// Per-client LP service cost sum_i x_ij d(i,j).
std::vector<Rational> lp_client_costs(const Instance& inst, const FtLpSolution& sol);

/// Length of the leading run of ones when w is ones followed by zeros.
std::optional<int> top_ell_length(std::span<const Rational> w);

}  // namespace ordmed
