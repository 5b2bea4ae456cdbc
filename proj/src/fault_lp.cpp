#include "ordmed/fault_lp.hpp"

#include <algorithm>
#include <numeric>

#include "ordmed/ordered.hpp"

namespace ordmed {

namespace {

// Sort-and-sum separation: for every rank, the ell clients of largest LP cost.
SeparationOracle top_ell_oracle(const Instance& inst, const std::vector<std::vector<int>>& x_var,
                                const std::vector<RankRow>& ranks, const std::vector<int>& r_var) {
  return [&inst, x_var, ranks, r_var](std::span<const Rational> values) {
    const int nf = inst.n_facilities(), nc = inst.n_clients();
    std::vector<Rational> cost(nc);
    for (int j = 0; j < nc; ++j)
      for (int i = 0; i < nf; ++i) cost[j] += values[x_var[i][j]] * inst.d(i, j);
    std::vector<int> order(nc);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cost[a] > cost[b]; });
    std::vector<Constraint> cuts;
    for (std::size_t q = 0; q < ranks.size(); ++q) {
      const int ell = ranks[q].ell;
      Rational top = 0;
      for (int t = 0; t < ell; ++t) top += cost[order[t]];
      if (top <= values[r_var[q]]) continue;
      Constraint c;
      c.rel = Relation::le;
      c.rhs = 0;
      c.name = "top" + std::to_string(ell);
      for (int t = 0; t < ell; ++t)
        for (int i = 0; i < nf; ++i)
          if (inst.d(i, order[t]) != 0) c.terms.push_back({x_var[i][order[t]], inst.d(i, order[t])});
      c.terms.push_back({r_var[q], Rational(-1)});
      cuts.push_back(std::move(c));
    }
    return cuts;
  };
}

FtLp build_common(const Instance& inst, std::vector<RankRow> ranks) {
  const auto& spec = inst.fault();
  const int nf = inst.n_facilities(), nc = inst.n_clients();
  FtLp ft;
  ft.ranks = std::move(ranks);
  for (int i = 0; i < nf; ++i) ft.y_var.push_back(ft.lp.add_variable("y" + std::to_string(i), Rational(0), Rational(1)));
  ft.x_var.assign(nf, std::vector<int>(nc));
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nc; ++j)
      ft.x_var[i][j] = ft.lp.add_variable("x" + std::to_string(i) + "_" + std::to_string(j), Rational(0), Rational(1));
  std::vector<Term> objective;
  for (const auto& row : ft.ranks) {
    int r = ft.lp.add_variable("R" + std::to_string(row.ell));
    ft.r_var.push_back(r);
    if (row.weight != 0) objective.push_back({r, row.weight});
  }
  ft.lp.set_objective(std::move(objective));

  for (std::size_t q = 0; q < ft.ranks.size(); ++q) {
    Constraint c{{}, Relation::le, 0, "mass" + std::to_string(ft.ranks[q].ell)};
    for (int i = 0; i < nf; ++i)
      for (int j = 0; j < nc; ++j) {
        const Rational trunc = truncated_distance(inst.d(i, j), ft.ranks[q].threshold);
        if (trunc != 0) c.terms.push_back({ft.x_var[i][j], trunc});
      }
    c.terms.push_back({ft.r_var[q], Rational(-1)});
    ft.lp.add_constraint(std::move(c));
  }
  for (int j = 0; j < nc; ++j) {
    Constraint c{{}, Relation::eq, Rational(spec.r[j]), "demand" + std::to_string(j)};
    for (int i = 0; i < nf; ++i) c.terms.push_back({ft.x_var[i][j], Rational(1)});
    ft.lp.add_constraint(std::move(c));
  }
  Constraint open{{}, Relation::eq, Rational(spec.k), "open"};
  for (int i = 0; i < nf; ++i) open.terms.push_back({ft.y_var[i], Rational(1)});
  ft.lp.add_constraint(std::move(open));
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nc; ++j)
      ft.lp.add_constraint({{{ft.x_var[i][j], Rational(1)}, {ft.y_var[i], Rational(-1)}}, Relation::le, 0, "xy"});
  ft.oracle = top_ell_oracle(inst, ft.x_var, ft.ranks, ft.r_var);
  return ft;
}

}  // namespace

FtLp build_top_lp(const Instance& inst, int ell, const Rational& T) {
  if (ell < 1 || ell > inst.n_clients()) throw std::invalid_argument("rank out of range");
  if (T < 0) throw std::invalid_argument("threshold must be non-negative");
  return build_common(inst, {RankRow{ell, top_lp_threshold_factor * T, Rational(1)}});
}

FtLp build_ft_lp(const Instance& inst, const GuessBundle& guess) {
  if (guess.pos.empty() || guess.pos.size() != guess.t.size()) throw std::invalid_argument("malformed threshold guess");
  std::vector<RankRow> ranks;
  for (std::size_t q = 0; q < guess.pos.size(); ++q) {
    const int ell = guess.pos[q];
    const int next = q + 1 < guess.pos.size() ? guess.pos[q + 1] : inst.n_clients() + 1;
    const Rational w_next = next <= inst.n_clients() ? guess.w_tilde[next - 1] : Rational(0);
    ranks.push_back({ell, guess.t[q], guess.w_tilde[ell - 1] - w_next});
  }
  return build_common(inst, std::move(ranks));
}

std::optional<FtLpSolution> solve_ft_lp(const FtLp& ft) {
  auto gen = solve_with_generation(ft.lp, ft.oracle);
  if (gen.result.status == LpStatus::unbounded) throw std::logic_error("fault LP unbounded");
  if (!gen.result.optimal()) return std::nullopt;
  const auto& v = gen.result.solution.values;
  FtLpSolution s;
  for (int var : ft.y_var) s.y.push_back(v[var]);
  for (const auto& row : ft.x_var) {
    s.x.emplace_back();
    for (int var : row) s.x.back().push_back(v[var]);
  }
  for (int var : ft.r_var) s.R.push_back(v[var]);
  s.value = gen.result.solution.objective_value;
  s.rounds = gen.rounds;
  return s;
}

std::vector<Rational> lp_client_costs(const Instance& inst, const FtLpSolution& sol) {
  std::vector<Rational> cost(inst.n_clients());
  for (int i = 0; i < inst.n_facilities(); ++i)
    for (int j = 0; j < inst.n_clients(); ++j) cost[j] += sol.x[i][j] * inst.d(i, j);
  return cost;
}

std::optional<int> top_ell_length(std::span<const Rational> w) {
  int ell = 0;
  while (ell < static_cast<int>(w.size()) && w[ell] == 1) ++ell;
  if (ell == 0) return std::nullopt;
  for (std::size_t t = ell; t < w.size(); ++t)
    if (w[t] != 0) return std::nullopt;
  return ell;
}

}  // namespace ordmed
