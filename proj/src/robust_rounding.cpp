#include "ordmed/robust_rounding.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ordmed/ordered.hpp"

namespace ordmed {

namespace {

int level_of(const Instance& inst, const RoundingState& st, int copy, int slot, const Rational& tau) {
  return grid_level(tau, inst.d(st.origin[copy], st.clients[slot]));
}

std::vector<int> inner_ball(const Instance& inst, const RoundingState& st, int slot, const Rational& tau) {
  std::vector<int> out;
  if (slot >= st.n_real()) return out;
  for (int c : st.outer[slot])
    if (level_of(inst, st, c, slot, tau) <= st.level[slot] - 1) out.push_back(c);
  return out;
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

Rational volume(const std::vector<int>& set, std::span<const Rational> y) {
  Rational v = 0;
  for (int c : set) v += y[c];
  return v;
}

void update_core(RoundingState& st, int j) {
  if (st.in_core(j)) return;
  for (int other : st.core)
    if (st.level[other] <= st.level[j] && intersects(st.outer[j], st.outer[other])) return;
  std::erase_if(st.core, [&](int other) { return intersects(st.outer[j], st.outer[other]); });
  st.core.insert(std::lower_bound(st.core.begin(), st.core.end(), j), j);
}

bool is_fractional(const Rational& v) { return v > 0 && v < 1; }

std::vector<std::vector<int>> copies_by_origin(const Instance& inst, const RoundingState& st) {
  std::vector<std::vector<int>> groups(inst.n_facilities());
  for (int c = 0; c < st.n_copies(); ++c) groups[st.origin[c]].push_back(c);
  return groups;
}

}  // namespace

bool RoundingState::in_core(int j) const { return std::binary_search(core.begin(), core.end(), j); }

Rational grid_distance(const Instance& inst, const RoundingState& st, int copy, int client_slot, const Rational& tau) {
  return grid_value(tau, level_of(inst, st, copy, client_slot, tau));
}

RoundingState initial_state(const Instance& inst, const SparseInstance& sp, const CopySet& cs,
                            std::vector<Rational> radius, const Rational& tau) {
  RoundingState st;
  st.origin = cs.origin;
  st.clients = sp.clients;
  st.s0 = sp.s0;
  st.radius = std::move(radius);
  const int n = st.n_real();
  for (int a = 0; a < n; ++a) {
    st.outer.push_back(cs.balls[a]);
    int lvl = -1;
    for (int c : cs.balls[a]) lvl = std::max(lvl, level_of(inst, st, c, a, tau));
    st.level.push_back(lvl);
  }
  for (int s : st.s0) {
    std::vector<int> all;
    for (int c = 0; c < st.n_copies(); ++c)
      if (st.origin[c] == s) all.push_back(c);
    st.outer.push_back(std::move(all));
    st.level.push_back(-1);
    st.core.push_back(static_cast<int>(st.outer.size()) - 1);
  }
  st.full.assign(n, 0);
  for (int a = 0; a < static_cast<int>(st.outer.size()); ++a) st.inner.push_back(inner_ball(inst, st, a, tau));
  return st;
}

AuxLp build_aux_lp(const Instance& inst, const RoundingState& st, const CostFunction& f,
                   const ReductionParams& params, int m_prime) {
  AuxLp aux;
  auto& lp = aux.lp;
  const int nc = st.n_copies();
  for (int c = 0; c < nc; ++c) lp.add_variable("y" + std::to_string(c), Rational(0), Rational(1));
  const Rational l2 = params.lambda2();
  std::vector<Rational> coef(nc, 0);
  Rational constant = 0;
  int n_full = 0;
  std::vector<Term> coverage;
  for (int a = 0; a < st.n_real(); ++a) {
    if (st.full[a]) {
      ++n_full;
      const Rational rim = f(l2 * grid_value(params.tau, st.level[a]));
      constant += rim;
      for (int c : st.inner[a]) coef[c] += f(l2 * grid_distance(inst, st, c, a, params.tau)) - rim;
      if (!st.inner[a].empty()) {
        std::vector<Term> t;
        for (int c : st.inner[a]) t.push_back({c, 1});
        lp.add_constraint({std::move(t), Relation::le, 1, "inner" + std::to_string(a)});
      }
    } else {
      std::vector<Term> t;
      for (int c : st.outer[a]) {
        coef[c] += f(l2 * grid_distance(inst, st, c, a, params.tau));
        t.push_back({c, 1});
        coverage.push_back({c, 1});
      }
      if (!t.empty()) lp.add_constraint({std::move(t), Relation::le, 1, "outer" + std::to_string(a)});
    }
  }
  for (int j : st.core) {
    std::vector<Term> t;
    for (int c : st.outer[j]) t.push_back({c, 1});
    lp.add_constraint({std::move(t), Relation::eq, 1, "core" + std::to_string(j)});
  }
  lp.add_constraint({coverage, Relation::ge, m_prime - n_full, "coverage"});

  switch (inst.kind()) {
    case VariantKind::robust: {
      std::vector<Term> t;
      for (int c = 0; c < nc; ++c) t.push_back({c, 1});
      lp.add_constraint({std::move(t), Relation::le, inst.robust().k, "cardinality"});
      break;
    }
    case VariantKind::knapsack: {
      std::vector<Term> t;
      for (int c = 0; c < nc; ++c) t.push_back({c, inst.knapsack().wt[st.origin[c]]});
      lp.add_constraint({std::move(t), Relation::le, inst.knapsack().budget, "budget"});
      break;
    }
    case VariantKind::matroid: {
      const auto& mat = inst.matroid();
      auto groups = copies_by_origin(inst, st);
      if (mat.kind == MatroidSpec::Kind::partition) {
        for (std::size_t q = 0; q < mat.parts.size(); ++q) {
          std::vector<Term> t;
          for (int i : mat.parts[q])
            for (int c : groups[i]) t.push_back({c, 1});
          if (!t.empty()) lp.add_constraint({std::move(t), Relation::le, mat.capacities[q], "part" + std::to_string(q)});
        }
        for (int i = 0; i < inst.n_facilities(); ++i) {
          if (groups[i].size() < 2) continue;
          std::vector<Term> t;
          for (int c : groups[i]) t.push_back({c, 1});
          lp.add_constraint({std::move(t), Relation::le, 1, "location" + std::to_string(i)});
        }
      } else {
        const int nf = inst.n_facilities();
        aux.oracle = [&mat, nf, groups](std::span<const Rational> values) {
          return matroid_cuts(mat, nf, groups, values);
        };
      }
      break;
    }
    case VariantKind::fault_tolerant: throw std::invalid_argument("auxiliary LP is for single-assignment variants");
  }

  std::vector<Term> objective;
  for (int c = 0; c < nc; ++c)
    if (coef[c] != 0) objective.push_back({c, coef[c]});
  lp.set_objective(std::move(objective), Sense::minimize, constant);
  return aux;
}

Rational aux_objective(const Instance& inst, const RoundingState& st, const CostFunction& f,
                       const ReductionParams& params, std::span<const Rational> y) {
  const Rational l2 = params.lambda2();
  Rational total = 0;
  for (int a = 0; a < st.n_real(); ++a) {
    if (st.full[a]) {
      const Rational rim = f(l2 * grid_value(params.tau, st.level[a]));
      total += (1 - volume(st.inner[a], y)) * rim;
      for (int c : st.inner[a]) total += y[c] * f(l2 * grid_distance(inst, st, c, a, params.tau));
    } else {
      for (int c : st.outer[a]) total += y[c] * f(l2 * grid_distance(inst, st, c, a, params.tau));
    }
  }
  return total;
}

std::vector<std::string> check_rounding_properties(const Instance& inst, const RoundingState& st,
                                                   const CostFunction& f, const ReductionParams& params,
                                                   const Rational& U) {
  std::vector<std::string> bad;
  const int n = st.n_real();
  for (int v = n; v < static_cast<int>(st.outer.size()); ++v)
    if (!st.in_core(v)) bad.push_back("pre-opened facility left the core");
  for (int j : st.core)
    if (j < n && !st.full[j]) bad.push_back("core client not full");
  for (std::size_t p = 0; p < st.core.size(); ++p)
    for (std::size_t q = p + 1; q < st.core.size(); ++q)
      if (intersects(st.outer[st.core[p]], st.outer[st.core[q]])) bad.push_back("core outer balls intersect");
  if (!st.radius.empty())
    for (int a = 0; a < n; ++a)
      if (grid_value(params.tau, st.level[a]) > params.tau * st.radius[a]) bad.push_back("radius level above tau R");
  for (int lvl : st.level)
    if (lvl < -1) bad.push_back("radius level below -1");
  if (inst.kind() != VariantKind::matroid) {
    const Rational scale = params.star_scale(inst.kind());
    std::vector<Rational> load(st.n_copies(), 0);
    for (int a = 0; a < n; ++a)
      for (int c : st.outer[a]) load[c] += f(scale * inst.d(st.origin[c], st.clients[a]));
    for (int c = 0; c < st.n_copies(); ++c) {
      if (std::binary_search(st.s0.begin(), st.s0.end(), st.origin[c])) continue;
      if (load[c] > 2 * params.rho * U) bad.push_back("star cost above 2 rho U");
    }
  }
  return bad;
}

RoundingResult iterative_round(const Instance& inst, RoundingState st, const CostFunction& f,
                               const ReductionParams& params, int m_prime, const Rational& U) {
  RoundingResult out;
  auto& trace = out.trace;
  auto assert_properties = [&] {
    ++trace.property_checks;
    auto bad = check_rounding_properties(inst, st, f, params, U);
    if (!bad.empty()) {
      trace.violations = bad;
      throw RoundingInvariantError("rounding property failed: " + bad.front());
    }
  };
  assert_properties();
  const int guard = 100000;
  std::vector<Rational> y;
  for (;;) {
    if (trace.iterations > guard) throw RoundingInvariantError("iterative rounding did not terminate");
    auto aux = build_aux_lp(inst, st, f, params, m_prime);
    if (!y.empty()) {
      // The previous point stays feasible with the same value after each modification.
      if (!aux.lp.satisfies(y)) throw RoundingInvariantError("previous solution infeasible after modification");
      if (aux.lp.objective_value(y) != trace.objectives.back())
        throw RoundingInvariantError("objective changed by the modification");
    }
    LpResult res = aux.oracle ? solve_with_generation(aux.lp, *aux.oracle).result : solve_basic(aux.lp);
    if (!res.optimal()) throw RoundingInvariantError("auxiliary LP not solvable");
    y = res.solution.values;
    const Rational value = res.solution.objective_value;
    if (!trace.objectives.empty() && value > trace.objectives.back())
      throw RoundingInvariantError("auxiliary objective increased");
    trace.objectives.push_back(value);

    int promote = -1, shrink = -1;
    for (int a = 0; a < st.n_real() && promote < 0; ++a)
      if (!st.full[a] && !st.outer[a].empty() && volume(st.outer[a], y) == 1) promote = a;
    if (promote < 0)
      for (int a = 0; a < st.n_real() && shrink < 0; ++a)
        if (st.full[a] && !st.inner[a].empty() && volume(st.inner[a], y) == 1) shrink = a;
    if (promote >= 0) {
      st.full[promote] = 1;
      st.inner[promote] = inner_ball(inst, st, promote, params.tau);
      update_core(st, promote);
    } else if (shrink >= 0) {
      --st.level[shrink];
      st.outer[shrink] = st.inner[shrink];
      st.inner[shrink] = inner_ball(inst, st, shrink, params.tau);
      update_core(st, shrink);
    } else {
      break;
    }
    ++trace.iterations;
    assert_properties();
  }
  trace.fractional = static_cast<int>(std::count_if(y.begin(), y.end(), is_fractional));
  const int allowed = inst.kind() == VariantKind::matroid ? 0 : 2;
  if (trace.fractional > allowed)
    throw RoundingInvariantError(std::to_string(trace.fractional) + " fractional values at exit");
  out.y = std::move(y);
  out.state = std::move(st);
  return out;
}

std::vector<int> fix_fractional(const Instance& inst, const RoundingResult& rounded) {
  const auto& y = rounded.y;
  const auto& st = rounded.state;
  std::vector<int> frac, open;
  for (int c = 0; c < static_cast<int>(y.size()); ++c) {
    if (is_fractional(y[c])) frac.push_back(c);
    if (y[c] == 1) open.push_back(c);
  }
  switch (inst.kind()) {
    case VariantKind::robust:
      if (frac.size() == 1) {
        open.push_back(frac[0]);
      } else if (frac.size() == 2) {
        const int a = frac[0], b = frac[1];
        if (y[a] + y[b] != 1) throw RoundingPremiseError("fractional pair does not sum to one");
        int only_a = 0, only_b = 0;
        for (int j = 0; j < st.n_real(); ++j) {
          if (st.full[j]) continue;
          const bool ha = std::binary_search(st.outer[j].begin(), st.outer[j].end(), a);
          const bool hb = std::binary_search(st.outer[j].begin(), st.outer[j].end(), b);
          if (ha && !hb) ++only_a;
          if (hb && !ha) ++only_b;
        }
        open.push_back(only_a >= only_b ? a : b);
      }
      break;
    case VariantKind::knapsack:
      if (frac.size() == 2) {
        const auto& wt = inst.knapsack().wt;
        const int a = frac[0], b = frac[1];
        open.push_back(wt[st.origin[b]] < wt[st.origin[a]] ? b : a);
      }
      break;
    case VariantKind::matroid:
      if (!frac.empty()) throw RoundingInvariantError("matroid rounding left fractional values");
      break;
    case VariantKind::fault_tolerant: throw std::invalid_argument("fix_fractional is for single-assignment variants");
  }
  std::sort(open.begin(), open.end());
  std::set<int> origins;
  for (int c : open) origins.insert(st.origin[c]);
  std::vector<int> loc(origins.begin(), origins.end());
  if (!inst.feasible_open_set(loc)) {
    if (inst.kind() == VariantKind::knapsack) throw RoundingPremiseError("rounded facility set exceeds the budget");
    throw RoundingInvariantError("rounded facility set infeasible");
  }
  return open;
}

Solution complete_solution(const Instance& inst, const RoundingState& st, const std::vector<int>& open_copies,
                           const SparseInstance& sp) {
  std::set<int> origins;
  for (int c : open_copies) origins.insert(st.origin[c]);
  std::vector<int> open(origins.begin(), origins.end());
  if (open.empty()) throw RoundingInvariantError("rounding opened no facility");
  std::vector<int> served;
  if (inst.kind() == VariantKind::robust) {
    const int m = inst.robust().m;
    auto pick = [&](std::vector<int> pool, int count) {
      if (static_cast<int>(pool.size()) < count) throw RoundingInvariantError("not enough clients to complete");
      std::vector<std::pair<Rational, int>> keyed;
      for (int j : pool) keyed.push_back({nearest_open(inst, open, inst.metric.client_point(j)).second, j});
      std::sort(keyed.begin(), keyed.end());
      for (int t = 0; t < count; ++t) served.push_back(keyed[t].second);
    };
    std::vector<int> rest;
    for (int j = 0; j < inst.n_clients(); ++j)
      if (!std::binary_search(sp.clients.begin(), sp.clients.end(), j)) rest.push_back(j);
    pick(sp.clients, sp.m_prime);
    pick(rest, m - sp.m_prime);
    std::sort(served.begin(), served.end());
  } else {
    served.resize(inst.n_clients());
    std::iota(served.begin(), served.end(), 0);
  }
  return make_solution(inst, std::move(open), std::move(served));
}

}  // namespace ordmed
