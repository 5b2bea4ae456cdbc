#include "ordmed/robust_preprocess.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

namespace ordmed {

namespace {

bool uses_star_bounds(const Instance& inst) { return inst.kind() != VariantKind::matroid; }

bool contains(const std::vector<int>& sorted, int v) { return std::binary_search(sorted.begin(), sorted.end(), v); }

const Rational& dist_to_client(const Instance& inst, int point, int client) {
  return inst.metric.at(point, inst.metric.client_point(client));
}

// Points p of F ∪ C' in metric order.
std::vector<int> centre_points(const Instance& inst, const std::vector<int>& clients) {
  std::vector<int> pts(inst.n_facilities());
  std::iota(pts.begin(), pts.end(), 0);
  for (int j : clients) pts.push_back(inst.metric.client_point(j));
  return pts;
}

int ball_count(const Instance& inst, int point, const Rational& radius, const std::vector<int>& clients) {
  int n = 0;
  for (int j : clients)
    if (dist_to_client(inst, point, j) <= radius) ++n;
  return n;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::pair<int, Rational> nearest_in(const Instance& inst, const std::vector<int>& open, int client) {
  return nearest_open(inst, open, inst.metric.client_point(client));
}

}  // namespace

int sparse_limit(const Rational& rho) { return static_cast<int>(ceil_of(Rational(2 / rho)).get_si()) + 2; }

StarSolution make_star(const Instance& inst, const ReducedOptimum& opt) {
  StarSolution s;
  s.open = opt.open;
  s.served = opt.served;
  std::sort(s.served.begin(), s.served.end());
  for (int p = 0; p < inst.metric.n_points(); ++p) {
    auto [i, d] = nearest_open(inst, s.open, p);
    s.nearest_of_point.push_back(i);
    s.dist_of_point.push_back(d);
  }
  return s;
}

SparseInstance build_sparse_instance(const Instance& inst, const CostFunction& f, const Rational& U,
                                     const ReductionParams& params, const StarSolution& star) {
  SparseInstance sp;
  sp.U = U;
  sp.clients.resize(inst.n_clients());
  std::iota(sp.clients.begin(), sp.clients.end(), 0);
  const Rational threshold = params.rho * U;
  const int limit = sparse_limit(params.rho);
  int trips = 0;
  std::set<int> s0;
  auto cstar = [&](int point) -> const Rational& { return star.dist_of_point[point]; };

  for (int i : star.open) {
    Rational load = 0;
    for (int j : star.served) {
      const int p = inst.metric.client_point(j);
      if (star.nearest_of_point[p] == i) load += f(cstar(p));
    }
    if (load >= threshold) {
      s0.insert(i);
      if (++trips > limit) throw SparseError("heavy-star loop exceeded its bound");
    }
  }

  for (bool changed = true; changed;) {
    changed = false;
    const auto alive_star = intersect(sp.clients, star.served);
    for (int p : centre_points(inst, sp.clients)) {
      const Rational radius = params.delta * cstar(p);
      const int count = ball_count(inst, p, radius, alive_star);
      if (count * f((1 - params.delta) * cstar(p)) < threshold) continue;
      std::erase_if(sp.clients, [&](int j) { return dist_to_client(inst, p, j) <= radius; });
      s0.insert(star.nearest_of_point[p]);
      if (++trips > limit) throw SparseError("dense-ball loop exceeded its bound");
      changed = true;
      break;
    }
  }

  sp.s0.assign(s0.begin(), s0.end());
  const auto survivors = intersect(sp.clients, star.served);
  sp.m_prime = static_cast<int>(survivors.size());
  sp.U_prime = 0;
  for (int j : survivors) sp.U_prime += f(cstar(inst.metric.client_point(j)));
  return sp;
}

SparseConditions check_sparse_conditions(const Instance& inst, const CostFunction& f, const SparseInstance& sp,
                                         const ReductionParams& params, const StarSolution& star) {
  SparseConditions out;
  const Rational threshold = params.rho * sp.U;
  auto cstar = [&](int point) -> const Rational& { return star.dist_of_point[point]; };
  const auto survivors = intersect(sp.clients, star.served);

  for (int i : star.open) {
    if (contains(sp.s0, i)) continue;
    Rational load = 0;
    for (int j : survivors) {
      const int p = inst.metric.client_point(j);
      if (star.nearest_of_point[p] == i) load += f(cstar(p));
    }
    if (load > threshold) out.light_stars = false;
  }
  for (int p : centre_points(inst, sp.clients)) {
    const int count = ball_count(inst, p, params.delta * cstar(p), survivors);
    if (count * f((1 - params.delta) * cstar(p)) > threshold) out.sparse_balls = false;
  }
  Rational removed = 0;
  const Rational shrink = (1 - params.delta) / (1 + params.delta);
  for (int j : star.served) {
    if (contains(sp.clients, j)) continue;
    if (sp.s0.empty()) {
      out.removed_cost = false;
      break;
    }
    removed += f(shrink * nearest_in(inst, sp.s0, j).second);
  }
  if (removed + sp.U_prime > sp.U) out.removed_cost = false;
  out.small_s0 = static_cast<int>(sp.s0.size()) <= sparse_limit(params.rho);
  return out;
}

bool enumerate_sparse_instances(const Instance& inst, const Rational& U, const ReductionParams& params, long cap,
                                const std::function<bool(const SparseInstance&)>& sink) {
  const int nc = inst.n_clients(), nf = inst.n_facilities();
  if (nc > 20 || nf > 20) throw std::invalid_argument("sparse enumeration supports at most 20 clients and facilities");
  const int limit = sparse_limit(params.rho);
  const int m = inst.served_count();

  std::set<std::uint32_t> balls;
  for (int p = 0; p < inst.metric.n_points(); ++p)
    for (int i = 0; i < nf; ++i) {
      const Rational radius = params.delta * inst.metric.at(p, i);
      std::uint32_t mask = 0;
      for (int j = 0; j < nc; ++j)
        if (dist_to_client(inst, p, j) <= radius) mask |= 1U << j;
      if (mask) balls.insert(mask);
    }
  // Unions of at most `limit` balls, by breadth-first layers.
  std::set<std::uint32_t> removed{0};
  std::vector<std::uint32_t> layer{0};
  for (int depth = 0; depth < limit && !layer.empty(); ++depth) {
    std::vector<std::uint32_t> next;
    for (auto base : layer)
      for (auto b : balls)
        if (removed.insert(base | b).second) next.push_back(base | b);
    layer = std::move(next);
  }

  std::vector<std::uint64_t> s0_masks;
  const std::uint64_t total = std::uint64_t{1} << nf;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (std::popcount(mask) > limit) continue;
    auto members = mask_members(mask);
    if (!members.empty() && !inst.feasible_open_set(members)) continue;
    s0_masks.push_back(mask);
  }

  long emitted = 0;
  for (auto s0 : s0_masks)
    for (auto gone : removed) {
      SparseInstance sp;
      sp.U = U;
      sp.s0 = mask_members(s0);
      for (int j = 0; j < nc; ++j)
        if (!(gone & (1U << j))) sp.clients.push_back(j);
      if (gone && sp.s0.empty()) continue;
      const int kept = static_cast<int>(sp.clients.size());
      for (int mp = std::max(0, m - (nc - kept)); mp <= std::min(m, kept); ++mp) {
        if (emitted >= cap) return true;
        sp.m_prime = mp;
        ++emitted;
        if (!sink(sp)) return false;
      }
    }
  return false;
}

std::vector<Rational> compute_radius_bounds(const Instance& inst, const SparseInstance& sp, const CostFunction& f,
                                            const ReductionParams& params) {
  const int n = static_cast<int>(sp.clients.size());
  std::vector<Rational> r_hat(n, 0);
  std::set<Rational, std::greater<>> distances;
  for (int i = 0; i < inst.n_facilities(); ++i)
    for (int j : sp.clients)
      if (inst.d(i, j) > 0) distances.insert(inst.d(i, j));
  const Rational threshold = params.rho * sp.U;
  const auto centres = centre_points(inst, sp.clients);
  const Rational shrink = (1 - params.delta) * (1 - params.delta / 4);

  for (const auto& t : distances) {
    const Rational radius = params.delta * t / 4;
    const Rational price = f(shrink * t);
    for (int a = 0; a < n; ++a) {
      if (r_hat[a] != 0) continue;
      r_hat[a] = t;
      bool ok = true;
      for (int p : centres) {
        if (dist_to_client(inst, p, sp.clients[a]) > radius) continue;
        int count = 0;
        for (int b = 0; b < n; ++b)
          if (r_hat[b] >= t && dist_to_client(inst, p, sp.clients[b]) <= radius) ++count;
        if (count * price > threshold) {
          ok = false;
          break;
        }
      }
      if (!ok) r_hat[a] = 0;
    }
  }
  return r_hat;
}

bool check_radius_bounds(const Instance& inst, const SparseInstance& sp, const CostFunction& f,
                         const ReductionParams& params, const std::vector<Rational>& r_hat) {
  std::set<Rational> ts(r_hat.begin(), r_hat.end());
  for (int i = 0; i < inst.n_facilities(); ++i)
    for (int j : sp.clients) ts.insert(inst.d(i, j));
  ts.erase(Rational(0));
  const Rational threshold = params.rho * sp.U;
  const Rational shrink = (1 - params.delta) * (1 - params.delta / 4);
  for (const auto& t : ts) {
    const Rational radius = params.delta * t / 4;
    const Rational price = f(shrink * t);
    for (int p : centre_points(inst, sp.clients)) {
      int count = 0;
      for (std::size_t b = 0; b < sp.clients.size(); ++b)
        if (r_hat[b] >= t && dist_to_client(inst, p, sp.clients[b]) <= radius) ++count;
      if (count * price > threshold) return false;
    }
  }
  return true;
}

std::vector<Rational> knapsack_radii(const Instance& inst, const SparseInstance& sp, const CostFunction& f,
                                     const ReductionParams& params) {
  const Rational threshold = params.rho * sp.U;
  std::vector<Rational> out;
  for (int j : sp.clients) {
    Rational best = 0;
    for (int i = 0; i < inst.n_facilities(); ++i) {
      const Rational& R = inst.d(i, j);
      if (R <= best) continue;
      const int count = ball_count(inst, inst.metric.client_point(j), params.delta * R, sp.clients);
      if (count * f((1 - params.delta) * R) <= threshold) best = R;
    }
    out.push_back(best);
  }
  return out;
}

std::vector<Constraint> matroid_cuts(const MatroidSpec& matroid, int n_facilities,
                                     const std::vector<std::vector<int>>& vars_of_facility,
                                     std::span<const Rational> values) {
  std::vector<Constraint> cuts;
  const std::uint64_t total = std::uint64_t{1} << n_facilities;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    Constraint c;
    Rational load = 0;
    for (int i : mask_members(mask))
      for (int v : vars_of_facility[i]) {
        c.terms.push_back({v, 1});
        load += values[v];
      }
    const int rank = matroid.rank(mask);
    if (load <= rank) continue;
    c.rel = Relation::le;
    c.rhs = rank;
    c.name = "rank" + std::to_string(mask);
    cuts.push_back(std::move(c));
  }
  return cuts;
}

ExtLp build_ext_lp(const Instance& inst, const SparseInstance& sp, const std::vector<Rational>& radius,
                   const CostFunction& f, const ReductionParams& params) {
  const Rational cap = inst.kind() == VariantKind::robust ? Rational(2 / (2 + params.delta)) : Rational(1);
  const Rational l1 = params.lambda1();
  if (l1 <= 0 || l1 > cap) throw std::invalid_argument("lambda1 outside (0, " + to_string(cap) + "]");
  const bool star_bounds = uses_star_bounds(inst);
  const Rational scale = params.star_scale(inst.kind());
  const Rational threshold = params.rho * sp.U;

  ExtLp ext;
  auto& lp = ext.lp;
  const int nf = inst.n_facilities();
  for (int i = 0; i < nf; ++i) {
    const bool pre = contains(sp.s0, i);
    ext.y_var.push_back(lp.add_variable("y" + std::to_string(i), pre ? Rational(1) : Rational(0), Rational(1)));
  }
  std::vector<Term> objective;
  std::vector<Term> coverage;
  std::vector<std::vector<Term>> star_terms(nf);
  ext.x_var.resize(sp.clients.size());
  for (std::size_t a = 0; a < sp.clients.size(); ++a) {
    const int j = sp.clients[a];
    std::vector<Term> row;
    for (int i = 0; i < nf; ++i) {
      const Rational& d = inst.d(i, j);
      if (!radius.empty() && d > radius[a]) continue;
      const bool pre = contains(sp.s0, i);
      const Rational star_cost = f(scale * d);
      if (star_bounds && !pre && star_cost > threshold) continue;
      const int v = lp.add_variable("x" + std::to_string(i) + "_" + std::to_string(j), Rational(0), Rational(1));
      ext.x_var[a].push_back({i, v});
      objective.push_back({v, f(l1 * d)});
      coverage.push_back({v, 1});
      row.push_back({v, 1});
      if (star_bounds && !pre) star_terms[i].push_back({v, star_cost});
      lp.add_constraint({{{v, 1}, {ext.y_var[i], -1}}, Relation::le, 0, "open" + std::to_string(i) + "_" + std::to_string(j)});
    }
    if (!row.empty()) lp.add_constraint({std::move(row), Relation::le, 1, "once" + std::to_string(j)});
  }
  lp.add_constraint({coverage, Relation::ge, sp.m_prime, "coverage"});

  switch (inst.kind()) {
    case VariantKind::robust: {
      std::vector<Term> all;
      for (int v : ext.y_var) all.push_back({v, 1});
      lp.add_constraint({std::move(all), Relation::eq, inst.robust().k, "cardinality"});
      break;
    }
    case VariantKind::knapsack: {
      std::vector<Term> all;
      for (int i = 0; i < nf; ++i) all.push_back({ext.y_var[i], inst.knapsack().wt[i]});
      lp.add_constraint({std::move(all), Relation::le, inst.knapsack().budget, "budget"});
      break;
    }
    case VariantKind::matroid: {
      const auto& mat = inst.matroid();
      if (mat.kind == MatroidSpec::Kind::partition) {
        for (std::size_t q = 0; q < mat.parts.size(); ++q) {
          std::vector<Term> part;
          for (int i : mat.parts[q]) part.push_back({ext.y_var[i], 1});
          lp.add_constraint({std::move(part), Relation::le, mat.capacities[q], "part" + std::to_string(q)});
        }
      } else {
        std::vector<std::vector<int>> groups;
        for (int v : ext.y_var) groups.push_back({v});
        ext.oracle = [&mat, nf, groups](std::span<const Rational> values) {
          return matroid_cuts(mat, nf, groups, values);
        };
      }
      break;
    }
    case VariantKind::fault_tolerant: throw std::invalid_argument("ExtLP is defined for single-assignment variants");
  }

  if (star_bounds)
    for (int i = 0; i < nf; ++i) {
      if (contains(sp.s0, i) || star_terms[i].empty()) continue;
      auto terms = star_terms[i];
      terms.push_back({ext.y_var[i], -threshold});
      lp.add_constraint({std::move(terms), Relation::le, 0, "star" + std::to_string(i)});
    }
  lp.set_objective(std::move(objective));
  return ext;
}

LpResult solve_ext_lp(const ExtLp& ext) {
  if (ext.oracle) return solve_with_generation(ext.lp, *ext.oracle).result;
  return solve_basic(ext.lp);
}

CopySet duplicate_and_balance(const Instance& inst, const SparseInstance& sp, const ExtLp& ext,
                              std::span<const Rational> values, const CostFunction& f,
                              const ReductionParams& params) {
  const int nf = inst.n_facilities();
  const Rational scale = params.star_scale(inst.kind());
  CopySet cs;
  std::vector<std::vector<int>> copies_of(nf);
  for (int i = 0; i < nf; ++i) {
    cs.origin.push_back(i);
    cs.y.push_back(values[ext.y_var[i]]);
    copies_of[i].push_back(i);
  }
  const int nc = static_cast<int>(sp.clients.size());
  cs.balls.assign(nc, {});
  // x value per (client slot, facility); every client starts with the original facilities it uses.
  std::vector<std::map<int, Rational>> x(nc);
  for (int a = 0; a < nc; ++a)
    for (auto [i, v] : ext.x_var[a])
      if (values[v] > 0) {
        x[a][i] = values[v];
        cs.balls[a].push_back(i);
      }

  auto star_cost = [&](int copy) {
    Rational s = 0;
    for (int a = 0; a < nc; ++a)
      if (std::find(cs.balls[a].begin(), cs.balls[a].end(), copy) != cs.balls[a].end())
        s += f(scale * inst.d(cs.origin[copy], sp.clients[a]));
    return s;
  };

  for (int i = 0; i < nf; ++i)
    for (int a = 0; a < nc; ++a) {
      auto it = x[a].find(i);
      if (it == x[a].end()) continue;
      const Rational need = it->second;
      auto& ball = cs.balls[a];
      std::erase_if(ball, [&](int c) { return cs.origin[c] == i; });
      std::vector<std::pair<Rational, int>> order;
      for (int c : copies_of[i]) order.push_back({star_cost(c), c});
      std::sort(order.begin(), order.end());
      Rational filled = 0;
      for (auto& [cost, c] : order) {
        if (filled == need) break;
        if (filled + cs.y[c] > need) {
          const int twin = static_cast<int>(cs.origin.size());
          cs.origin.push_back(i);
          cs.y.push_back(cs.y[c] - (need - filled));
          cs.y[c] = need - filled;
          copies_of[i].push_back(twin);
          for (int b = 0; b < nc; ++b)
            if (b != a && std::find(cs.balls[b].begin(), cs.balls[b].end(), c) != cs.balls[b].end())
              cs.balls[b].push_back(twin);
        }
        filled += cs.y[c];
        ball.push_back(c);
      }
      std::sort(ball.begin(), ball.end());
    }

  // Drop zero-volume copies and renumber.
  std::vector<int> renumber(cs.origin.size(), -1);
  CopySet out;
  for (std::size_t c = 0; c < cs.origin.size(); ++c) {
    if (cs.y[c] == 0) continue;
    renumber[c] = static_cast<int>(out.origin.size());
    out.origin.push_back(cs.origin[c]);
    out.y.push_back(cs.y[c]);
  }
  for (auto& ball : cs.balls) {
    std::vector<int> nb;
    for (int c : ball)
      if (renumber[c] >= 0) nb.push_back(renumber[c]);
    std::sort(nb.begin(), nb.end());
    out.balls.push_back(std::move(nb));
  }
  return out;
}

std::vector<std::string> check_duplication(const Instance& inst, const SparseInstance& sp, const CopySet& cs,
                                           const CostFunction& f, const ReductionParams& params,
                                           const Rational& ext_value, bool star_bounds) {
  std::vector<std::string> bad;
  Rational covered = 0;
  Rational cost = 0;
  const Rational l1 = params.lambda1();
  for (std::size_t a = 0; a < sp.clients.size(); ++a) {
    Rational vol = 0;
    for (int c : cs.balls[a]) {
      vol += cs.y[c];
      cost += cs.y[c] * f(l1 * inst.d(cs.origin[c], sp.clients[a]));
    }
    if (vol > 1) bad.push_back("outer ball volume above one");
    covered += vol;
  }
  if (covered < sp.m_prime) bad.push_back("coverage below m'");

  std::vector<Rational> per_facility(inst.n_facilities(), 0);
  for (std::size_t c = 0; c < cs.origin.size(); ++c) per_facility[cs.origin[c]] += cs.y[c];
  switch (inst.kind()) {
    case VariantKind::robust: {
      Rational total = std::accumulate(cs.y.begin(), cs.y.end(), Rational(0));
      if (total > inst.robust().k) bad.push_back("cardinality exceeded");
      break;
    }
    case VariantKind::knapsack: {
      Rational total = 0;
      for (int i = 0; i < inst.n_facilities(); ++i) total += per_facility[i] * inst.knapsack().wt[i];
      if (total > inst.knapsack().budget) bad.push_back("budget exceeded");
      break;
    }
    case VariantKind::matroid: {
      std::vector<std::vector<int>> groups(inst.n_facilities());
      for (int i = 0; i < inst.n_facilities(); ++i) groups[i] = {i};
      if (!matroid_cuts(inst.matroid(), inst.n_facilities(), groups, per_facility).empty())
        bad.push_back("rank exceeded");
      break;
    }
    case VariantKind::fault_tolerant: break;
  }
  for (int i : sp.s0)
    if (per_facility[i] != 1) bad.push_back("pre-opened facility not fully open");
  if (cost != ext_value) bad.push_back("objective not preserved");
  if (star_bounds) {
    const Rational scale = params.star_scale(inst.kind());
    for (std::size_t c = 0; c < cs.origin.size(); ++c) {
      if (contains(sp.s0, cs.origin[c])) continue;
      Rational load = 0;
      for (std::size_t a = 0; a < sp.clients.size(); ++a)
        if (std::binary_search(cs.balls[a].begin(), cs.balls[a].end(), static_cast<int>(c)))
          load += f(scale * inst.d(cs.origin[c], sp.clients[a]));
      if (load > 2 * params.rho * sp.U) bad.push_back("copy star cost above 2 rho U");
    }
  }
  for (std::size_t a = 0; a < sp.clients.size(); ++a)
    for (int c : cs.balls[a])
      if (std::count(cs.balls[a].begin(), cs.balls[a].end(), c) != 1) bad.push_back("duplicate copy in a ball");
  return bad;
}

}  // namespace ordmed
