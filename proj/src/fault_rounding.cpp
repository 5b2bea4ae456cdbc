#include "ordmed/fault_rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace ordmed {

namespace {

void insert_after(std::vector<int>& list, int copy, int twin) {
  auto it = std::find(list.begin(), list.end(), copy);
  if (it != list.end()) list.insert(it + 1, twin);
}

Rational volume(const FractionalFt& ft, std::span<const int> copies) {
  Rational v = 0;
  for (int c : copies) v += ft.y[c];
  return v;
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  return std::any_of(a.begin(), a.end(), [&](int c) { return std::find(b.begin(), b.end(), c) != b.end(); });
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::all_of(a.begin(), a.end(), [&](int c) { return std::find(b.begin(), b.end(), c) != b.end(); });
}

}  // namespace

int FractionalFt::split(int copy, const Rational& keep) {
  if (keep <= 0 || keep >= y[copy]) throw FaultRoundingError("split amount outside the copy volume");
  const int twin = n_copies();
  origin.push_back(origin[copy]);
  y.push_back(y[copy] - keep);
  y[copy] = keep;
  for (auto& list : ball) insert_after(list, copy, twin);
  for (auto& client_parts : parts)
    for (auto& list : client_parts) insert_after(list, copy, twin);
  return twin;
}

FractionalFt split_facilities(const Instance& inst, std::span<const Rational> y) {
  const auto& spec = inst.fault();
  const int nc = inst.n_clients();
  FractionalFt ft;
  ft.r = spec.r;
  for (int i = 0; i < inst.n_facilities(); ++i)
    if (y[i] > 0) {
      ft.origin.push_back(i);
      ft.y.push_back(y[i]);
    }
  const Rational total = std::accumulate(ft.y.begin(), ft.y.end(), Rational(0));
  if (total < *std::max_element(ft.r.begin(), ft.r.end())) throw std::invalid_argument("open volume below the largest demand");

  // Full nearest-first order per client; trimmed to the r_j prefix once all boundaries are aligned.
  ft.ball.resize(nc);
  for (int j = 0; j < nc; ++j) {
    auto& list = ft.ball[j];
    list.resize(ft.n_copies());
    std::iota(list.begin(), list.end(), 0);
    std::stable_sort(list.begin(), list.end(), [&](int a, int b) { return ft.dist(inst, a, j) < ft.dist(inst, b, j); });
  }
  for (int j = 0; j < nc; ++j) {
    Rational acc = 0;
    int boundary = 1;
    for (std::size_t t = 0; t < ft.ball[j].size() && boundary <= ft.r[j]; ++t) {
      const int c = ft.ball[j][t];
      if (acc + ft.y[c] > boundary) ft.split(c, boundary - acc);
      acc += ft.y[c];
      if (acc == boundary) ++boundary;
    }
  }

  ft.parts.resize(nc);
  ft.d_av_p.resize(nc);
  ft.d_max_p.resize(nc);
  ft.d_min_p.resize(nc);
  ft.d_av.resize(nc);
  for (int j = 0; j < nc; ++j) {
    std::vector<int> prefix;
    ft.parts[j].assign(ft.r[j], {});
    Rational acc = 0;
    for (int c : ft.ball[j]) {
      if (acc == ft.r[j]) break;
      const int p = static_cast<int>(floor_of(acc).get_si());
      ft.parts[j][p].push_back(c);
      prefix.push_back(c);
      acc += ft.y[c];
    }
    if (acc != ft.r[j]) throw FaultRoundingError("client volume differs from its demand after splitting");
    ft.ball[j] = std::move(prefix);
    Rational sum = 0;
    for (const auto& part : ft.parts[j]) {
      Rational av = 0, mx = ft.dist(inst, part.front(), j), mn = mx;
      for (int c : part) {
        av += ft.y[c] * ft.dist(inst, c, j);
        mx = std::max(mx, ft.dist(inst, c, j));
        mn = std::min(mn, ft.dist(inst, c, j));
      }
      ft.d_av_p[j].push_back(av);
      ft.d_max_p[j].push_back(mx);
      ft.d_min_p[j].push_back(mn);
      sum += av;
    }
    ft.d_av[j] = sum / ft.r[j];
  }
  return ft;
}

BundleFamily create_bundles(const Instance& inst, FractionalFt& ft) {
  const int nc = inst.n_clients();
  BundleFamily bf;
  bf.queue.resize(nc);
  std::vector<std::vector<int>> remaining = ft.ball;
  std::vector<int> bundle_of(ft.n_copies(), -1);

  for (;;) {
    int pick = -1;
    std::size_t pick_len = 0;
    Rational pick_d;
    for (int j = 0; j < nc; ++j) {
      if (static_cast<int>(bf.queue[j].size()) >= ft.r[j]) continue;
      Rational acc = 0;
      std::size_t len = 0;
      while (len < remaining[j].size() && acc < 1) acc += ft.y[remaining[j][len++]];
      if (acc < 1) throw FaultRoundingError("client ran out of volume while bundling");
      const Rational d = ft.dist(inst, remaining[j][len - 1], j);
      if (pick < 0 || d < pick_d) {
        pick = j;
        pick_d = d;
        pick_len = len;
      }
    }
    if (pick < 0) break;

    auto& rest = remaining[pick];
    std::vector<int> unit(rest.begin(), rest.begin() + pick_len);
    int hit = -1;
    for (int c : unit)
      if (bundle_of[c] >= 0 && (hit < 0 || bundle_of[c] < hit)) hit = bundle_of[c];
    if (hit >= 0) {
      bf.queue[pick].push_back(hit);
      std::erase_if(rest, [&](int c) { return bundle_of[c] == hit; });
      continue;
    }
    const Rational over = volume(ft, unit) - 1;
    if (over > 0) {
      const int last = unit.back();
      const int twin = ft.split(last, ft.y[last] - over);
      bundle_of.push_back(-1);
      for (auto& list : remaining) insert_after(list, last, twin);
    }
    const int id = static_cast<int>(bf.bundles.size());
    for (int c : unit) bundle_of[c] = id;
    bf.bundles.push_back(unit);
    bf.queue[pick].push_back(id);
    rest.erase(rest.begin(), rest.begin() + pick_len);
  }
  return bf;
}

std::vector<std::string> check_bundles(const Instance& inst, const FractionalFt& ft, const BundleFamily& bf) {
  std::vector<std::string> failures;
  std::vector<int> seen(ft.n_copies(), 0);
  for (const auto& b : bf.bundles) {
    if (volume(ft, b) != 1) failures.push_back("bundle volume");
    for (int c : b) ++seen[c];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int s) { return s > 1; })) failures.push_back("bundle overlap");
  for (int j = 0; j < inst.n_clients(); ++j) {
    const auto& q = bf.queue[j];
    if (static_cast<int>(q.size()) != ft.r[j]) failures.push_back("queue length");
    if (std::set<int>(q.begin(), q.end()).size() != q.size()) failures.push_back("queue repeats");
    for (std::size_t p = 0; p < q.size() && p < ft.d_max_p[j].size(); ++p) {
      Rational far = 0;
      for (int c : bf.bundles[q[p]]) far = std::max(far, ft.dist(inst, c, j));
      if (far > 3 * ft.d_max_p[j][p]) failures.push_back("bundle distance");
    }
  }
  return failures;
}

DangerFilter filter_dangerous(const Instance& inst, const FractionalFt& ft) {
  DangerFilter out;
  const int nc = inst.n_clients();
  auto last_av = [&](int j) { return ft.d_av_p[j].back(); };
  for (int j = 0; j < nc; ++j)
    if (ft.d_max_p[j].back() > 45 * last_av(j)) out.dangerous.push_back(j);
  auto conflict = [&](int a, int b) {
    return ft.r[a] == ft.r[b] && inst.metric.cc(a, b) <= 6 * std::max(last_av(a), last_av(b));
  };
  std::vector<int> order = out.dangerous;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ft.d_av[a] > ft.d_av[b]; });
  std::set<int> marked;
  for (int j : order) {
    if (marked.contains(j)) continue;
    out.kept.push_back(j);
    for (int other : out.dangerous)
      if (other != j && conflict(j, other)) marked.insert(other);
  }
  for (std::size_t a = 0; a < out.kept.size(); ++a)
    for (std::size_t b = a + 1; b < out.kept.size(); ++b)
      if (conflict(out.kept[a], out.kept[b])) throw FaultRoundingError("filtered dangerous clients conflict");
  return out;
}

LaminarFamily build_laminar(const Instance& inst, const FractionalFt& ft, const DangerFilter& filter) {
  LaminarFamily lam;
  lam.clients = filter.kept;
  std::stable_sort(lam.clients.begin(), lam.clients.end(), [&](int a, int b) { return ft.r[a] < ft.r[b]; });
  for (int j : lam.clients) {
    const Rational dmax = ft.d_max_p[j].back();
    std::vector<int> ball;
    for (int c = 0; c < ft.n_copies(); ++c)
      if (15 * ft.dist(inst, c, j) <= dmax) ball.push_back(c);
    if (volume(ft, ball) >= ft.r[j]) throw FaultRoundingError("inner ball carries the full demand");
    for (int c : ft.ball[j])
      if (15 * ft.dist(inst, c, j) > dmax &&
          std::find(ft.parts[j].back().begin(), ft.parts[j].back().end(), c) == ft.parts[j].back().end())
        throw FaultRoundingError("far copy outside the last unit part");

    std::vector<int> merged = ball;
    for (std::size_t prev = 0; prev < lam.merged.size(); ++prev)
      if (ft.r[lam.clients[prev]] < ft.r[j] && intersects(lam.merged[prev], ball))
        merged.insert(merged.end(), lam.merged[prev].begin(), lam.merged[prev].end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    for (int c : merged)
      if (10 * ft.dist(inst, c, j) > dmax) throw FaultRoundingError("merged ball leaves its containment radius");
    lam.ball.push_back(std::move(ball));
    lam.merged.push_back(std::move(merged));
  }
  for (std::size_t a = 0; a < lam.merged.size(); ++a)
    for (std::size_t b = a + 1; b < lam.merged.size(); ++b) {
      const auto& A = lam.merged[a];
      const auto& B = lam.merged[b];
      if (intersects(A, B) && !subset_of(A, B) && !subset_of(B, A))
        throw FaultRoundingError("merged balls are not laminar");
    }
  return lam;
}

LinearProgram build_aux_polytope(const Instance& inst, const FractionalFt& ft, const BundleFamily& bf,
                                 const LaminarFamily& lam) {
  LinearProgram lp;
  for (int c = 0; c < ft.n_copies(); ++c) lp.add_variable("z" + std::to_string(c), Rational(0), Rational(1));
  auto row = [](const std::vector<int>& copies) {
    std::vector<Term> t;
    for (int c : copies) t.push_back({c, Rational(1)});
    return t;
  };
  for (const auto& b : bf.bundles) lp.add_constraint({row(b), Relation::eq, Rational(1), "bundle"});
  for (std::size_t q = 0; q < lam.clients.size(); ++q) {
    const int r = ft.r[lam.clients[q]];
    lp.add_constraint({row(lam.merged[q]), Relation::ge, Rational(r - 1), "ball_lo"});
    lp.add_constraint({row(lam.merged[q]), Relation::le, Rational(r), "ball_hi"});
  }
  for (int i = 0; i < inst.n_facilities(); ++i) {
    std::vector<int> copies;
    for (int c = 0; c < ft.n_copies(); ++c)
      if (ft.origin[c] == i) copies.push_back(c);
    if (copies.size() > 1) lp.add_constraint({row(copies), Relation::le, Rational(1), "location"});
  }
  std::vector<int> all(ft.n_copies());
  std::iota(all.begin(), all.end(), 0);
  lp.add_constraint({row(all), Relation::eq, Rational(inst.fault().k), "count"});
  return lp;
}

RoundingPlan prepare_rounding(const Instance& inst, std::span<const Rational> y) {
  RoundingPlan plan;
  plan.ft = split_facilities(inst, y);
  plan.bundles = create_bundles(inst, plan.ft);
  plan.bundle_failures = check_bundles(inst, plan.ft, plan.bundles);
  plan.filter = filter_dangerous(inst, plan.ft);
  plan.laminar = build_laminar(inst, plan.ft, plan.filter);
  plan.polytope = build_aux_polytope(inst, plan.ft, plan.bundles, plan.laminar);
  if (!plan.polytope.satisfies(plan.ft.y)) throw FaultRoundingError("fractional solution violates the auxiliary system");
  plan.decomposition = decompose_to_vertices(plan.polytope, plan.ft.y);
  return plan;
}

SampledSolution stochastic_round(const Instance& inst, const RoundingPlan& plan, std::mt19937_64& rng) {
  const auto& vertex = sample_vertex(plan.decomposition, rng);
  const auto& ft = plan.ft;
  SampledSolution s;
  for (const auto& v : vertex) s.z.push_back(v == 1 ? 1 : 0);
  auto count = [&](const std::vector<int>& copies) {
    int n = 0;
    for (int c : copies) n += s.z[c];
    return n;
  };
  for (const auto& b : plan.bundles.bundles)
    if (count(b) != 1) throw FaultRoundingError("sample opens a bundle other than once");
  for (std::size_t q = 0; q < plan.laminar.clients.size(); ++q) {
    const int r = ft.r[plan.laminar.clients[q]];
    const int got = count(plan.laminar.merged[q]);
    if (got != r && got != r - 1) throw FaultRoundingError("sample leaves a laminar ball count range");
  }
  std::vector<int> per_origin(inst.n_facilities(), 0);
  for (int c = 0; c < ft.n_copies(); ++c)
    if (s.z[c]) ++per_origin[ft.origin[c]];
  for (int i = 0; i < inst.n_facilities(); ++i) {
    if (per_origin[i] > 1) throw FaultRoundingError("sample opens a location twice");
    if (per_origin[i]) s.open.push_back(i);
  }
  if (static_cast<int>(s.open.size()) != inst.fault().k) throw FaultRoundingError("sample opens the wrong number of locations");
  return s;
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

MarginalReport marginal_test(const Instance& inst, const RoundingPlan& plan, long samples, std::uint64_t seed) {
  const auto& ft = plan.ft;
  std::vector<long> copy_hits(ft.n_copies(), 0), ball_hits(plan.laminar.clients.size(), 0);
  for (long s = 0; s < samples; ++s) {
    auto rng = sample_rng(seed, static_cast<std::uint64_t>(s));
    auto z = stochastic_round(inst, plan, rng).z;
    for (int c = 0; c < ft.n_copies(); ++c) copy_hits[c] += z[c];
    for (std::size_t q = 0; q < ball_hits.size(); ++q) {
      int got = 0;
      for (int c : plan.laminar.merged[q]) got += z[c];
      if (got == ft.r[plan.laminar.clients[q]]) ++ball_hits[q];
    }
  }
  auto score = [&](long hits, const Rational& p) {
    const double pd = to_double(p), n = static_cast<double>(samples);
    if (p == 0 || p == 1) return hits == static_cast<long>(pd * n) ? 0.0 : INFINITY;
    return std::abs(static_cast<double>(hits) - n * pd) / std::sqrt(n * pd * (1 - pd));
  };
  MarginalReport rep;
  rep.samples = samples;
  for (int c = 0; c < ft.n_copies(); ++c) rep.max_copy_z = std::max(rep.max_copy_z, score(copy_hits[c], ft.y[c]));
  for (std::size_t q = 0; q < ball_hits.size(); ++q) {
    const Rational p = volume(ft, plan.laminar.merged[q]) - (ft.r[plan.laminar.clients[q]] - 1);
    rep.max_ball_z = std::max(rep.max_ball_z, score(ball_hits[q], p));
  }
  return rep;
}

}  // namespace ordmed
