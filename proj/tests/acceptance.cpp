// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "lp_brute.hpp"
#include "ordmed/bench.hpp"

using namespace ordmed;
using fixtures::frac;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool in_time = limit_s <= 0 || secs <= limit_s;
  const bool ok = out.pass && in_time;
  failures += !ok;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.1fs", secs);
  std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " (" << out.detail << "; " << timing
            << (in_time ? "" : " over the time limit") << ")" << std::endl;
}

std::vector<Rational> random_weights(std::mt19937_64& rng, int n) {
  std::vector<Rational> w(n);
  for (auto& x : w) x = frac(static_cast<long>(rng() % 20), 1 + static_cast<long>(rng() % 6));
  std::sort(w.begin(), w.end(), std::greater<>());
  if (w.front() == 0) w.front() = 1;
  return w;
}

std::vector<Rational> random_vector(std::mt19937_64& rng, int n) {
  std::vector<Rational> v(n);
  for (auto& x : v) x = frac(static_cast<long>(rng() % 100), 1 + static_cast<long>(rng() % 7));
  return v;
}

std::vector<GeneratedInstance> corpus(VariantKind v, int count, std::uint64_t seed, bool top = false) {
  GenSpec spec;
  spec.variant = v;
  spec.count = count;
  spec.n_facilities = 6;
  spec.n_clients = 8;
  spec.max_k = 3;
  spec.max_r = 2;
  spec.top_ell = top;
  return gen_instances(spec, seed);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

struct RatioStats {
  double max = 0, sum = 0;
  int rated = 0, over = 0, errors = 0;
  void add(const Rational& cost, const Rational& opt, const Rational& bound) {
    if (opt == 0) {
      if (cost != 0) ++over;
      return;
    }
    const double r = to_double(cost / opt);
    max = std::max(max, r);
    sum += r;
    ++rated;
    if (cost > bound * opt) ++over;
  }
  std::string summary() const {
    return "max ratio " + fmt(max) + ", mean " + fmt(rated ? sum / rated : 0) + " over " + std::to_string(rated) +
           " rated runs";
  }
};

// Fractional openings chosen so that the rounding meets dangerous clients, merged balls and plain bundles.
std::vector<std::pair<Instance, std::vector<Rational>>> designated_roundings() {
  using fixtures::fault;
  using fixtures::line_instance;
  using fixtures::qs;
  std::vector<std::pair<Instance, std::vector<Rational>>> out;
  out.emplace_back(line_instance({0, 100}, {0}, qs({1}), fault(1, {1})), std::vector<Rational>{frac(99, 100), frac(1, 100)});
  out.emplace_back(line_instance({0, 100}, {0, 0, 3}, qs({2, 1, 1}), fault(1, {1, 1, 1})),
                   std::vector<Rational>{frac(99, 100), frac(1, 100)});
  out.emplace_back(line_instance({0, 1, 1000}, {0}, qs({1}), fault(2, {2})),
                   std::vector<Rational>{Rational(1), frac(99, 100), frac(1, 100)});
  out.emplace_back(line_instance({0, 1, 1000}, {0, 0}, qs({1, 1}), fault(2, {1, 2})),
                   std::vector<Rational>{frac(99, 100), frac(99, 100), frac(1, 50)});
  // A plain LP optimum from the generated corpus.
  auto g = corpus(VariantKind::fault_tolerant, 1, 505).front();
  auto opt = solve_exact(g.inst);
  FtOptions o;
  auto lp = solve_ft_lp(ft_program(g.inst, ft_guess(g.inst, opt, o)));
  if (!lp) throw std::runtime_error("designated LP infeasible");
  out.emplace_back(g.inst, lp->y);
  return out;
}

}  // namespace

int main() {
  std::cout << "acceptance suite: exact checks on generated corpora (|F| <= 6, |C| <= 8, k <= 3, r <= 2)\n";

  report(1, "ordered cost equals the conic and anchored forms", 5, [] {
    std::mt19937_64 rng(101);
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
      const int n = 1 + static_cast<int>(rng() % 32);
      auto w = random_weights(rng, n);
      auto c = random_vector(rng, n);
      if (ordered_cost(w, c) != conic_cost(w, c)) ++bad;
      auto sp = sparsify_weights(w, frac(1 + static_cast<long>(rng() % 8), 4));
      if (anchored_conic_cost(sp, c) != ordered_cost(sp.w, c)) ++bad;
    }
    return Outcome{bad == 0, "1000 pairs, " + std::to_string(bad) + " mismatches"};
  });

  report(2, "padding and sparsification sandwiches", 5, [] {
    std::mt19937_64 rng(202);
    int bad = 0, checks = 0;
    for (const Rational e : {frac(1, 4), Rational(1), Rational(3)}) {
      for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(rng() % 32);
        auto w = random_weights(rng, n);
        auto v = random_vector(rng, n);
        const Rational cost = ordered_cost(w, v);
        const Rational padded = ordered_cost(pad_weights(w, e), v);
        const Rational sparse = ordered_cost(sparsify_weights(w, e).w, v);
        bad += !(cost <= padded && padded <= (1 + e) * cost);
        bad += !(sparse <= cost && cost <= (1 + e) * sparse);
        checks += 2;
      }
    }
    return Outcome{bad == 0, std::to_string(checks) + " sandwiches, " + std::to_string(bad) + " violations"};
  });

  report(3, "exact simplex and lazy top-ell generation", 30, [] {
    std::mt19937_64 rng(303);
    int bad = 0, solved = 0;
    for (int t = 0; t < 200; ++t) {
      auto lp = fixtures::random_tiny_lp(rng);
      auto res = solve_basic(lp);
      auto brute = fixtures::brute_force_optimum(lp);
      if (res.optimal() != brute.has_value()) {
        ++bad;
        continue;
      }
      if (!brute) continue;
      ++solved;
      if (res.solution.objective_value != *brute || !lp.satisfies(res.solution.values) ||
          fixtures::tight_rank(lp, res.solution.values) != lp.n_vars())
        ++bad;
    }
    long subsets = 0;
    int lazy_bad = 0;
    for (const auto& g : corpus(VariantKind::fault_tolerant, 6, 333)) {
      const int n = g.inst.n_clients();
      for (int ell = 1; ell <= n; ++ell) {
        auto sol = solve_ft_lp(build_top_lp(g.inst, ell, 0));
        if (!sol) {
          ++lazy_bad;
          continue;
        }
        auto cost = lp_client_costs(g.inst, *sol);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (std::popcount(mask) != ell) continue;
          Rational s = 0;
          for (int j = 0; j < n; ++j)
            if (mask >> j & 1) s += cost[j];
          lazy_bad += s > sol->R[0];
          ++subsets;
        }
      }
    }
    return Outcome{bad == 0 && lazy_bad == 0, "200 LPs (" + std::to_string(solved) + " feasible), " +
                                                  std::to_string(bad) + " mismatches; " + std::to_string(subsets) +
                                                  " subset rows, " + std::to_string(lazy_bad) + " violated"};
  });

  const auto ft_general = corpus(VariantKind::fault_tolerant, 50, 404);
  const auto ft_top = corpus(VariantKind::fault_tolerant, 50, 405, true);

  report(4, "fault LP optima never exceed the optimum", 300, [&] {
    int bad = 0;
    FtOptions o;
    for (const auto& g : ft_general) {
      auto opt = solve_exact(g.inst);
      auto sol = solve_ft_lp(ft_program(g.inst, ft_guess(g.inst, opt, o)));
      bad += !sol || sol->value > opt.value;

      // Top-ell objective on the same points, with ell cycling through the clients.
      auto doc = instance_to_json(g.inst);
      const int n = g.inst.n_clients();
      const int ell = 1 + static_cast<int>(&g - ft_general.data()) % n;
      std::vector<Rational> w(n, Rational(0));
      std::fill(w.begin(), w.begin() + ell, Rational(1));
      doc["weights"] = fixtures::json_list(w);
      auto top = instance_from_json(doc);
      auto top_opt = solve_exact(top);
      auto top_sol = solve_ft_lp(ft_program(top, ft_guess(top, top_opt, o)));
      bad += !top_sol || top_sol->value > top_opt.value;
    }
    return Outcome{bad == 0, "100 programs, " + std::to_string(bad) + " above the optimum"};
  });

  const auto robust_corpus = corpus(VariantKind::robust, 50, 505);
  std::vector<PipelineResult> robust_runs;

  report(5, "robust pipeline within 127 of the optimum", 900, [&] {
    RatioStats st;
    PipelineOptions po;
    po.params = ReductionParams::robust_preset();
    for (const auto& g : robust_corpus) {
      robust_runs.push_back(solve_robust(g.inst, po));
      st.add(robust_runs.back().evaluation.value, *robust_runs.back().opt, paper_bound(VariantKind::robust));
    }
    return Outcome{st.over == 0 && st.rated > 0, st.summary()};
  });

  report(6, "matroid within 19.8 and knapsack within 41.6", 900, [] {
    RatioStats mat, ks;
    PipelineOptions po;
    po.params = ReductionParams::matroid_preset();
    for (const auto& g : corpus(VariantKind::matroid, 25, 606)) {
      auto res = solve_matroid(g.inst, po);
      mat.add(res.evaluation.value, *res.opt, paper_bound(VariantKind::matroid));
    }
    po.params = ReductionParams::knapsack_preset();
    for (const auto& g : corpus(VariantKind::knapsack, 25, 607)) {
      auto res = solve_knapsack(g.inst, po);
      ks.add(res.evaluation.value, *res.opt, paper_bound(VariantKind::knapsack));
    }
    return Outcome{mat.over == 0 && ks.over == 0, "matroid " + mat.summary() + "; knapsack " + ks.summary()};
  });

  std::vector<FtResult> ft_runs;
  report(7, "fault-tolerant sample mean within 666 of the optimum", 1200, [&] {
    RatioStats general, top;
    FtOptions o;
    o.samples = 200;
    for (const auto& g : ft_general) {
      ft_runs.push_back(solve_ft(g.inst, o));
      general.add(ft_runs.back().mean_cost, *ft_runs.back().opt, paper_bound(VariantKind::fault_tolerant));
    }
    for (const auto& g : ft_top) {
      ft_runs.push_back(solve_ft(g.inst, o));
      top.add(ft_runs.back().mean_cost, *ft_runs.back().opt, paper_bound(VariantKind::fault_tolerant));
    }
    return Outcome{general.over == 0 && top.over == 0 && general.rated > 0 && top.rated > 0,
                   "general " + general.summary() + "; top-ell " + top.summary() + "; 200 samples each"};
  });

  report(8, "iterative rounding structure on the robust corpus", 0, [&] {
    int bad = 0, rounded = 0, iterations = 0, checks = 0, max_frac = 0;
    if (robust_runs.size() != robust_corpus.size()) return Outcome{false, "robust runs missing"};
    for (const auto& res : robust_runs) {
      if (res.best.short_circuit) continue;
      ++rounded;
      const auto& tr = res.best.rounding;
      iterations += tr.iterations;
      checks += tr.property_checks;
      max_frac = std::max(max_frac, tr.fractional);
      bad += static_cast<int>(tr.violations.size());
      bad += tr.fractional > 2;
      bad += tr.property_checks < tr.iterations;
      for (std::size_t t = 1; t < tr.objectives.size(); ++t) bad += tr.objectives[t] > tr.objectives[t - 1];
    }
    return Outcome{bad == 0 && rounded > 0, std::to_string(rounded) + " rounded runs, " + std::to_string(iterations) +
                                                " iterations, " + std::to_string(checks) + " property replays, max " +
                                                std::to_string(max_frac) + " fractional, " + std::to_string(bad) +
                                                " violations"};
  });

  report(9, "stochastic rounding structure and marginals", 600, [&] {
    int bad = 0;
    for (const auto& res : ft_runs) bad += !res.checks.bundle_failures.empty();
    int dangerous = 0, balls = 0;
    double worst = 0;
    for (auto& [inst, y] : designated_roundings()) {
      auto plan = prepare_rounding(inst, y);
      bad += !plan.bundle_failures.empty();
      dangerous += static_cast<int>(plan.filter.dangerous.size());
      balls += static_cast<int>(plan.laminar.clients.size());
      auto rep = marginal_test(inst, plan, 10000, 909);
      worst = std::max({worst, rep.max_copy_z, rep.max_ball_z});
      bad += !rep.within(5);
    }
    return Outcome{bad == 0 && balls > 0,
                   std::to_string(ft_runs.size()) + " runs checked; 5 designated points with " +
                       std::to_string(dangerous) + " dangerous clients and " + std::to_string(balls) +
                       " laminar balls, worst z " + fmt(worst) + " at 10^4 samples"};
  });

  report(10, "faithful surrogate bounded by lambda (1 + 8 eps) OPT", 0, [&] {
    int bad = 0, checks = 0;
    const auto preset = ReductionParams::robust_preset();
    const Rational eps = preset.eps;
    double worst = 0;
    for (const auto& g : robust_corpus) {
      auto opt = solve_exact(g.inst);
      auto f = faithful_function(g.inst, opt, eps);
      for (const Rational lam : {Rational(1), frac(1, 2), preset.lambda}) {
        const Rational v = reduced_instance_opt(g.inst, f, lam);
        const Rational bound = lam * (1 + 8 * eps) * opt.value;
        bad += v > bound;
        if (bound > 0) worst = std::max(worst, to_double(v / bound));
        ++checks;
      }
    }
    return Outcome{bad == 0, std::to_string(checks) + " comparisons, largest value/bound " + fmt(worst)};
  });

  report(11, "enumeration never loses to the oracle-assisted run", 600, [] {
    GenSpec spec;
    spec.variant = VariantKind::robust;
    spec.count = 5;
    spec.n_facilities = 3;
    spec.n_clients = 4;
    spec.max_k = 2;
    int bad = 0;
    long candidates = 0;
    PipelineOptions po;
    po.params = ReductionParams::robust_preset();
    po.params.eps = 1;
    po.params.rho = 1;
    for (const auto& g : gen_instances(spec, 1111)) {
      po.mode = SolveMode::oracle;
      auto oracle = solve_robust(g.inst, po);
      po.mode = SolveMode::enumerate;
      auto enumerated = solve_robust(g.inst, po);
      candidates += enumerated.candidates;
      bad += enumerated.truncated || enumerated.evaluation.value > oracle.evaluation.value;
    }
    return Outcome{bad == 0, "5 instances, " + std::to_string(candidates) + " candidates, " + std::to_string(bad) +
                                 " worse or truncated"};
  });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << '\n';
  return failures ? 1 : 0;
}
