#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "ordmed/bench.hpp"
#include "ordmed/robust_pipeline.hpp"

using namespace ordmed;
using namespace fixtures;

namespace {

std::vector<GeneratedInstance> corpus(VariantKind v, int count, std::uint64_t seed) {
  GenSpec spec;
  spec.variant = v;
  spec.count = count;
  spec.vary_sizes = true;
  return gen_instances(spec, seed);
}

void check_trace(const PipelineResult& res) {
  const auto& tr = res.best.rounding;
  CHECK(res.best.checks.all());
  CHECK(tr.violations.empty());
  CHECK(tr.fractional <= 2);
  for (std::size_t t = 1; t < tr.objectives.size(); ++t) CHECK(tr.objectives[t] <= tr.objectives[t - 1]);
}

}  // namespace

TEST_CASE("reduction presets") {
  for (auto v : {VariantKind::robust, VariantKind::matroid, VariantKind::knapsack}) {
    auto p = ReductionParams::preset(v);
    CHECK_NOTHROW(p.validate(v));
    CHECK(p.lambda > 0);
    CHECK(p.lambda <= p.lambda2());
    CHECK(p.lambda2() <= p.lambda1());
  }
  auto r = ReductionParams::robust_preset();
  CHECK(r.lambda == robust_lambda(r.delta, r.tau));
  auto k = ReductionParams::knapsack_preset();
  CHECK(k.lambda == knapsack_lambda(k.delta, k.tau));

  auto bad = r;
  bad.lambda = 1;
  CHECK_THROWS_AS(bad.validate(VariantKind::robust), std::invalid_argument);
}

TEST_CASE("distance grid") {
  const Rational tau(3, 2);
  CHECK(grid_value(tau, -2) == -1);
  CHECK(grid_value(tau, -1) == 0);
  CHECK(grid_value(tau, 2) == Rational(9, 4));
  CHECK(grid_level(tau, 0) == -1);
  CHECK(grid_level(tau, 2) == 2);
  CHECK(grid_level(tau, Rational(9, 4)) == 2);
  CHECK(grid_level(tau, 1) == 0);
}

TEST_CASE("sparse instance construction") {
  auto inst = line_instance({0, 20}, {0, 1, 20, 22}, qs({2, 1, 1}), robust(2, 3));
  auto opt = solve_robust_exact(inst);
  auto params = ReductionParams::robust_preset();
  auto f = faithful_function(inst, opt, params.eps);
  auto red = reduced_instance_solve(inst, f, 1);
  auto star = make_star(inst, red);
  const Rational U = ceil_power(1 + params.eps, red.value);

  SUBCASE("a threshold above every star removes nothing") {
    REQUIRE(red.value > 0);
    auto p = params;
    p.rho = 1;
    auto sp = build_sparse_instance(inst, f, 2 * red.value, p, star);
    CHECK(sp.s0.empty());
    CHECK(sp.clients == std::vector<int>{0, 1, 2, 3});
    CHECK(sp.m_prime == 3);
    CHECK(check_sparse_conditions(inst, f, sp, p, star).all());
  }
  SUBCASE("the default threshold keeps every condition") {
    auto sp = build_sparse_instance(inst, f, U, params, star);
    CHECK(check_sparse_conditions(inst, f, sp, params, star).all());
    CHECK(static_cast<int>(sp.s0.size()) <= sparse_limit(params.rho));
  }
  SUBCASE("the enumerated stream contains the constructed instance") {
    auto sp = build_sparse_instance(inst, f, U, params, star);
    bool found = false;
    enumerate_sparse_instances(inst, U, params, 1000000, [&](const SparseInstance& c) {
      found = found || (c.clients == sp.clients && c.s0 == sp.s0 && c.m_prime == sp.m_prime);
      return true;
    });
    CHECK(found);
  }
  SUBCASE("cap of one truncates") {
    int seen = 0;
    CHECK(enumerate_sparse_instances(inst, U, params, 1, [&](const SparseInstance&) { return ++seen, true; }));
    CHECK(seen == 1);
  }
}

TEST_CASE("radius caps") {
  auto inst = line_instance({0, 20}, {0, 1, 20, 22}, qs({2, 1, 1}), robust(2, 3));
  SparseInstance sp;
  sp.clients = {0, 1, 2, 3};
  sp.m_prime = 3;
  sp.U = 10;
  auto params = ReductionParams::robust_preset();

  SUBCASE("a huge threshold never binds") {
    auto p = params;
    p.rho = 1000000;
    auto r = compute_radius_bounds(inst, sp, CostFunction::linear(1), p);
    CHECK(r == qs({22, 22, 22, 22}));
    CHECK(check_radius_bounds(inst, sp, CostFunction::linear(1), p, r));
  }
  SUBCASE("a steep surrogate always binds") {
    auto p = params;
    p.rho = Rational(1, 1000);
    auto r = compute_radius_bounds(inst, sp, CostFunction::linear(1000), p);
    CHECK(r == qs({0, 0, 0, 0}));
  }
  SUBCASE("the computed caps satisfy the backup property") {
    auto r = compute_radius_bounds(inst, sp, CostFunction::linear(1), params);
    CHECK(check_radius_bounds(inst, sp, CostFunction::linear(1), params, r));
  }
}

TEST_CASE("fractional fix") {
  SUBCASE("knapsack pair opens the lighter facility") {
    auto inst = line_instance({0, 10}, {1, 9}, qs({1, 1}), knapsack({3, 5}, 5));
    RoundingResult rr;
    rr.state.origin = {0, 1};
    rr.y = {Rational(1, 2), Rational(1, 2)};
    CHECK(fix_fractional(inst, rr) == std::vector<int>{0});

    rr.state.origin = {1, 0};
    CHECK(fix_fractional(inst, rr) == std::vector<int>{1});
  }
  SUBCASE("robust pair opens the copy with more exclusive clients") {
    auto inst = line_instance({0, 10}, {1, 2, 3, 9}, qs({1, 1, 1, 1}), robust(1, 4));
    RoundingResult rr;
    rr.state.origin = {0, 1};
    rr.state.clients = {0, 1, 2, 3};
    rr.state.outer = {{0}, {0}, {0}, {1}};
    rr.state.full = {0, 0, 0, 0};
    rr.y = {Rational(1, 3), Rational(2, 3)};
    CHECK(fix_fractional(inst, rr) == std::vector<int>{0});
  }
  SUBCASE("integral vectors pass through") {
    auto inst = line_instance({0, 10}, {1, 9}, qs({1, 1}), robust(1, 2));
    RoundingResult rr;
    rr.state.origin = {0, 1};
    rr.y = qs({0, 1});
    CHECK(fix_fractional(inst, rr) == std::vector<int>{1});
  }
}

TEST_CASE("greedy completion") {
  auto inst = line_instance({0}, {0, 3, 50}, qs({1, 1}), robust(1, 2));
  RoundingState st;
  st.origin = {0};
  SparseInstance sp;
  SUBCASE("no completion needed") {
    sp.clients = {0, 2};
    sp.m_prime = 2;
    auto sol = complete_solution(inst, st, {0}, sp);
    CHECK(sol.served == std::vector<int>{0, 2});
  }
  SUBCASE("the nearer removed client is added") {
    sp.clients = {0};
    sp.m_prime = 1;
    auto sol = complete_solution(inst, st, {0}, sp);
    CHECK(sol.served == std::vector<int>{0, 1});
    CHECK_NOTHROW(evaluate_solution(inst, sol));
  }
}

TEST_CASE("zero optimum short-circuits") {
  auto inst = line_instance({0, 10, 20}, {0, 10, 20}, qs({1, 1}), robust(2, 2));
  PipelineOptions po;
  po.params = ReductionParams::robust_preset();
  auto res = solve_robust(inst, po);
  CHECK(res.evaluation.value == 0);
  CHECK(res.best.short_circuit);
}

TEST_CASE("oracle-assisted pipelines on small corpora") {
  for (auto v : {VariantKind::robust, VariantKind::matroid, VariantKind::knapsack}) {
    CAPTURE(to_string(v));
    PipelineOptions po;
    po.params = ReductionParams::preset(v);
    for (const auto& g : corpus(v, 6, 77)) {
      CAPTURE(g.id);
      auto res = solve_single_assignment(g.inst, po);
      REQUIRE(res.opt.has_value());
      CHECK(res.evaluation.value >= *res.opt);
      CHECK(res.evaluation.value <= paper_bound(v) * *res.opt);
      CHECK(evaluate_solution(g.inst, res.solution).value == res.evaluation.value);
      if (!res.best.short_circuit) check_trace(res);
    }
  }
}

TEST_CASE("a one-part matroid matches the robust problem serving everyone") {
  for (const auto& g : corpus(VariantKind::robust, 4, 5)) {
    auto doc = instance_to_json(g.inst);
    const int nf = g.inst.n_facilities(), nc = g.inst.n_clients();
    std::vector<int> all(nf);
    for (int i = 0; i < nf; ++i) all[i] = i;
    const int k = g.inst.robust().k;
    std::vector<Rational> w(nc, Rational(1));
    doc["weights"] = json_list(w);
    doc["variant"] = robust(k, nc);
    auto rob = instance_from_json(doc);
    doc["variant"] = partition({all}, {k});
    auto mat = instance_from_json(doc);
    CHECK(solve_matroid_exact(mat).value == solve_robust_exact(rob).value);

    PipelineOptions po;
    po.params = ReductionParams::matroid_preset();
    auto res = solve_matroid(mat, po);
    CHECK(res.evaluation.value <= paper_bound(VariantKind::matroid) * *res.opt);
  }
}

TEST_CASE("trace JSON carries the stage record") {
  auto g = corpus(VariantKind::robust, 1, 3).front();
  PipelineOptions po;
  po.params = ReductionParams::robust_preset();
  auto j = solve_robust(g.inst, po).trace_json();
  for (const char* key : {"guess", "U", "clients", "open", "cost", "opt", "checks", "candidates"})
    CHECK(j.contains(key));
}

TEST_CASE("enumerate mode is no worse than oracle mode on a tiny instance") {
  auto inst = line_instance({0, 6}, {1, 5, 7}, qs({2, 1}), robust(1, 2));
  PipelineOptions po;
  po.params = ReductionParams::robust_preset();
  po.params.eps = 1;
  po.params.rho = 1;
  auto oracle = solve_robust(inst, po);
  po.mode = SolveMode::enumerate;
  auto enumerated = solve_robust(inst, po);
  REQUIRE_FALSE(enumerated.truncated);
  CHECK(enumerated.evaluation.value <= oracle.evaluation.value);
  CHECK(enumerated.candidates > 1);
}
