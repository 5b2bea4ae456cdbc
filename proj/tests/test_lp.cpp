#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "lp_brute.hpp"
#include "ordmed/fault_lp.hpp"
#include "ordmed/lp.hpp"
#include "ordmed/robust_preprocess.hpp"

using namespace ordmed;
using fixtures::qs;

namespace {

LinearProgram segment() {
  LinearProgram lp;
  lp.add_variable("a", Rational(0), Rational(1));
  lp.add_variable("b", Rational(0), Rational(1));
  lp.add_constraint({{{0, 1}, {1, 1}}, Relation::eq, 1, "sum"});
  lp.set_objective({});
  return lp;
}

LinearProgram simplex3() {
  LinearProgram lp;
  for (int v = 0; v < 3; ++v) lp.add_variable("x" + std::to_string(v), Rational(0), Rational(1));
  lp.add_constraint({{{0, 1}, {1, 1}, {2, 1}}, Relation::eq, 1, "sum"});
  return lp;
}

void check_decomposition(const LinearProgram& poly, const std::vector<Rational>& point, const VertexDecomposition& dec) {
  Rational total = 0;
  std::vector<Rational> mix(point.size());
  for (const auto& t : dec.terms) {
    CHECK(t.weight > 0);
    CHECK(t.weight <= 1);
    total += t.weight;
    CHECK(poly.satisfies(t.vertex));
    for (std::size_t v = 0; v < point.size(); ++v) {
      CHECK(is_integral(t.vertex[v]));
      mix[v] += t.weight * t.vertex[v];
    }
  }
  CHECK(total == 1);
  CHECK(mix == point);
}

}  // namespace

TEST_CASE("simplex examples") {
  SUBCASE("box maximum") {
    LinearProgram lp;
    lp.add_variable("a", Rational(0));
    lp.add_variable("b", Rational(0));
    lp.add_constraint({{{0, 1}}, Relation::le, 1, "a"});
    lp.add_constraint({{{1, 1}}, Relation::le, 1, "b"});
    lp.set_objective({{0, 1}, {1, 1}}, Sense::maximize);
    auto res = solve_basic(lp);
    REQUIRE(res.optimal());
    CHECK(res.solution.values == qs({1, 1}));
    CHECK(res.solution.objective_value == 2);
  }
  SUBCASE("bound-tight minimum") {
    LinearProgram lp;
    lp.add_variable("x", Rational(2, 3));
    lp.set_objective({{0, 1}});
    auto res = solve_basic(lp);
    REQUIRE(res.optimal());
    CHECK(res.solution.values[0] == Rational(2, 3));
  }
  SUBCASE("zero objective on a segment lands on an endpoint") {
    auto res = solve_basic(segment());
    REQUIRE(res.optimal());
    const auto& x = res.solution.values;
    CHECK(((x == qs({1, 0})) || (x == qs({0, 1}))));
  }
  SUBCASE("infeasible and unbounded are distinct") {
    LinearProgram bad;
    bad.add_variable("x", Rational(0), Rational(1));
    bad.add_constraint({{{0, 1}}, Relation::ge, 2, "high"});
    CHECK(solve_basic(bad).status == LpStatus::infeasible);

    LinearProgram open;
    open.add_variable("x", Rational(0));
    open.set_objective({{0, 1}}, Sense::maximize);
    CHECK(solve_basic(open).status == LpStatus::unbounded);
  }
  SUBCASE("free variables") {
    LinearProgram lp;
    lp.add_variable("x", std::nullopt, std::nullopt);
    lp.add_constraint({{{0, 1}}, Relation::ge, -5, "lo"});
    lp.set_objective({{0, 1}});
    auto res = solve_basic(lp);
    REQUIRE(res.optimal());
    CHECK(res.solution.values[0] == -5);
  }
}

TEST_CASE("simplex agrees with vertex enumeration on random tiny programs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    auto lp = fixtures::random_tiny_lp(rng);
    auto res = solve_basic(lp);
    auto brute = fixtures::brute_force_optimum(lp);
    REQUIRE(res.status != LpStatus::unbounded);
    CHECK(res.optimal() == brute.has_value());
    if (!res.optimal() || !brute) continue;
    CHECK(lp.satisfies(res.solution.values));
    CHECK(res.solution.objective_value == *brute);
    CHECK(lp.objective_value(res.solution.values) == res.solution.objective_value);
    CHECK(fixtures::tight_rank(lp, res.solution.values) == lp.n_vars());
  }
}

TEST_CASE("lazy generation") {
  SUBCASE("top-ell separation picks the two costliest clients") {
    auto inst = fixtures::line_instance({0}, {5, 3, 2}, qs({1, 1, 0}), fixtures::fault(1, {1, 1, 1}));
    auto ft = build_top_lp(inst, 2, Rational(0));
    std::vector<Rational> values(ft.lp.n_vars());
    values[ft.y_var[0]] = 1;
    for (int j = 0; j < 3; ++j) values[ft.x_var[0][j]] = 1;
    values[ft.r_var[0]] = 7;
    auto cuts = ft.oracle(values);
    REQUIRE(cuts.size() == 1);
    std::vector<int> hit;
    for (const auto& t : cuts[0].terms)
      if (t.var != ft.r_var[0])
        for (int j = 0; j < 3; ++j)
          if (t.var == ft.x_var[0][j]) hit.push_back(j);
    std::sort(hit.begin(), hit.end());
    CHECK(hit == std::vector<int>{0, 1});
    CHECK(activity(cuts[0], values) - cuts[0].rhs == 1);
  }
  SUBCASE("a satisfied family takes one round") {
    auto lp = segment();
    auto gen = solve_with_generation(lp, [](std::span<const Rational>) { return std::vector<Constraint>{}; });
    CHECK(gen.rounds == 1);
    CHECK(gen.result.solution.values == solve_basic(lp).solution.values);
  }
  SUBCASE("partition matroid cut names the overfull part") {
    MatroidSpec mat;
    mat.parts = {{0, 1}, {2}};
    mat.capacities = {1, 1};
    std::vector<std::vector<int>> vars = {{0}, {1}, {2}};
    std::vector<Rational> y = {Rational(1), Rational(1, 2), Rational(0)};
    auto cuts = matroid_cuts(mat, 3, vars, y);
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0].rhs == 1);
    CHECK(cuts[0].terms.size() == 2);
  }
  SUBCASE("an oracle that never settles hits the round limit") {
    LinearProgram lp;
    lp.add_variable("x", Rational(0), Rational(100));
    lp.set_objective({{0, 1}}, Sense::maximize);
    auto creep = [](std::span<const Rational> v) {
      return std::vector<Constraint>{{{{0, 1}}, Relation::le, v[0] - 1, "creep"}};
    };
    CHECK_THROWS_AS(solve_with_generation(lp, creep, 5), GenerationLimitExceeded);
  }
}

TEST_CASE("lazy top-ell solutions satisfy every subset row") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int nc = 3 + static_cast<int>(rng() % 4);
    std::vector<long> fac(3), cli(nc);
    for (auto& x : fac) x = static_cast<long>(rng() % 20);
    for (auto& x : cli) x = static_cast<long>(rng() % 20);
    const int ell = 1 + static_cast<int>(rng() % nc);
    std::vector<Rational> w(nc, Rational(0));
    std::fill(w.begin(), w.begin() + ell, Rational(1));
    auto inst = fixtures::line_instance(fac, cli, w, fixtures::fault(2, std::vector<int>(nc, 1)));
    auto ft = build_top_lp(inst, ell, Rational(0));
    auto sol = solve_ft_lp(ft);
    REQUIRE(sol.has_value());
    auto cost = lp_client_costs(inst, *sol);
    for (unsigned mask = 0; mask < (1u << nc); ++mask) {
      if (std::popcount(mask) != ell) continue;
      Rational s = 0;
      for (int j = 0; j < nc; ++j)
        if (mask >> j & 1) s += cost[j];
      CHECK(s <= sol->R[0]);
    }
  }
}

TEST_CASE("vertex decomposition examples") {
  SUBCASE("segment midpoint") {
    auto poly = segment();
    std::vector<Rational> p = {Rational(1, 2), Rational(1, 2)};
    auto dec = decompose_to_vertices(poly, p);
    CHECK(dec.terms.size() == 2);
    for (const auto& t : dec.terms) CHECK(t.weight == Rational(1, 2));
    check_decomposition(poly, p, dec);
  }
  SUBCASE("integral point is its own decomposition") {
    auto poly = segment();
    std::vector<Rational> p = qs({0, 1});
    auto dec = decompose_to_vertices(poly, p);
    REQUIRE(dec.terms.size() == 1);
    CHECK(dec.terms[0].weight == 1);
    CHECK(dec.terms[0].vertex == p);
  }
  SUBCASE("simplex barycenter") {
    auto poly = simplex3();
    std::vector<Rational> p(3, Rational(1, 3));
    auto dec = decompose_to_vertices(poly, p);
    CHECK(dec.terms.size() == 3);
    for (const auto& t : dec.terms) CHECK(t.weight == Rational(1, 3));
    check_decomposition(poly, p, dec);
  }
  SUBCASE("infeasible points are rejected") {
    CHECK_THROWS_AS(decompose_to_vertices(segment(), qs({1, 1})), DecompositionError);
  }
  SUBCASE("random points of a cardinality polytope") {
    std::mt19937_64 rng(9);
    LinearProgram poly;
    for (int v = 0; v < 5; ++v) poly.add_variable("z" + std::to_string(v), Rational(0), Rational(1));
    poly.add_constraint({{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}, Relation::eq, 2, "card"});
    poly.add_constraint({{{0, 1}, {1, 1}}, Relation::le, 1, "pair"});
    for (int trial = 0; trial < 20; ++trial) {
      // Average random vertices so the point is feasible by construction.
      std::vector<Rational> p(5);
      const std::vector<std::vector<int>> verts = {{0, 2}, {0, 3}, {1, 4}, {2, 3}, {3, 4}, {1, 2}};
      long weights_total = 0;
      std::vector<long> wts(verts.size());
      for (auto& x : wts) weights_total += (x = static_cast<long>(rng() % 4));
      if (weights_total == 0) continue;
      for (std::size_t t = 0; t < verts.size(); ++t)
        for (int v : verts[t]) p[v] += fixtures::frac(wts[t], weights_total);
      check_decomposition(poly, p, decompose_to_vertices(poly, p));
    }
  }
}

TEST_CASE("vertex sampling") {
  auto dec = decompose_to_vertices(segment(), std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  std::mt19937_64 rng(17);
  const int n = 10000;
  int first = 0;
  for (int s = 0; s < n; ++s) first += sample_vertex(dec, rng) == dec.terms[0].vertex;
  const double sigma = std::sqrt(n * 0.25);
  CHECK(std::abs(first - n / 2) <= 5 * sigma);

  std::mt19937_64 a(3), b(3);
  for (int s = 0; s < 100; ++s) CHECK(sample_term(dec, a) == sample_term(dec, b));

  VertexDecomposition single{{{Rational(1), qs({0, 1})}}};
  for (int s = 0; s < 20; ++s) CHECK(sample_vertex(single, rng) == qs({0, 1}));
}

TEST_CASE("debug dump lists one line per constraint") {
  auto lp = segment();
  lp.add_constraint({{{0, 1}}, Relation::le, Rational(3, 4), "cap"});
  std::ostringstream out;
  lp.dump(out);
  const auto text = out.str();
  CHECK(text.find("3/4") != std::string::npos);
  CHECK(text.find("sum") != std::string::npos);
}
