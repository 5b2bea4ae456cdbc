#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "ordmed/cost_function.hpp"
#include "ordmed/instance_io.hpp"
#include "ordmed/ordered.hpp"

using namespace ordmed;
using fixtures::q;
using fixtures::qs;

TEST_CASE("rationals parse exactly from fractions, integers and decimals") {
  CHECK(parse_rational("3/10") == Rational(3, 10));
  CHECK(parse_rational("6/20") == Rational(3, 10));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK(parse_rational(" 42 ") == 42);
  CHECK(to_string(q("4/2")) == "2");
  CHECK(to_string(q("-2/6")) == "-1/3");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational(""));
}

TEST_CASE("integer logarithms bracket the value") {
  CHECK(ceil_log(Rational(2), Rational(5)) == 3);
  CHECK(floor_log(Rational(2), Rational(5)) == 2);
  CHECK(ceil_log(Rational(2), Rational(4)) == 2);
  CHECK(ceil_log(Rational(2), Rational(1, 3)) == -1);
  CHECK(floor_log(Rational(5, 4), Rational(1)) == 0);
}

TEST_CASE("metric validation") {
  SUBCASE("collinear points are a metric") {
    Metric m(1, 2, qs({0, 1, 2, 1, 0, 1, 2, 1, 0}));
    CHECK_FALSE(validate_metric(m).has_value());
  }
  SUBCASE("a shortcut through a third point is reported") {
    Metric m(1, 2, qs({0, 5, 10, 5, 0, 1, 10, 1, 0}));
    auto v = validate_metric(m);
    REQUIRE(v.has_value());
    CHECK(v->message.find("triangle") != std::string::npos);
  }
  SUBCASE("co-located pairs are exempt from unit separation") {
    Metric m(1, 2, qs({0, 0, 3, 0, 0, 3, 3, 3, 0}));
    CHECK_FALSE(validate_metric(m, true).has_value());
  }
  SUBCASE("distinct points closer than one fail unit separation only") {
    Metric m(1, 1, {Rational(0), Rational(1, 2), Rational(1, 2), Rational(0)});
    CHECK_FALSE(validate_metric(m).has_value());
    CHECK(validate_metric(m, true).has_value());
  }
  SUBCASE("asymmetry and negativity") {
    CHECK(validate_metric(Metric(1, 1, qs({0, 2, 3, 0}))).has_value());
    CHECK(validate_metric(Metric(1, 1, qs({0, -1, -1, 0}))).has_value());
  }
}

TEST_CASE("ordered cost examples") {
  CHECK(ordered_cost(qs({3, 2, 1}), qs({1, 5, 2})) == 20);
  CHECK(ordered_cost(qs({1, 1, 1}), qs({4, 7, 2})) == 13);
  CHECK(ordered_cost(qs({1, 0, 0}), qs({4, 7, 2})) == 7);
  CHECK_THROWS(ordered_cost(qs({1, 1}), qs({1, 2, 3})));
}

TEST_CASE("top-ell examples") {
  CHECK(top_ell(qs({1, 5, 2}), 2) == 7);
  CHECK(top_ell(qs({1, 5, 2}), 3) == 8);
  CHECK(top_ell(qs({0, 0}), 1) == 0);
  CHECK_THROWS(top_ell(qs({1, 2}), 0));
  CHECK_THROWS(top_ell(qs({1, 2}), 3));
}

TEST_CASE("conic cost examples") {
  CHECK(conic_cost(qs({3, 2, 1}), qs({1, 5, 2})) == 20);
  CHECK(conic_cost(qs({1, 1}), std::vector<Rational>{q("7/3"), q("5/2")}) == q("7/3") + q("5/2"));
  CHECK(conic_cost(qs({2, 0, 0}), qs({1, 5, 2})) == 10);
}

TEST_CASE("weight padding examples") {
  CHECK(pad_weights(std::vector<Rational>{1, Rational(1, 5), 0}, q("3/10")) ==
        std::vector<Rational>{1, Rational(1, 5), Rational(1, 10)});
  CHECK(pad_weights(qs({1, 1, 1}), q("5/2")) == qs({1, 1, 1}));
  CHECK(pad_weights(qs({1, 0, 0, 0}), q("2/5")) ==
        std::vector<Rational>{1, Rational(1, 10), Rational(1, 10), Rational(1, 10)});
}

TEST_CASE("weight sparsification examples") {
  auto s8 = sparsify_weights(qs({8, 7, 6, 5, 4, 3, 2, 1}), Rational(1));
  CHECK(s8.pos == std::vector<int>{1, 2, 4, 8});

  auto s = sparsify_weights(qs({8, 4, 2, 1}), Rational(1));
  CHECK(s.pos == std::vector<int>{1, 2, 4});
  CHECK(s.w == qs({8, 4, 1, 1}));

  auto wide = sparsify_weights(qs({5, 4, 3, 2}), Rational(10));
  CHECK(wide.pos == std::vector<int>{1, 4});
  CHECK(wide.w == qs({5, 2, 2, 2}));
}

TEST_CASE("truncated distance") {
  CHECK(truncated_distance(4, 4) == 4);
  CHECK(truncated_distance(q("39/10"), 4) == 0);
  CHECK(truncated_distance(q("1/7"), 0) == q("1/7"));
}

TEST_CASE("evaluate_solution examples") {
  using namespace fixtures;
  SUBCASE("facilities on clients") {
    auto inst = line_instance({0, 10}, {0, 10}, qs({1, 1}), fault(2, {1, 1}));
    auto ev = evaluate_solution(inst, make_solution(inst, {0, 1}, {0, 1}));
    CHECK(ev.value == 0);
  }
  SUBCASE("robust single served client") {
    auto inst = line_instance({0, 9}, {0, 9}, qs({1}), robust(1, 1));
    auto ev = evaluate_solution(inst, make_solution(inst, {0}, {0}));
    CHECK(ev.value == 0);
  }
  SUBCASE("fault-tolerant sum of the two nearest") {
    auto inst = line_instance({0, 3}, {0}, qs({1}), fault(2, {2}));
    auto ev = evaluate_solution(inst, make_solution(inst, {0, 1}, {0}));
    CHECK(ev.costs == qs({3}));
    CHECK(ev.value == 3);
  }
  SUBCASE("infeasible solutions are rejected") {
    auto inst = line_instance({0, 9}, {0, 9}, qs({1, 1}), robust(1, 2));
    CHECK_THROWS_AS(evaluate_solution(inst, make_solution(inst, {0, 1}, {0, 1})), InfeasibleSolution);
    CHECK_THROWS_AS(evaluate_solution(inst, make_solution(inst, {0}, {0})), InfeasibleSolution);
  }
}

TEST_CASE("ordered cost properties on random vectors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    auto w = fixtures::random_weights(rng, n);
    auto c = fixtures::random_costs(rng, n);
    const Rational base = ordered_cost(w, c);
    CHECK(base == conic_cost(w, c));
    std::shuffle(c.begin(), c.end(), rng);
    CHECK(base == ordered_cost(w, c));
    Rational prev = 0;
    for (int ell = 1; ell <= n; ++ell) {
      const Rational t = top_ell(c, ell);
      CHECK(t >= prev);
      prev = t;
    }
    CHECK(prev == std::accumulate(c.begin(), c.end(), Rational(0)));
  }
}

TEST_CASE("padding and sparsification sandwiches on random vectors") {
  std::mt19937_64 rng(11);
  for (const Rational e : {Rational(1, 4), Rational(1), Rational(3)}) {
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 10);
      auto w = fixtures::random_weights(rng, n);
      if (w.front() == 0) w.front() = 1;
      auto v = fixtures::random_costs(rng, n);
      const Rational cost = ordered_cost(w, v);

      auto padded = pad_weights(w, e);
      CHECK(std::is_sorted(padded.rbegin(), padded.rend()));
      const Rational cp = ordered_cost(padded, v);
      CHECK(cost <= cp);
      CHECK(cp <= (1 + e) * cost);

      auto sp = sparsify_weights(w, e);
      const Rational cs = ordered_cost(sp.w, v);
      CHECK(cs <= cost);
      CHECK(cost <= (1 + e) * cs);
      CHECK(anchored_conic_cost(sp, v) == cs);
    }
  }
}

TEST_CASE("fault-tolerant cost equals the best r-subset of the open set") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<long> fac(5), cli(3);
    for (auto& x : fac) x = static_cast<long>(rng() % 30);
    for (auto& x : cli) x = static_cast<long>(rng() % 30);
    auto inst = fixtures::line_instance(fac, cli, qs({2, 1, 1}), fixtures::fault(4, {1, 2, 3}));
    std::vector<int> open = {0, 2, 3, 4};
    for (int j = 0; j < 3; ++j) {
      const int r = inst.fault().r[j];
      Rational best = -1;
      for (unsigned mask = 0; mask < (1u << open.size()); ++mask) {
        if (std::popcount(mask) != r) continue;
        Rational s = 0;
        for (std::size_t b = 0; b < open.size(); ++b)
          if (mask >> b & 1) s += inst.d(open[b], j);
        if (best < 0 || s < best) best = s;
      }
      CHECK(fault_cost(inst, j, open, r) == best);
    }
  }
}

TEST_CASE("cost function grid") {
  CHECK(interval_count(Rational(1), 2) == 2);
  CostFunction f(Rational(100), {Rational(1), Rational(1), Rational(1, 2), Rational(1, 2)}, Rational(1), 2);
  CHECK(f.T() == 2);
  // The innermost interval ends at eps * o1 / m.
  CHECK(f.uppers()[3] == 50);
  CHECK(f.uppers()[2] == 100);
  CHECK(f.uppers()[1] == 200);
  CHECK(f.interval_of(100) == 2);
  CHECK(f.interval_of(60) == 2);
  CHECK(f.interval_of(50) == 3);
  CHECK(f.interval_of(201) == 0);
  CHECK(f(60) == 30);
  CHECK(f(150) == 150);

  auto lin = CostFunction::linear(Rational(3));
  CHECK(lin(7) == 21);
  CostFunction flat(Rational(100), qs({2, 2, 2, 2}), Rational(1), 2);
  for (long x : {0L, 10L, 40L, 75L, 200L}) CHECK(flat(x) == 2 * x);
}

TEST_CASE("instance JSON round-trips") {
  using namespace fixtures;
  for (const auto& variant : {robust(2, 3), fault(2, {1, 2, 1}), knapsack({3, 5}, 4),
                              partition({{0}, {1}}, {1, 0})}) {
    auto inst = line_instance({0, 7}, {1, 4, 6}, {Rational(3, 2), Rational(1), Rational(0)}, variant);
    auto doc = instance_to_json(inst);
    auto back = instance_from_json(doc);
    CHECK(instance_to_json(back).dump() == doc.dump());
    CHECK(back.kind() == inst.kind());
    CHECK(back.w == inst.w);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) CHECK(back.d(i, j) == inst.d(i, j));
  }
}

TEST_CASE("instance validation rejects malformed documents") {
  using namespace fixtures;
  CHECK_THROWS(line_instance({0, 7}, {1, 4}, qs({1, 2}), robust(1, 2)));     // increasing weights
  CHECK_THROWS(line_instance({0, 7}, {1, 4}, qs({1, 1}), robust(3, 2)));     // k > |F|
  CHECK_THROWS(line_instance({0, 7}, {1, 4}, qs({1, 1}), fault(2, {1, 3})));  // r_j > k
  CHECK_THROWS(line_instance({0, 7}, {1, 4}, qs({1}), robust(1, 2)));        // |w| != m
  CHECK_THROWS(line_instance({0, 7}, {1, 4}, qs({1, 1}), partition({{0}}, {1})));  // parts miss a facility
}
