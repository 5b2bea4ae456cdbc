#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "ordmed/bench.hpp"

using namespace ordmed;

TEST_CASE("generated corpora are valid and deterministic") {
  for (auto v : {VariantKind::robust, VariantKind::matroid, VariantKind::knapsack, VariantKind::fault_tolerant}) {
    GenSpec spec;
    spec.variant = v;
    spec.count = 8;
    auto a = gen_instances(spec, 42);
    auto b = gen_instances(spec, 42);
    REQUIRE(a.size() == 8);
    for (std::size_t t = 0; t < a.size(); ++t) {
      CHECK(a[t].id == b[t].id);
      CHECK(instance_to_json(a[t].inst).dump() == instance_to_json(b[t].inst).dump());
      CHECK_NOTHROW(validate_instance(a[t].inst));
      CHECK(a[t].inst.n_facilities() == 6);
      CHECK(a[t].inst.n_clients() == 8);
      if (v == VariantKind::robust) CHECK_FALSE(validate_metric(a[t].inst.metric, true).has_value());
      if (v == VariantKind::fault_tolerant)
        for (int r : a[t].inst.fault().r) CHECK(r <= a[t].inst.fault().k);
    }
    CHECK(instance_to_json(gen_instances(spec, 43).front().inst).dump() !=
          instance_to_json(a.front().inst).dump());
  }
}

TEST_CASE("saved files are byte-identical across runs") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ordmed_bench_test";
  fs::create_directories(dir);
  GenSpec spec;
  spec.variant = VariantKind::knapsack;
  auto read = [&](const GeneratedInstance& g) {
    save_instance(g.inst, dir / "x.json");
    std::ifstream in(dir / "x.json");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(read(gen_instances(spec, 9).front()) == read(gen_instances(spec, 9).front()));
  auto loaded = load_instance(dir / "x.json");
  CHECK(instance_to_json(loaded).dump() == instance_to_json(gen_instances(spec, 9).front().inst).dump());
  fs::remove_all(dir);
}

TEST_CASE("parameter overrides are validated") {
  BenchOptions o;
  CHECK_NOTHROW(params_for(VariantKind::robust, o));

  o.lambda = Rational(1);
  CHECK_THROWS_AS(params_for(VariantKind::robust, o), std::invalid_argument);

  BenchOptions shaped;
  shaped.delta = Rational(1, 2);
  auto p = params_for(VariantKind::robust, shaped);
  CHECK(p.delta == Rational(1, 2));
  CHECK(p.lambda == robust_lambda(p.delta, p.tau));

  BenchOptions flat;
  flat.tau = Rational(1);
  CHECK_THROWS(params_for(VariantKind::knapsack, flat));

  BenchOptions neg;
  neg.eps = Rational(-1);
  CHECK_THROWS(ft_options_for(neg));
}

TEST_CASE("bench rows and CSV") {
  GenSpec spec;
  spec.variant = VariantKind::robust;
  spec.count = 3;
  auto corpus = gen_instances(spec, 2);
  spec.variant = VariantKind::fault_tolerant;
  spec.count = 2;
  for (auto& g : gen_instances(spec, 2)) corpus.push_back(std::move(g));

  BenchOptions o;
  o.samples = 10;
  o.threads = 3;
  auto records = run_bench(corpus, o);
  REQUIRE(records.size() == corpus.size());
  for (std::size_t t = 0; t < records.size(); ++t) {
    CHECK(records[t].instance_id == corpus[t].id);
    CHECK_FALSE(records[t].failed());
    if (records[t].opt && *records[t].opt > 0) CHECK(records[t].ratio.has_value());
  }
  CHECK(records.back().samples == 10);

  std::ostringstream csv;
  write_csv(csv, records);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "instance_id,variant,opt,cost,ratio,lp_opt,iters,frac_count,samples,mean_cost,wall_ms,flags");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    CHECK(std::count(line.begin(), line.end(), ',') == 11);
    ++rows;
  }
  CHECK(rows == static_cast<int>(records.size()));

  auto summary = summarize(records);
  REQUIRE(summary.size() == 2);
  for (const auto& s : summary) CHECK(s.pass());
  std::ostringstream table;
  print_summary(table, summary);
  CHECK(table.str().find("robust") != std::string::npos);
}

TEST_CASE("paper bounds per variant") {
  CHECK(paper_bound(VariantKind::robust) == 127);
  CHECK(paper_bound(VariantKind::matroid) == Rational(99, 5));
  CHECK(paper_bound(VariantKind::knapsack) == Rational(208, 5));
  CHECK(paper_bound(VariantKind::fault_tolerant) == 666);
}

TEST_CASE("invariant sweep") {
  GenSpec spec;
  spec.variant = VariantKind::matroid;
  auto g = gen_instances(spec, 4).front();
  CHECK(invariant_sweep(g.inst, BenchOptions{}).ok());
}
