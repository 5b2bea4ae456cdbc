#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ordmed/fault_pipeline.hpp"
#include "ordmed/instance.hpp"
#include "ordmed/robust_pipeline.hpp"

namespace ordmed {

struct GenSpec {
  int count = 1;
  int n_facilities = 6;
  int n_clients = 8;
  VariantKind variant = VariantKind::robust;
  int grid = 100;
  int max_k = 3;
  int max_r = 2;
  int max_weight = 10;
  bool top_ell = false;     // fault-tolerant: ones followed by zeros
  bool vary_sizes = false;  // draw |F| in [2, n_facilities] and |C| in [2, n_clients]
};

struct GeneratedInstance {
  std::string id;
  Instance inst;
};

/// Points uniform on an integer grid with the L1 metric; deterministic in (spec, seed).
std::vector<GeneratedInstance> gen_instances(const GenSpec& spec, std::uint64_t seed);

/// Published approximation factor per variant.
Rational paper_bound(VariantKind v);

struct BenchOptions {
  std::optional<Rational> eps, delta, rho, tau, lambda;
  SolveMode mode = SolveMode::oracle;
  long cap = 100000;
  int samples = 200;
  std::uint64_t seed = 1;
  int threads = 1;
  long budget = default_work_budget;
};

/// Preset parameters for the variant with the given overrides applied and validated.
ReductionParams params_for(VariantKind v, const BenchOptions& opts);
FtOptions ft_options_for(const BenchOptions& opts);

struct BenchRecord {
  std::string instance_id;
  VariantKind variant = VariantKind::robust;
  std::optional<Rational> opt;
  std::optional<Rational> cost;
  std::optional<double> ratio;  // fault-tolerant rows use the sample mean
  std::optional<Rational> lp_opt;
  int iters = 0;
  int frac_count = 0;
  int samples = 0;
  std::optional<Rational> mean_cost;
  double wall_ms = 0;
  std::vector<std::string> flags;

  bool failed() const;
};

BenchRecord bench_one(const std::string& id, const Instance& inst, const BenchOptions& opts);

/// Runs every instance, one per worker thread; records come back in input order.
std::vector<BenchRecord> run_bench(const std::vector<GeneratedInstance>& corpus, const BenchOptions& opts);

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
extern const char* const csv_header;

struct VariantSummary {
  VariantKind variant;
  int runs = 0;
  int failures = 0;
  double max_ratio = 0;
  double mean_ratio = 0;
  Rational bound;
  bool pass() const { return failures == 0 && max_ratio <= to_double(bound); }
};

std::vector<VariantSummary> summarize(const std::vector<BenchRecord>& records);
void print_summary(std::ostream& out, const std::vector<VariantSummary>& summary);

struct SweepReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Runs the pipeline and collects every invariant failure without applying the ratio bound.
SweepReport invariant_sweep(const Instance& inst, const BenchOptions& opts);

}  // namespace ordmed
