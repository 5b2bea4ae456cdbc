#include "ordmed/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "ordmed/instance_io.hpp"

namespace ordmed {

namespace {

// rng() % n keeps the stream identical across standard libraries.
int draw(std::mt19937_64& rng, int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

std::vector<Rational> draw_weights(std::mt19937_64& rng, int len, int max_weight) {
  std::vector<Rational> w;
  for (int t = 0; t < len; ++t) w.emplace_back(draw(rng, 0, max_weight));
  std::sort(w.begin(), w.end(), std::greater<>());
  if (w.front() == 0) w.front() = 1;
  return w;
}

Metric unit_separated(Metric m) {
  Rational smallest = 0;
  for (int u = 0; u < m.n_points(); ++u)
    for (int v = 0; v < m.n_points(); ++v)
      if (m.at(u, v) > 0 && (smallest == 0 || m.at(u, v) < smallest)) smallest = m.at(u, v);
  return smallest > 0 && smallest < 1 ? m.scaled(1 / smallest) : m;
}

Instance draw_instance(const GenSpec& spec, std::mt19937_64& rng) {
  const int nf = spec.vary_sizes ? draw(rng, 2, spec.n_facilities) : spec.n_facilities;
  const int nc = spec.vary_sizes ? draw(rng, 2, spec.n_clients) : spec.n_clients;
  std::vector<std::pair<Rational, Rational>> points;
  for (int p = 0; p < nf + nc; ++p) points.emplace_back(draw(rng, 0, spec.grid), draw(rng, 0, spec.grid));
  Instance inst;
  inst.metric = Metric::from_points_l1(nf, nc, points);
  for (int i = 0; i < nf; ++i) inst.facility_ids.push_back("f" + std::to_string(i));
  for (int j = 0; j < nc; ++j) inst.client_ids.push_back("c" + std::to_string(j));
  const int k_cap = std::min(spec.max_k, nf);

  switch (spec.variant) {
    case VariantKind::robust: {
      RobustSpec r{draw(rng, 1, k_cap), draw(rng, 1, nc)};
      inst.metric = unit_separated(inst.metric);
      inst.w = draw_weights(rng, r.m, spec.max_weight);
      inst.variant = r;
      break;
    }
    case VariantKind::matroid: {
      MatroidSpec m;
      const int n_parts = draw(rng, 1, std::min(3, nf));
      m.parts.resize(n_parts);
      for (int i = 0; i < nf; ++i) m.parts[i < n_parts ? i : draw(rng, 0, n_parts - 1)].push_back(i);
      for (auto& part : m.parts) {
        std::sort(part.begin(), part.end());
        m.capacities.push_back(draw(rng, 1, static_cast<int>(part.size())));
      }
      inst.w = draw_weights(rng, nc, spec.max_weight);
      inst.variant = m;
      break;
    }
    case VariantKind::knapsack: {
      KnapsackSpec ks;
      for (int i = 0; i < nf; ++i) ks.wt.emplace_back(draw(rng, 1, 10));
      const int lightest = static_cast<int>(std::min_element(ks.wt.begin(), ks.wt.end())->get_num().get_si());
      int total = 0;
      for (const auto& v : ks.wt) total += static_cast<int>(v.get_num().get_si());
      ks.budget = draw(rng, lightest, std::max(lightest, total / 2));
      inst.w = draw_weights(rng, nc, spec.max_weight);
      inst.variant = ks;
      break;
    }
    case VariantKind::fault_tolerant: {
      FaultSpec f;
      f.k = draw(rng, 1, k_cap);
      for (int j = 0; j < nc; ++j) f.r.push_back(draw(rng, 1, std::min(spec.max_r, f.k)));
      if (spec.top_ell) {
        const int ell = draw(rng, 1, nc);
        for (int j = 0; j < nc; ++j) inst.w.emplace_back(j < ell ? 1 : 0);
      } else {
        inst.w = draw_weights(rng, nc, spec.max_weight);
      }
      inst.variant = f;
      break;
    }
  }
  validate_instance(inst);
  return inst;
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string opt_str(const std::optional<Rational>& q) { return q ? to_string(*q) : ""; }

}  // namespace

std::vector<GeneratedInstance> gen_instances(const GenSpec& spec, std::uint64_t seed) {
  if (spec.count < 0 || spec.n_facilities < 1 || spec.n_clients < 1 || spec.grid < 1)
    throw std::invalid_argument("generator sizes must be positive");
  if (spec.vary_sizes && (spec.n_facilities < 2 || spec.n_clients < 2))
    throw std::invalid_argument("varied sizes need at least two facilities and clients");
  if (spec.max_k < 1 || spec.max_r < 1) throw std::invalid_argument("k and r bounds must be positive");
  if (spec.variant == VariantKind::fault_tolerant && spec.max_r > spec.max_k)
    throw std::invalid_argument("demand bound exceeds the facility budget");
  if (spec.n_facilities > 20) throw std::invalid_argument("at most 20 facilities are supported by the oracle");

  std::mt19937_64 rng(seed);
  std::vector<GeneratedInstance> out;
  for (int t = 0; t < spec.count; ++t) {
    std::ostringstream id;
    id << to_string(spec.variant) << (spec.top_ell ? "-top" : "") << "-" << seed << "-" << std::setw(3)
       << std::setfill('0') << t;
    out.push_back({id.str(), draw_instance(spec, rng)});
  }
  return out;
}

Rational paper_bound(VariantKind v) {
  switch (v) {
    case VariantKind::robust: return Rational(127);
    case VariantKind::matroid: return Rational(99, 5);
    case VariantKind::knapsack: return Rational(208, 5);
    case VariantKind::fault_tolerant: return Rational(666);
  }
  return Rational(0);
}

ReductionParams params_for(VariantKind v, const BenchOptions& opts) {
  auto p = ReductionParams::preset(v);
  if (opts.eps) p.eps = *opts.eps;
  if (opts.rho) p.rho = *opts.rho;
  const bool shape = opts.delta || opts.tau;
  if (opts.delta) p.delta = *opts.delta;
  if (opts.tau) p.tau = *opts.tau;
  if (opts.lambda) {
    p.lambda = *opts.lambda;
  } else if (shape) {
    if (p.tau <= 1) throw std::invalid_argument("tau must exceed 1");
    if (v == VariantKind::robust) p.lambda = robust_lambda(p.delta, p.tau);
    if (v == VariantKind::knapsack) p.lambda = knapsack_lambda(p.delta, p.tau);
    if (v == VariantKind::matroid) p.lambda = p.sigma();
  }
  p.validate(v);
  return p;
}

FtOptions ft_options_for(const BenchOptions& opts) {
  FtOptions o;
  if (opts.eps) o.eps = *opts.eps;
  if (opts.delta) o.delta = *opts.delta;
  if (o.eps <= 0 || o.delta <= 0) throw std::invalid_argument("eps and delta must be positive");
  o.mode = opts.mode;
  o.cap = opts.cap;
  o.samples = opts.samples;
  o.seed = opts.seed;
  o.budget = opts.budget;
  return o;
}

bool BenchRecord::failed() const {
  return std::any_of(flags.begin(), flags.end(), [](const std::string& f) { return f != "zero-opt"; });
}

BenchRecord bench_one(const std::string& id, const Instance& inst, const BenchOptions& opts) {
  BenchRecord rec;
  rec.instance_id = id;
  rec.variant = inst.kind();
  const auto start = std::chrono::steady_clock::now();
  try {
    if (inst.kind() == VariantKind::fault_tolerant) {
      auto res = solve_ft(inst, ft_options_for(opts));
      rec.opt = res.opt.value_or(solve_exact(inst, opts.budget).value);
      rec.cost = res.evaluation.value;
      rec.mean_cost = res.mean_cost;
      rec.samples = res.samples;
      rec.lp_opt = res.lp.value;
      rec.iters = static_cast<int>(res.plan.decomposition.terms.size());
      rec.frac_count = static_cast<int>(std::count_if(res.lp.y.begin(), res.lp.y.end(),
                                                      [](const Rational& v) { return v > 0 && v < 1; }));
      if (*rec.opt > 0) rec.ratio = to_double(res.mean_cost / *rec.opt);
      if (!res.checks.lp_within_opt) rec.flags.push_back("lp-above-opt");
      if (!res.checks.guess_sanity) rec.flags.push_back("guess-range");
      for (const auto& f : res.checks.bundle_failures) rec.flags.push_back("bundle:" + f);
      if (res.truncated) rec.flags.push_back("truncated");
    } else {
      PipelineOptions po;
      po.params = params_for(inst.kind(), opts);
      po.mode = opts.mode;
      po.cap = opts.cap;
      po.budget = opts.budget;
      auto res = solve_single_assignment(inst, po);
      rec.opt = res.opt.value_or(solve_exact(inst, opts.budget).value);
      rec.cost = res.evaluation.value;
      if (res.best.ext_value) rec.lp_opt = *res.best.ext_value;
      rec.iters = res.best.rounding.iterations;
      rec.frac_count = res.best.rounding.fractional;
      if (*rec.opt > 0) rec.ratio = to_double(res.evaluation.value / *rec.opt);
      if (!res.best.checks.all()) rec.flags.push_back("stage-checks");
      if (!res.best.rounding.violations.empty()) rec.flags.push_back("rounding-properties");
      if (res.truncated) rec.flags.push_back("truncated");
    }
    if (rec.cost && rec.opt && *rec.cost < *rec.opt) rec.flags.push_back("below-opt");
    if (!rec.opt || *rec.opt == 0) {
      rec.flags.push_back("zero-opt");
      const auto& c = rec.variant == VariantKind::fault_tolerant ? rec.mean_cost : rec.cost;
      if (c && *c != 0) rec.flags.push_back("bound-exceeded");
    } else if (rec.ratio && *rec.ratio > to_double(paper_bound(rec.variant))) {
      rec.flags.push_back("bound-exceeded");
    }
  } catch (const std::exception& e) {
    std::string what = e.what();
    std::replace(what.begin(), what.end(), ',', ';');
    rec.flags.push_back("error:" + what);
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<BenchRecord> run_bench(const std::vector<GeneratedInstance>& corpus, const BenchOptions& opts) {
  std::vector<BenchRecord> records(corpus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < corpus.size();)
      records[t] = bench_one(corpus[t].id, corpus[t].inst, opts);
  };
  const int n = std::max(1, std::min<int>(opts.threads, static_cast<int>(corpus.size())));
  std::vector<std::jthread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  return records;
}

const char* const csv_header = "instance_id,variant,opt,cost,ratio,lp_opt,iters,frac_count,samples,mean_cost,wall_ms,flags";

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << csv_header << '\n';
  for (const auto& r : records) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    out << r.instance_id << ',' << to_string(r.variant) << ',' << opt_str(r.opt) << ',' << opt_str(r.cost) << ','
        << (r.ratio ? fixed(*r.ratio) : "") << ',' << opt_str(r.lp_opt) << ',' << r.iters << ',' << r.frac_count << ','
        << r.samples << ',' << opt_str(r.mean_cost) << ',' << fixed(r.wall_ms) << ',' << flags << '\n';
  }
}

std::vector<VariantSummary> summarize(const std::vector<BenchRecord>& records) {
  std::map<VariantKind, VariantSummary> by;
  std::map<VariantKind, int> rated;
  for (const auto& r : records) {
    auto& s = by.try_emplace(r.variant, VariantSummary{r.variant, 0, 0, 0, 0, paper_bound(r.variant)}).first->second;
    ++s.runs;
    if (r.failed()) ++s.failures;
    if (r.ratio) {
      s.max_ratio = std::max(s.max_ratio, *r.ratio);
      s.mean_ratio += *r.ratio;
      ++rated[r.variant];
    }
  }
  std::vector<VariantSummary> out;
  for (auto& [v, s] : by) {
    if (rated[v]) s.mean_ratio /= rated[v];
    out.push_back(s);
  }
  return out;
}

void print_summary(std::ostream& out, const std::vector<VariantSummary>& summary) {
  out << std::left << std::setw(16) << "variant" << std::setw(7) << "runs" << std::setw(10) << "failures"
      << std::setw(12) << "max ratio" << std::setw(12) << "mean ratio" << std::setw(8) << "bound" << "status\n";
  for (const auto& s : summary)
    out << std::setw(16) << to_string(s.variant) << std::setw(7) << s.runs << std::setw(10) << s.failures
        << std::setw(12) << fixed(s.max_ratio) << std::setw(12) << fixed(s.mean_ratio) << std::setw(8)
        << fixed(to_double(s.bound)) << (s.pass() ? "pass" : "FAIL") << '\n';
}

SweepReport invariant_sweep(const Instance& inst, const BenchOptions& opts) {
  SweepReport rep;
  try {
    validate_instance(inst);
    if (inst.kind() == VariantKind::fault_tolerant) {
      auto res = solve_ft(inst, ft_options_for(opts));
      if (!res.checks.lp_within_opt) rep.failures.push_back("fault LP optimum above the oracle optimum");
      if (!res.checks.guess_sanity) rep.failures.push_back("threshold guesses outside their range");
      for (const auto& f : res.checks.bundle_failures) rep.failures.push_back("bundle check: " + f);
    } else {
      PipelineOptions po;
      po.params = params_for(inst.kind(), opts);
      po.mode = opts.mode;
      po.cap = opts.cap;
      po.budget = opts.budget;
      auto res = solve_single_assignment(inst, po);
      const auto& c = res.best.checks;
      if (!c.sparse) rep.failures.push_back("sparse instance conditions");
      if (!c.radius) rep.failures.push_back("radius bound property");
      if (!c.ext_bound) rep.failures.push_back("extended LP value bound");
      if (!c.duplication) rep.failures.push_back("duplication guarantees");
      if (!c.embedding) rep.failures.push_back("auxiliary LP embedding");
      for (const auto& n : c.notes) rep.failures.push_back(n);
      for (const auto& v : res.best.rounding.violations) rep.failures.push_back("rounding: " + v);
    }
  } catch (const std::exception& e) {
    rep.failures.push_back(e.what());
  }
  return rep;
}

}  // namespace ordmed
