#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ordmed/bench.hpp"
#include "ordmed/fault_pipeline.hpp"
#include "ordmed/instance_io.hpp"
#include "ordmed/oracle.hpp"
#include "ordmed/robust_pipeline.hpp"

namespace fs = std::filesystem;
using namespace ordmed;

namespace {

struct Flags {
  std::string variant = "robust";
  std::string mode = "oracle";
  long cap = 100000;
  int samples = 200;
  std::uint64_t seed = 1;
  std::string eps, delta, rho, tau, lambda;
  std::string out, trace;
  int threads = 1;
};

std::optional<Rational> maybe_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_rational(s);
}

BenchOptions bench_options(const Flags& f) {
  BenchOptions o;
  o.eps = maybe_rational(f.eps);
  o.delta = maybe_rational(f.delta);
  o.rho = maybe_rational(f.rho);
  o.tau = maybe_rational(f.tau);
  o.lambda = maybe_rational(f.lambda);
  o.mode = parse_solve_mode(f.mode);
  o.cap = f.cap;
  o.samples = f.samples;
  o.seed = f.seed;
  o.threads = f.threads;
  return o;
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::vector<fs::path> expand(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.path().extension() == ".json") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  return files;
}

Json exact_to_json(const Instance& inst, const ExactOptimum& opt) {
  Json j;
  j["value"] = rational_to_json(opt.value);
  j["open"] = Json::array();
  for (int i : opt.open) j["open"].push_back(inst.facility_ids[i]);
  j["served"] = Json::array();
  for (std::size_t t = 0; t < opt.served.size(); ++t)
    j["served"].push_back({{"client", inst.client_ids[opt.served[t]]}, {"cost", rational_to_json(opt.service[t])}});
  if (!opt.xi.empty()) {
    j["connection_distances"] = Json::array();
    for (const auto& x : opt.xi) j["connection_distances"].push_back(rational_to_json(x));
  }
  return j;
}

int cmd_gen(const Flags& f, const GenSpec& base) {
  GenSpec spec = base;
  spec.variant = parse_variant_kind(f.variant);
  const fs::path dir = f.out.empty() ? fs::path(".") : fs::path(f.out);
  fs::create_directories(dir);
  auto corpus = gen_instances(spec, f.seed);
  for (const auto& g : corpus) save_instance(g.inst, dir / (g.id + ".json"));
  std::cout << "wrote " << corpus.size() << " instances to " << dir.string() << '\n';
  return 0;
}

int cmd_solve(const Flags& f, const std::string& path) {
  const auto inst = load_instance(path);
  const auto opts = bench_options(f);
  Json trace;
  Solution sol;
  Rational cost;
  if (inst.kind() == VariantKind::fault_tolerant) {
    auto res = solve_ft(inst, ft_options_for(opts));
    sol = res.solution;
    cost = res.evaluation.value;
    trace = res.stats_json();
    std::cout << "cost " << to_string(cost) << "  mean " << to_string(res.mean_cost) << " over " << res.samples
              << " samples\n";
  } else {
    PipelineOptions po;
    po.params = params_for(inst.kind(), opts);
    po.mode = opts.mode;
    po.cap = opts.cap;
    auto res = solve_single_assignment(inst, po);
    sol = res.solution;
    cost = res.evaluation.value;
    trace = res.trace_json();
    std::cout << "cost " << to_string(cost) << "  candidates " << res.candidates
              << (res.truncated ? "  (truncated)" : "") << '\n';
  }
  if (!f.out.empty()) write_json(solution_to_json(inst, sol), f.out);
  if (!f.trace.empty()) write_json(trace, f.trace);
  return 0;
}

int cmd_oracle(const Flags& f, const std::string& path) {
  const auto inst = load_instance(path);
  auto opt = solve_exact(inst);
  std::cout << "opt " << to_string(opt.value) << '\n';
  if (!f.out.empty()) write_json(exact_to_json(inst, opt), f.out);
  return 0;
}

int cmd_bench(const Flags& f, const std::vector<std::string>& inputs) {
  std::vector<GeneratedInstance> corpus;
  for (const auto& p : expand(inputs)) corpus.push_back({p.stem().string(), load_instance(p)});
  auto records = run_bench(corpus, bench_options(f));
  if (!f.out.empty()) {
    std::ofstream out(f.out);
    if (!out) throw std::runtime_error("cannot write " + f.out);
    write_csv(out, records);
  }
  auto summary = summarize(records);
  print_summary(std::cout, summary);
  return std::all_of(summary.begin(), summary.end(), [](const auto& s) { return s.pass(); }) ? 0 : 1;
}

int cmd_check(const Flags& f, const std::vector<std::string>& inputs) {
  int bad = 0;
  const auto opts = bench_options(f);
  for (const auto& p : expand(inputs)) {
    SweepReport rep;
    try {
      rep = invariant_sweep(load_instance(p), opts);
    } catch (const std::exception& e) {
      rep.failures.push_back(e.what());
    }
    std::cout << p.string() << ": " << (rep.ok() ? "ok" : "FAILED") << '\n';
    for (const auto& msg : rep.failures) std::cout << "  " << msg << '\n';
    bad += !rep.ok();
  }
  return bad ? 1 : 0;
}

void common_flags(CLI::App* app, Flags& f) {
  app->add_option("--mode", f.mode, "oracle or enumerate")->check(CLI::IsMember({"oracle", "enumerate"}));
  app->add_option("--cap", f.cap, "candidate cap in enumerate mode");
  app->add_option("--samples", f.samples, "roundings drawn per fault-tolerant run");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--eps", f.eps, "guess grid ratio, rational");
  app->add_option("--delta", f.delta, "rational");
  app->add_option("--rho", f.rho, "sparsity threshold, rational");
  app->add_option("--tau", f.tau, "distance grid base, rational");
  app->add_option("--lambda", f.lambda, "reduction scale, rational");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordered k-median approximation pipelines with an exact oracle"};
  app.require_subcommand(1);
  Flags f;
  GenSpec gen;
  std::string instance;
  std::vector<std::string> inputs;

  auto* g = app.add_subcommand("gen", "generate a random instance corpus");
  g->add_option("--variant", f.variant, "robust, matroid, knapsack or fault_tolerant");
  g->add_option("--count", gen.count);
  g->add_option("--facilities", gen.n_facilities);
  g->add_option("--clients", gen.n_clients);
  g->add_option("--grid", gen.grid);
  g->add_option("--max-k", gen.max_k);
  g->add_option("--max-r", gen.max_r);
  g->add_flag("--top-ell", gen.top_ell, "fault-tolerant weights of ones then zeros");
  g->add_flag("--vary", gen.vary_sizes, "draw sizes up to the given maxima");
  g->add_option("--seed", f.seed);
  g->add_option("--out", f.out, "output directory");

  auto* s = app.add_subcommand("solve", "run the approximation pipeline on one instance");
  s->add_option("instance", instance)->required();
  common_flags(s, f);
  s->add_option("--out", f.out, "solution JSON path");
  s->add_option("--trace", f.trace, "trace JSON path");

  auto* o = app.add_subcommand("oracle", "brute-force optimum of one instance");
  o->add_option("instance", instance)->required();
  o->add_option("--out", f.out, "optimum JSON path");

  auto* b = app.add_subcommand("bench", "oracle and pipeline over a corpus");
  b->add_option("inputs", inputs, "instance files or directories")->required();
  common_flags(b, f);
  b->add_option("--threads", f.threads);
  b->add_option("--out", f.out, "CSV path");

  auto* c = app.add_subcommand("check", "invariant sweep without ratio bounds");
  c->add_option("inputs", inputs, "instance files or directories")->required();
  common_flags(c, f);

  CLI11_PARSE(app, argc, argv);
  try {
    if (g->parsed()) return cmd_gen(f, gen);
    if (s->parsed()) return cmd_solve(f, instance);
    if (o->parsed()) return cmd_oracle(f, instance);
    if (b->parsed()) return cmd_bench(f, inputs);
    if (c->parsed()) return cmd_check(f, inputs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
