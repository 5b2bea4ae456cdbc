#include "ordmed/robust_pipeline.hpp"

#include <algorithm>
#include <numeric>

namespace ordmed {

std::string to_string(SolveMode m) { return m == SolveMode::oracle ? "oracle" : "enumerate"; }

SolveMode parse_solve_mode(std::string_view s) {
  if (s == "oracle") return SolveMode::oracle;
  if (s == "enumerate") return SolveMode::enumerate;
  throw std::invalid_argument("unknown mode: " + std::string(s));
}

CostFunction faithful_function(const Instance& inst, const ExactOptimum& opt, const Rational& eps) {
  return cost_function_of(correct_guesses(inst, opt, eps, Rational(1)), eps, inst.served_count());
}

namespace {

Rational served_surrogate(const Instance& inst, const CostFunction& f, const std::vector<int>& open) {
  std::vector<Rational> costs;
  for (int j = 0; j < inst.n_clients(); ++j) costs.push_back(f(nearest_open(inst, open, inst.metric.client_point(j)).second));
  std::sort(costs.begin(), costs.end());
  return std::accumulate(costs.begin(), costs.begin() + inst.served_count(), Rational(0));
}

void validate_entry(const Instance& inst, const PipelineOptions& opts, VariantKind expected) {
  if (inst.kind() != expected) throw std::invalid_argument("pipeline called on a " + to_string(inst.kind()) + " instance");
  validate_instance(inst);
  if (auto bad = validate_metric(inst.metric, true))
    throw InvalidInstance("instance violates the unit separation rule: " + bad->message);
  opts.params.validate(expected);
}

SparseInstance full_sparse(const Instance& inst, const Rational& U) {
  SparseInstance sp;
  sp.clients.resize(inst.n_clients());
  std::iota(sp.clients.begin(), sp.clients.end(), 0);
  sp.m_prime = inst.n_clients();
  sp.U = U;
  sp.U_prime = U;
  return sp;
}

std::vector<Rational> radius_for(const Instance& inst, const SparseInstance& sp, const CostFunction& f,
                                 const ReductionParams& params, StageChecks* checks) {
  switch (inst.kind()) {
    case VariantKind::robust: {
      auto r_hat = compute_radius_bounds(inst, sp, f, params);
      if (checks && !check_radius_bounds(inst, sp, f, params, r_hat)) checks->radius = false;
      const Rational grow = 1 + 3 * params.delta / 4;
      for (auto& r : r_hat) r *= grow;
      return r_hat;
    }
    case VariantKind::knapsack: return knapsack_radii(inst, sp, f, params);
    default: return {};
  }
}

struct CandidateOutcome {
  Solution solution;
  Evaluation evaluation;
  CandidateTrace trace;
};

// Runs ExtLP through completion. Returns nullopt when ExtLP is infeasible.
std::optional<CandidateOutcome> run_candidate(const Instance& inst, const CostFunction& f, const GuessBundle& guess,
                                              const SparseInstance& sp, const std::vector<Rational>& radius,
                                              const ReductionParams& params, const Rational& bound_base,
                                              StageChecks checks) {
  CandidateOutcome out;
  auto& tr = out.trace;
  tr.guess = guess;
  tr.U = sp.U;
  tr.sparse = sp;

  auto ext = build_ext_lp(inst, sp, radius, f, params);
  auto res = solve_ext_lp(ext);
  if (res.status == LpStatus::unbounded) throw std::logic_error("ExtLP unbounded");
  if (!res.optimal()) return std::nullopt;
  const auto& values = res.solution.values;
  const Rational ext_value = res.solution.objective_value;
  tr.ext_value = ext_value;
  const Rational l1 = params.lambda1();
  const Rational bound = inst.kind() == VariantKind::robust ? Rational(l1 * (2 + params.delta) / 2 * bound_base)
                                                            : Rational(l1 * bound_base);
  if (ext_value > bound) {
    checks.ext_bound = false;
    checks.notes.push_back("ExtLP value " + to_string(ext_value) + " above " + to_string(bound));
  }

  auto cs = duplicate_and_balance(inst, sp, ext, values, f, params);
  auto bad = check_duplication(inst, sp, cs, f, params, ext_value, inst.kind() != VariantKind::matroid);
  if (!bad.empty()) {
    checks.duplication = false;
    for (auto& b : bad) checks.notes.push_back(b);
  }

  auto st = initial_state(inst, sp, cs, radius, params.tau);
  const Rational start = aux_objective(inst, st, f, params, cs.y);
  tr.aux_start = start;
  if (start > ext_value) checks.embedding = false;

  auto rounded = iterative_round(inst, st, f, params, sp.m_prime, sp.U);
  if (rounded.trace.objectives.front() > start) checks.embedding = false;
  tr.rounding = rounded.trace;
  auto open = fix_fractional(inst, rounded);
  out.solution = complete_solution(inst, rounded.state, open, sp);
  out.evaluation = evaluate_solution(inst, out.solution);
  tr.open = out.solution.open;
  tr.cost = out.evaluation.value;
  tr.checks = std::move(checks);
  return out;
}

struct Best {
  std::optional<CandidateOutcome> outcome;
  long candidates = 0, rejected = 0;

  void offer(CandidateOutcome c) {
    if (!outcome || c.evaluation.value < outcome->evaluation.value) outcome = std::move(c);
  }
};

CandidateOutcome short_circuit(const Instance& inst, const GuessBundle& guess, std::vector<int> open,
                               std::vector<int> served) {
  CandidateOutcome out;
  out.solution = make_solution(inst, std::move(open), std::move(served));
  out.evaluation = evaluate_solution(inst, out.solution);
  out.trace.guess = guess;
  out.trace.short_circuit = true;
  out.trace.open = out.solution.open;
  out.trace.cost = out.evaluation.value;
  return out;
}

std::vector<int> served_by(const Instance& inst, const std::vector<int>& open) {
  std::vector<std::pair<Rational, int>> keyed;
  for (int j = 0; j < inst.n_clients(); ++j)
    keyed.push_back({nearest_open(inst, open, inst.metric.client_point(j)).second, j});
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> served;
  for (int t = 0; t < inst.served_count(); ++t) served.push_back(keyed[t].second);
  std::sort(served.begin(), served.end());
  return served;
}

PipelineResult finish(Best best, std::optional<Rational> opt, bool truncated) {
  if (!best.outcome) {
    if (truncated) throw std::runtime_error("enumeration truncated before any feasible candidate");
    throw std::runtime_error("no feasible candidate");
  }
  PipelineResult r;
  r.solution = std::move(best.outcome->solution);
  r.evaluation = std::move(best.outcome->evaluation);
  r.best = std::move(best.outcome->trace);
  r.opt = std::move(opt);
  r.candidates = best.candidates;
  r.rejected = best.rejected;
  r.truncated = truncated;
  return r;
}

PipelineResult solve_oracle(const Instance& inst, const PipelineOptions& opts) {
  const auto& params = opts.params;
  auto opt = solve_exact(inst, opts.budget);
  auto guess = correct_guesses(inst, opt, params.eps, params.delta);
  auto f = cost_function_of(guess, params.eps, inst.served_count());
  auto reduced = reduced_instance_solve(inst, f, 1, opts.budget);
  Best best;
  best.candidates = 1;
  if (f.degenerate() || reduced.value == 0) {
    best.offer(short_circuit(inst, guess, reduced.open, reduced.served));
    return finish(std::move(best), opt.value, false);
  }

  StageChecks checks;
  SparseInstance sp;
  std::vector<Rational> radius;
  Rational bound_base;
  if (inst.kind() == VariantKind::matroid) {
    sp = full_sparse(inst, reduced.value);
    bound_base = reduced.value;
  } else {
    const Rational U = ceil_power(1 + params.eps, reduced.value);
    auto star = make_star(inst, reduced);
    sp = build_sparse_instance(inst, f, U, params, star);
    auto cond = check_sparse_conditions(inst, f, sp, params, star);
    if (!cond.all()) checks.sparse = false;
    radius = radius_for(inst, sp, f, params, &checks);
    bound_base = sp.U_prime;
  }
  auto outcome = run_candidate(inst, f, guess, sp, radius, params, bound_base, std::move(checks));
  if (!outcome) throw std::logic_error("ExtLP infeasible under the correct guesses");
  best.offer(std::move(*outcome));
  return finish(std::move(best), opt.value, false);
}

PipelineResult solve_enumerate(const Instance& inst, const PipelineOptions& opts) {
  const auto& params = opts.params;
  const Rational base = 1 + params.eps;
  Best best;
  bool truncated = false;
  auto guesses = collect_guesses(inst, params.eps, params.delta, opts.cap);
  truncated = guesses.truncated;

  auto attempt = [&](const CostFunction& f, const GuessBundle& g, const SparseInstance& sp,
                     const std::vector<Rational>& radius) {
    if (best.candidates >= opts.cap) {
      truncated = true;
      return false;
    }
    ++best.candidates;
    try {
      auto outcome = run_candidate(inst, f, g, sp, radius, params, sp.U_prime, StageChecks{});
      if (outcome)
        best.offer(std::move(*outcome));
      else
        ++best.rejected;
    } catch (const RoundingPremiseError&) {
      ++best.rejected;
    }
    return true;
  };

  for (const auto& g : guesses.bundles) {
    if (truncated) break;
    auto f = cost_function_of(g, params.eps, inst.served_count());
    if (f.degenerate()) {
      auto [open, value] = greedy_surrogate(inst, f);
      ++best.candidates;
      best.offer(short_circuit(inst, g, open, served_by(inst, open)));
      continue;
    }
    if (inst.kind() == VariantKind::matroid) {
      auto sp = full_sparse(inst, 0);
      attempt(f, g, sp, {});
      continue;
    }
    // U ranges over powers of (1+eps) between a lower bound and (1+eps) times a feasible value.
    std::vector<Rational> nearest;
    Rational min_positive = -1;
    for (int j = 0; j < inst.n_clients(); ++j) {
      Rational d = inst.d(0, j);
      for (int i = 0; i < inst.n_facilities(); ++i) {
        d = std::min(d, inst.d(i, j));
        if (inst.d(i, j) > 0 && (min_positive < 0 || inst.d(i, j) < min_positive)) min_positive = inst.d(i, j);
      }
      nearest.push_back(f(d));
    }
    std::sort(nearest.begin(), nearest.end());
    Rational lower = std::accumulate(nearest.begin(), nearest.begin() + inst.served_count(), Rational(0));
    if (min_positive > 0) lower = std::max(lower, f(min_positive));
    auto [greedy_open, upper] = greedy_surrogate(inst, f);
    if (lower <= 0) continue;
    for (long s = ceil_log(base, lower);; ++s) {
      const Rational U = power(base, s);
      if (U >= base * upper || truncated) break;
      bool cut = enumerate_sparse_instances(inst, U, params, opts.cap, [&](const SparseInstance& sp) {
        SparseInstance cand = sp;
        auto radius = radius_for(inst, cand, f, params, nullptr);
        return attempt(f, g, cand, radius);
      });
      truncated = truncated || cut;
    }
  }
  return finish(std::move(best), std::nullopt, truncated);
}

PipelineResult solve_any(const Instance& inst, const PipelineOptions& opts, VariantKind kind) {
  validate_entry(inst, opts, kind);
  return opts.mode == SolveMode::oracle ? solve_oracle(inst, opts) : solve_enumerate(inst, opts);
}

}  // namespace

std::pair<std::vector<int>, Rational> greedy_surrogate(const Instance& inst, const CostFunction& f) {
  std::vector<int> open;
  std::optional<Rational> current;
  for (;;) {
    int pick = -1;
    Rational pick_cost;
    for (int i = 0; i < inst.n_facilities(); ++i) {
      if (std::find(open.begin(), open.end(), i) != open.end()) continue;
      auto trial = open;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), i), i);
      if (!inst.feasible_open_set(trial)) continue;
      Rational c = served_surrogate(inst, f, trial);
      if (pick < 0 || c < pick_cost) {
        pick = i;
        pick_cost = c;
      }
    }
    if (pick < 0 || (current && pick_cost >= *current)) break;
    open.insert(std::lower_bound(open.begin(), open.end(), pick), pick);
    current = pick_cost;
  }
  if (open.empty()) throw std::runtime_error("no feasible single facility");
  return {open, *current};
}

PipelineResult solve_robust(const Instance& inst, const PipelineOptions& opts) {
  return solve_any(inst, opts, VariantKind::robust);
}

PipelineResult solve_matroid(const Instance& inst, const PipelineOptions& opts) {
  return solve_any(inst, opts, VariantKind::matroid);
}

PipelineResult solve_knapsack(const Instance& inst, const PipelineOptions& opts) {
  return solve_any(inst, opts, VariantKind::knapsack);
}

PipelineResult solve_single_assignment(const Instance& inst, const PipelineOptions& opts) {
  switch (inst.kind()) {
    case VariantKind::robust: return solve_robust(inst, opts);
    case VariantKind::matroid: return solve_matroid(inst, opts);
    case VariantKind::knapsack: return solve_knapsack(inst, opts);
    case VariantKind::fault_tolerant: break;
  }
  throw std::invalid_argument("fault-tolerant instances use the fault pipeline");
}

Json PipelineResult::trace_json() const {
  Json j;
  const auto& g = best.guess;
  j["guess"] = {{"o1", rational_to_json(g.o1)}, {"slopes", Json::array()}};
  for (const auto& s : g.slopes) j["guess"]["slopes"].push_back(rational_to_json(s));
  j["short_circuit"] = best.short_circuit;
  if (!best.short_circuit) {
    j["U"] = rational_to_json(best.U);
    j["U_prime"] = rational_to_json(best.sparse.U_prime);
    j["S0"] = best.sparse.s0;
    j["clients"] = best.sparse.clients;
    j["m_prime"] = best.sparse.m_prime;
    if (best.ext_value) j["ext_lp"] = rational_to_json(*best.ext_value);
    if (best.aux_start) j["aux_start"] = rational_to_json(*best.aux_start);
    j["aux_objectives"] = Json::array();
    for (const auto& v : best.rounding.objectives) j["aux_objectives"].push_back(rational_to_json(v));
    j["iterations"] = best.rounding.iterations;
    j["fractional"] = best.rounding.fractional;
    j["property_checks"] = best.rounding.property_checks;
    j["checks"] = {{"sparse", best.checks.sparse},
                   {"radius", best.checks.radius},
                   {"ext_bound", best.checks.ext_bound},
                   {"duplication", best.checks.duplication},
                   {"embedding", best.checks.embedding},
                   {"notes", best.checks.notes}};
  }
  j["open"] = solution.open;
  j["served"] = solution.served;
  j["cost"] = rational_to_json(evaluation.value);
  if (opt) {
    j["opt"] = rational_to_json(*opt);
    if (*opt > 0) j["ratio"] = to_double(evaluation.value / *opt);
  }
  j["candidates"] = candidates;
  j["rejected"] = rejected;
  j["truncated"] = truncated;
  return j;
}

}  // namespace ordmed
