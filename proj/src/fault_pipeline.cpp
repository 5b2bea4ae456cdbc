#include "ordmed/fault_pipeline.hpp"

#include <algorithm>

#include "ordmed/ordered.hpp"

namespace ordmed {

namespace {

const Rational client_bound_avg{3};
const Rational client_bound_threshold{2178, 5};
const Rational client_bound_tail{2267, 10};

// Counts (client, rank) pairs whose sampled mean exceeds the per-client bound at that rank's threshold.
int client_bound_flags(const Instance& inst, const RoundingPlan& plan, const std::vector<RankRow>& ranks,
                 const std::vector<Rational>& mean_client_cost) {
  const auto& ft = plan.ft;
  int flags = 0;
  for (int j = 0; j < inst.n_clients(); ++j)
    for (const auto& row : ranks) {
      Rational tail = 0;
      for (int c : ft.ball[j]) tail += ft.y[c] * truncated_distance(ft.dist(inst, c, j), row.threshold);
      const Rational bound = client_bound_avg * ft.r[j] * ft.d_av[j] + client_bound_threshold * row.threshold + client_bound_tail * tail;
      if (mean_client_cost[j] > bound) ++flags;
    }
  return flags;
}

bool guess_is_sane(const Instance& inst, const ExactOptimum& opt, const GuessBundle& g, const Rational& eps) {
  auto xi = sorted_desc(opt.xi);
  if (xi.empty() || xi.front() == 0) return true;
  const Rational floor = eps * xi.front() / inst.n_clients();
  for (std::size_t q = 0; q < g.pos.size(); ++q) {
    const Rational& x = xi[g.pos[q] - 1];
    const Rational upper = (1 + eps) * x + floor;
    if (!(x < g.t[q])) return false;
    // At x = 0 the shifted threshold sits exactly on the upper end.
    if (!(g.t[q] < upper || (x == 0 && g.t[q] == upper))) return false;
  }
  return true;
}

std::vector<int> all_clients(const Instance& inst) {
  std::vector<int> c(inst.n_clients());
  for (int j = 0; j < inst.n_clients(); ++j) c[j] = j;
  return c;
}

}  // namespace

FtResult round_ft_solution(const Instance& inst, const FtLpSolution& lp, std::vector<RankRow> ranks,
                           const FtOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("at least one sample is required");
  FtResult out;
  out.lp = lp;
  out.ranks = std::move(ranks);
  out.plan = prepare_rounding(inst, lp.y);
  out.checks.bundle_failures = out.plan.bundle_failures;
  std::vector<Rational> client_sum(inst.n_clients());
  Rational total = 0;
  for (int s = 0; s < opts.samples; ++s) {
    auto rng = sample_rng(opts.seed, static_cast<std::uint64_t>(s));
    auto sample = stochastic_round(inst, out.plan, rng);
    auto sol = make_solution(inst, sample.open, all_clients(inst));
    auto ev = evaluate_solution(inst, sol);
    for (int j = 0; j < inst.n_clients(); ++j) client_sum[j] += ev.costs[j];
    total += ev.value;
    if (s == 0 || ev.value < out.evaluation.value) {
      out.solution = std::move(sol);
      out.evaluation = ev;
    }
    if (s == 0 || ev.value < out.min_cost) out.min_cost = ev.value;
    if (s == 0 || ev.value > out.max_cost) out.max_cost = ev.value;
  }
  out.samples = opts.samples;
  out.mean_cost = total / opts.samples;
  for (auto& v : client_sum) v /= opts.samples;
  out.checks.client_bound_flags = client_bound_flags(inst, out.plan, out.ranks, client_sum);
  if (opts.marginal_samples > 0)
    out.checks.marginals = marginal_test(inst, out.plan, opts.marginal_samples, opts.seed ^ 0x9e3779b97f4a7c15ULL);
  return out;
}

GuessBundle ft_guess(const Instance& inst, const ExactOptimum& opt, const FtOptions& opts) {
  if (auto ell = top_ell_length(inst.w)) {
    GuessBundle g;
    auto xi = sorted_desc(opt.xi);
    g.xi1 = xi.front();
    g.pos = {*ell};
    g.t_prime = {xi[*ell - 1]};
    g.t = g.t_prime;
    g.w_tilde = inst.w;
    return g;
  }
  return correct_guesses(inst, opt, opts.eps, opts.delta);
}

FtLp ft_program(const Instance& inst, const GuessBundle& guess) {
  if (auto ell = top_ell_length(inst.w)) return build_top_lp(inst, *ell, guess.t.front());
  return build_ft_lp(inst, guess);
}

FtResult solve_ft(const Instance& inst, const FtOptions& opts) {
  if (inst.kind() != VariantKind::fault_tolerant) throw std::invalid_argument("solve_ft needs a fault-tolerant instance");
  validate_instance(inst);
  const auto& spec = inst.fault();
  if (spec.k < *std::max_element(spec.r.begin(), spec.r.end())) throw InvalidInstance("k is below the largest demand");
  if (opts.eps <= 0 || opts.delta <= 0) throw std::invalid_argument("eps and delta must be positive");
  const bool top = top_ell_length(inst.w).has_value();

  if (opts.mode == SolveMode::oracle) {
    auto opt = solve_exact(inst, opts.budget);
    auto guess = ft_guess(inst, opt, opts);
    auto program = ft_program(inst, guess);
    auto lp = solve_ft_lp(program);
    if (!lp) throw std::logic_error("fault LP infeasible under the correct guesses");
    auto out = round_ft_solution(inst, *lp, program.ranks, opts);
    out.opt = opt.value;
    out.top_ell = top;
    out.guess = guess;
    out.checks.lp_within_opt = lp->value <= opt.value;
    if (!top) out.checks.guess_sanity = guess_is_sane(inst, opt, guess, opts.eps);
    out.candidates = 1;
    return out;
  }

  std::vector<GuessBundle> guesses;
  bool truncated = false;
  if (auto ell = top_ell_length(inst.w)) {
    for (const auto& T : distance_candidates(inst)) {
      if (static_cast<long>(guesses.size()) >= opts.cap) {
        truncated = true;
        break;
      }
      GuessBundle g;
      g.pos = {*ell};
      g.t_prime = {T};
      g.t = {T};
      g.w_tilde = inst.w;
      guesses.push_back(std::move(g));
    }
  } else {
    auto stream = collect_guesses(inst, opts.eps, opts.delta, opts.cap);
    guesses = std::move(stream.bundles);
    truncated = stream.truncated;
  }

  std::optional<FtResult> best;
  long candidates = 0;
  for (const auto& g : guesses) {
    auto program = ft_program(inst, g);
    auto lp = solve_ft_lp(program);
    ++candidates;
    if (!lp) continue;
    auto out = round_ft_solution(inst, *lp, program.ranks, opts);
    out.guess = g;
    out.top_ell = top;
    if (!best || out.mean_cost < best->mean_cost) best = std::move(out);
  }
  if (!best) throw std::runtime_error(truncated ? "enumeration truncated before any feasible candidate"
                                                : "no feasible candidate");
  best->candidates = candidates;
  best->truncated = truncated;
  return std::move(*best);
}

Json FtResult::stats_json() const {
  Json j;
  j["top_ell"] = top_ell;
  j["lp_opt"] = rational_to_json(lp.value);
  j["ranks"] = Json::array();
  for (std::size_t q = 0; q < ranks.size(); ++q)
    j["ranks"].push_back({{"ell", ranks[q].ell},
                          {"threshold", rational_to_json(ranks[q].threshold)},
                          {"weight", rational_to_json(ranks[q].weight)},
                          {"R", rational_to_json(lp.R[q])}});
  j["generation_rounds"] = lp.rounds;
  j["copies"] = plan.ft.n_copies();
  j["bundles"] = plan.bundles.bundles.size();
  j["dangerous"] = plan.filter.dangerous;
  j["laminar"] = plan.laminar.clients;
  j["decomposition_terms"] = plan.decomposition.terms.size();
  j["samples"] = samples;
  j["mean_cost"] = rational_to_json(mean_cost);
  j["min_cost"] = rational_to_json(min_cost);
  j["max_cost"] = rational_to_json(max_cost);
  j["open"] = solution.open;
  j["cost"] = rational_to_json(evaluation.value);
  if (opt) {
    j["opt"] = rational_to_json(*opt);
    if (*opt > 0) j["mean_ratio"] = to_double(mean_cost / *opt);
  }
  j["checks"] = {{"lp_within_opt", checks.lp_within_opt},
                 {"guess_sanity", checks.guess_sanity},
                 {"bundle_failures", checks.bundle_failures},
                 {"client_bound_flags", checks.client_bound_flags}};
  if (checks.marginals)
    j["marginals"] = {{"samples", checks.marginals->samples},
                      {"max_copy_z", checks.marginals->max_copy_z},
                      {"max_ball_z", checks.marginals->max_ball_z}};
  j["candidates"] = candidates;
  j["truncated"] = truncated;
  return j;
}

}  // namespace ordmed
