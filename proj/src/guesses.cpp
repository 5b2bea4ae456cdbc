#include "ordmed/guesses.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ordmed {

Rational ceil_power(const Rational& base, const Rational& value) {
  if (value == 0) return 0;
  return power(base, ceil_log(base, value));
}

std::vector<Rational> distance_candidates(const Instance& inst) {
  std::set<Rational> s{Rational(0)};
  for (int i = 0; i < inst.n_facilities(); ++i)
    for (int j = 0; j < inst.n_clients(); ++j) s.insert(inst.d(i, j));
  return {s.begin(), s.end()};
}

CostFunction cost_function_of(const GuessBundle& g, const Rational& eps, int m) {
  return CostFunction(g.o1, g.slopes, eps, m);
}

namespace {

GuessBundle single_assignment_guess(const Instance& inst, const ExactOptimum& opt, const Rational& eps) {
  const int m = inst.served_count();
  GuessBundle g;
  auto wt = pad_weights(inst.w, eps);
  auto o = sorted_desc(opt.service);
  g.o1 = o.empty() ? Rational(0) : o.front();
  if (g.o1 == 0) {
    g.slopes = {wt.front()};
    return g;
  }
  const int T = interval_count(eps, m);
  CostFunction grid(g.o1, std::vector<Rational>(T + 2, 1), eps, m);
  std::vector<Rational> sum(T + 2, 0);
  std::vector<int> count(T + 2, 0);
  for (std::size_t i = 0; i < o.size(); ++i) {
    int t = grid.interval_of(o[i]);
    sum[t] += wt[i];
    ++count[t];
  }
  std::vector<Rational> avg(T + 2);
  avg[0] = wt.front();
  for (int t = 1; t <= T + 1; ++t) avg[t] = count[t] ? Rational(sum[t] / count[t]) : avg[t - 1];
  const Rational base = 1 + eps;
  for (const auto& a : avg) {
    Rational s = ceil_power(base, a);
    if (a > 0 && !(s >= a && s < base * a)) throw std::logic_error("slope rounding left its grid cell");
    g.slopes.push_back(s);
  }
  return g;
}

GuessBundle fault_guess(const Instance& inst, const ExactOptimum& opt, const Rational& eps, const Rational& delta) {
  const int n = inst.n_clients();
  GuessBundle g;
  auto sw = sparsify_weights(inst.w, delta);
  g.pos = sw.pos;
  g.w_tilde = sw.w;
  auto xi = sorted_desc(opt.xi);
  g.xi1 = xi.front();
  const Rational floor = eps * g.xi1 / n;
  const Rational base = 1 + eps;
  for (int ell : g.pos) {
    const Rational& x = xi[ell - 1];
    Rational tp = 0;
    if (g.xi1 > 0 && x >= floor) {
      tp = g.xi1 / power(base, floor_log(base, g.xi1 / x));
      if (!(tp >= x && tp < base * x)) throw std::logic_error("threshold guess left its grid cell");
    }
    g.t_prime.push_back(tp);
    g.t.push_back(tp + floor);
  }
  return g;
}

// Calls visit(seq) for every non-increasing sequence of `length` values drawn from `grid`
// (sorted descending) whose first element is at most grid[start].
template <class Visit>
bool non_increasing_sequences(const std::vector<Rational>& grid, int length, std::vector<Rational>& seq,
                              std::size_t start, Visit&& visit) {
  if (length == 0) return visit(seq);
  for (std::size_t k = start; k < grid.size(); ++k) {
    seq.push_back(grid[k]);
    bool keep_going = non_increasing_sequences(grid, length - 1, seq, k, visit);
    seq.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace

GuessBundle correct_guesses(const Instance& inst, const ExactOptimum& opt, const Rational& eps, const Rational& delta) {
  if (eps <= 0 || delta <= 0) throw std::invalid_argument("eps and delta must be positive");
  return inst.kind() == VariantKind::fault_tolerant ? fault_guess(inst, opt, eps, delta)
                                                    : single_assignment_guess(inst, opt, eps);
}

bool enumerate_guesses(const Instance& inst, const Rational& eps, const Rational& delta, long cap,
                       const std::function<void(const GuessBundle&)>& sink) {
  long emitted = 0;
  bool truncated = false;
  auto emit = [&](const GuessBundle& g) {
    if (emitted >= cap) {
      truncated = true;
      return false;
    }
    ++emitted;
    sink(g);
    return true;
  };
  const Rational base = 1 + eps;
  const auto candidates = distance_candidates(inst);

  if (inst.kind() != VariantKind::fault_tolerant) {
    const int m = inst.served_count();
    auto wt = pad_weights(inst.w, eps);
    const int T = interval_count(eps, m);
    std::vector<Rational> grid;
    if (wt.front() > 0) {
      const long hi = ceil_log(base, wt.front()), lo = ceil_log(base, wt.back());
      for (long s = hi; s >= lo; --s) grid.push_back(power(base, s));
    } else {
      grid.push_back(0);
    }
    for (const auto& o1 : candidates) {
      GuessBundle g;
      g.o1 = o1;
      if (o1 == 0) {
        g.slopes = {wt.front()};
        if (!emit(g)) return truncated;
        continue;
      }
      std::vector<Rational> seq{grid.front()};
      bool ok = non_increasing_sequences(grid, T + 1, seq, 0, [&](const std::vector<Rational>& s) {
        g.slopes = s;
        return emit(g);
      });
      if (!ok) return truncated;
    }
    return truncated;
  }

  const int n = inst.n_clients();
  auto sw = sparsify_weights(inst.w, delta);
  for (const auto& xi1 : candidates) {
    GuessBundle g;
    g.xi1 = xi1;
    g.pos = sw.pos;
    g.w_tilde = sw.w;
    const Rational floor = eps * xi1 / n;
    std::vector<Rational> grid;
    if (xi1 > 0)
      for (Rational v = xi1; v >= floor; v /= base) grid.push_back(v);
    grid.push_back(0);
    std::vector<Rational> seq{xi1};
    bool ok = non_increasing_sequences(grid, static_cast<int>(sw.pos.size()) - 1, seq, 0,
                                       [&](const std::vector<Rational>& s) {
                                         g.t_prime = s;
                                         g.t.clear();
                                         for (const auto& v : s) g.t.push_back(v + floor);
                                         return emit(g);
                                       });
    if (!ok) return truncated;
  }
  return truncated;
}

GuessStream collect_guesses(const Instance& inst, const Rational& eps, const Rational& delta, long cap) {
  GuessStream out;
  out.truncated = enumerate_guesses(inst, eps, delta, cap, [&](const GuessBundle& g) { out.bundles.push_back(g); });
  return out;
}

}  // namespace ordmed
