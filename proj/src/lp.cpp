#include "ordmed/lp.hpp"

#include <algorithm>
#include <ostream>

namespace ordmed {

int LinearProgram::add_variable(std::string name, std::optional<Rational> lo, std::optional<Rational> hi) {
  if (lo && hi && *lo > *hi) throw std::invalid_argument("variable " + name + " has lo > hi");
  vars_.push_back({std::move(name), std::move(lo), std::move(hi)});
  return n_vars() - 1;
}

int LinearProgram::add_constraint(Constraint c) {
  for (const auto& t : c.terms)
    if (t.var < 0 || t.var >= n_vars()) throw std::invalid_argument("constraint references an undeclared variable");
  cons_.push_back(std::move(c));
  return n_constraints() - 1;
}

void LinearProgram::set_objective(std::vector<Term> terms, Sense sense, Rational constant) {
  for (const auto& t : terms)
    if (t.var < 0 || t.var >= n_vars()) throw std::invalid_argument("objective references an undeclared variable");
  obj_ = std::move(terms);
  sense_ = sense;
  constant_ = std::move(constant);
}

void LinearProgram::set_bounds(int var, std::optional<Rational> lo, std::optional<Rational> hi) {
  if (lo && hi && *lo > *hi) throw std::invalid_argument("set_bounds: lo > hi");
  vars_.at(var).lo = std::move(lo);
  vars_.at(var).hi = std::move(hi);
}

Rational activity(const Constraint& c, std::span<const Rational> values) {
  Rational s = 0;
  for (const auto& t : c.terms) s += t.coef * values[t.var];
  return s;
}

Rational LinearProgram::objective_value(std::span<const Rational> values) const {
  Rational s = constant_;
  for (const auto& t : obj_) s += t.coef * values[t.var];
  return s;
}

bool LinearProgram::satisfies(const Constraint& c, std::span<const Rational> values) const {
  Rational a = activity(c, values);
  switch (c.rel) {
    case Relation::le: return a <= c.rhs;
    case Relation::ge: return a >= c.rhs;
    case Relation::eq: return a == c.rhs;
  }
  return false;
}

bool LinearProgram::is_tight(const Constraint& c, std::span<const Rational> values) const {
  return activity(c, values) == c.rhs;
}

bool LinearProgram::satisfies(std::span<const Rational> values) const {
  if (static_cast<int>(values.size()) != n_vars()) return false;
  for (int v = 0; v < n_vars(); ++v) {
    if (vars_[v].lo && values[v] < *vars_[v].lo) return false;
    if (vars_[v].hi && values[v] > *vars_[v].hi) return false;
  }
  for (const auto& c : cons_)
    if (!satisfies(c, values)) return false;
  return true;
}

void LinearProgram::dump(std::ostream& out) const {
  auto term_list = [&](const std::vector<Term>& ts) {
    if (ts.empty()) {
      out << '0';
      return;
    }
    for (std::size_t k = 0; k < ts.size(); ++k) {
      if (k) out << " + ";
      out << to_string(ts[k].coef) << ' ' << vars_[ts[k].var].name;
    }
  };
  out << (sense_ == Sense::minimize ? "min: " : "max: ");
  term_list(obj_);
  if (constant_ != 0) out << " + " << to_string(constant_);
  out << '\n';
  for (const auto& c : cons_) {
    out << (c.name.empty() ? "c" : c.name) << ": ";
    term_list(c.terms);
    out << (c.rel == Relation::le ? " <= " : c.rel == Relation::ge ? " >= " : " = ") << to_string(c.rhs) << '\n';
  }
  for (const auto& v : vars_)
    out << "bound: " << (v.lo ? to_string(*v.lo) : "-inf") << " <= " << v.name << " <= "
        << (v.hi ? to_string(*v.hi) : "inf") << '\n';
}

namespace {

// Structural variable x = offset + sign * col (minus col2 for free variables).
struct ColumnMap {
  int col = -1;
  int col2 = -1;
  Rational offset = 0;
  int sign = 1;
};

class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : lp_(lp) { build(); }

  LpResult run() {
    LpResult res;
    if (!infeasible_rows_.empty()) return res;

    std::vector<Rational> phase1(n_cols_, 0);
    for (int c = first_artificial_; c < n_cols_; ++c) phase1[c] = 1;
    if (first_artificial_ < n_cols_) {
      if (optimize(phase1, true) != LpStatus::optimal) throw std::logic_error("phase one cannot be unbounded");
      for (int i = 0; i < m_; ++i)
        if (basis_[i] >= first_artificial_ && xb_[i] != 0) return res;
      for (int c = first_artificial_; c < n_cols_; ++c) upper_[c] = Rational(0);
    }

    std::vector<Rational> cost(n_cols_, 0);
    const bool flip = lp_.sense() == Sense::maximize;
    for (const auto& t : lp_.objective()) {
      const auto& cm = map_[t.var];
      if (cm.col < 0) continue;
      Rational c = flip ? Rational(-t.coef) : t.coef;
      cost[cm.col] += cm.sign * c;
      if (cm.col2 >= 0) cost[cm.col2] -= c;
    }
    res.status = optimize(cost, false);
    res.pivots = pivots_;
    if (res.status != LpStatus::optimal) return res;

    auto& sol = res.solution;
    std::vector<Rational> colv(n_cols_, 0);
    for (int c = 0; c < n_cols_; ++c)
      if (at_upper_[c]) colv[c] = *upper_[c];
    std::vector<char> is_basic(n_cols_, 0);
    for (int i = 0; i < m_; ++i) {
      colv[basis_[i]] = xb_[i];
      is_basic[basis_[i]] = 1;
    }
    sol.values.resize(lp_.n_vars());
    for (int v = 0; v < lp_.n_vars(); ++v) {
      const auto& cm = map_[v];
      Rational x = cm.offset;
      if (cm.col >= 0) x += cm.sign * colv[cm.col];
      if (cm.col2 >= 0) x -= colv[cm.col2];
      sol.values[v] = x;
      if ((cm.col >= 0 && is_basic[cm.col]) || (cm.col2 >= 0 && is_basic[cm.col2])) sol.basic_variables.push_back(v);
    }
    sol.objective_value = lp_.objective_value(sol.values);
    for (int k = 0; k < lp_.n_constraints(); ++k)
      if (lp_.is_tight(lp_.constraints()[k], sol.values)) sol.tight_constraints.push_back(k);
    return res;
  }

 private:
  void build() {
    const auto& vars = lp_.variables();
    map_.resize(vars.size());
    std::vector<std::optional<Rational>> ub;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      const auto& var = vars[v];
      auto& cm = map_[v];
      if (var.lo && var.hi && *var.lo == *var.hi) {
        cm.offset = *var.lo;
      } else if (var.lo) {
        cm.offset = *var.lo;
        cm.col = static_cast<int>(ub.size());
        ub.push_back(var.hi ? std::optional<Rational>(*var.hi - *var.lo) : std::nullopt);
      } else if (var.hi) {
        cm.offset = *var.hi;
        cm.sign = -1;
        cm.col = static_cast<int>(ub.size());
        ub.push_back(std::nullopt);
      } else {
        cm.col = static_cast<int>(ub.size());
        ub.push_back(std::nullopt);
        cm.col2 = static_cast<int>(ub.size());
        ub.push_back(std::nullopt);
      }
    }
    const int n_struct = static_cast<int>(ub.size());

    struct Row {
      std::vector<std::pair<int, Rational>> entries;
      Rational rhs;
      int slack_sign = 0;
    };
    std::vector<Row> rows;
    for (const auto& c : lp_.constraints()) {
      Row row;
      std::vector<Rational> dense(n_struct, 0);
      Rational rhs = c.rhs;
      for (const auto& t : c.terms) {
        const auto& cm = map_[t.var];
        rhs -= t.coef * cm.offset;
        if (cm.col >= 0) dense[cm.col] += cm.sign * t.coef;
        if (cm.col2 >= 0) dense[cm.col2] -= t.coef;
      }
      for (int k = 0; k < n_struct; ++k)
        if (dense[k] != 0) row.entries.emplace_back(k, dense[k]);
      row.rhs = rhs;
      row.slack_sign = c.rel == Relation::le ? 1 : c.rel == Relation::ge ? -1 : 0;
      if (row.entries.empty()) {
        bool ok = c.rel == Relation::le ? rhs >= 0 : c.rel == Relation::ge ? rhs <= 0 : rhs == 0;
        if (!ok) infeasible_rows_.push_back(static_cast<int>(rows.size()));
        continue;
      }
      rows.push_back(std::move(row));
    }

    m_ = static_cast<int>(rows.size());
    int n_slack = 0;
    for (const auto& r : rows) n_slack += r.slack_sign != 0;
    std::vector<int> slack_col(m_, -1);
    int next = n_struct;
    for (int i = 0; i < m_; ++i)
      if (rows[i].slack_sign != 0) slack_col[i] = next++;
    first_artificial_ = next;

    // Decide which rows need an artificial before allocating columns.
    std::vector<int> sign(m_, 1);
    std::vector<char> need_art(m_, 0);
    int n_art = 0;
    for (int i = 0; i < m_; ++i) {
      if (rows[i].rhs < 0) sign[i] = -1;
      bool slack_ok = rows[i].slack_sign != 0 && rows[i].slack_sign * sign[i] == 1;
      need_art[i] = !slack_ok;
      n_art += need_art[i];
    }
    n_cols_ = first_artificial_ + n_art;
    upper_.assign(n_cols_, std::nullopt);
    for (int k = 0; k < n_struct; ++k) upper_[k] = ub[k];
    at_upper_.assign(n_cols_, 0);

    t_.assign(m_, std::vector<Rational>(n_cols_, 0));
    basis_.assign(m_, -1);
    xb_.assign(m_, 0);
    int art = first_artificial_;
    for (int i = 0; i < m_; ++i) {
      auto& tr = t_[i];
      for (const auto& [k, a] : rows[i].entries) tr[k] = sign[i] * a;
      if (slack_col[i] >= 0) tr[slack_col[i]] = sign[i] * rows[i].slack_sign;
      xb_[i] = sign[i] * rows[i].rhs;
      if (need_art[i]) {
        tr[art] = 1;
        basis_[i] = art++;
      } else {
        basis_[i] = slack_col[i];
      }
    }
    (void)n_slack;
  }

  LpStatus optimize(const std::vector<Rational>& cost, bool phase_one) {
    std::vector<char> is_basic(n_cols_, 0);
    for (int b : basis_) is_basic[b] = 1;
    std::vector<Rational> d = cost;
    for (int i = 0; i < m_; ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (int j = 0; j < n_cols_; ++j)
        if (t_[i][j] != 0) d[j] -= cb * t_[i][j];
    }
    const int entering_limit = phase_one ? n_cols_ : first_artificial_;

    Rational theta, cand;
    while (true) {
      int q = -1;
      for (int j = 0; j < entering_limit; ++j) {
        if (is_basic[j]) continue;
        int s = sgn(d[j]);
        if ((!at_upper_[j] && s < 0) || (at_upper_[j] && s > 0)) {
          q = j;
          break;
        }
      }
      if (q < 0) return LpStatus::optimal;
      const int dir = at_upper_[q] ? -1 : 1;

      int leave_row = -1, leave_var = -1;
      bool leave_to_upper = false, bounded = false;
      if (upper_[q]) {
        theta = *upper_[q];
        leave_var = q;
        bounded = true;
      }
      for (int i = 0; i < m_; ++i) {
        const Rational& a = t_[i][q];
        int sa = sgn(a) * dir;
        if (sa == 0) continue;
        bool to_upper;
        if (sa > 0) {
          cand = xb_[i] / a;
          if (dir < 0) cand = -cand;
          to_upper = false;
        } else {
          const auto& u = upper_[basis_[i]];
          if (!u) continue;
          cand = (*u - xb_[i]) / a;
          if (dir > 0) cand = -cand;
          to_upper = true;
        }
        if (!bounded || cand < theta || (cand == theta && basis_[i] < leave_var)) {
          theta = cand;
          leave_row = i;
          leave_var = basis_[i];
          leave_to_upper = to_upper;
          bounded = true;
        }
      }
      if (!bounded) return LpStatus::unbounded;

      if (theta != 0)
        for (int i = 0; i < m_; ++i)
          if (t_[i][q] != 0) xb_[i] -= dir * theta * t_[i][q];

      if (leave_row < 0) {
        at_upper_[q] = !at_upper_[q];
        continue;
      }
      Rational entering_value = at_upper_[q] ? Rational(*upper_[q] - theta) : theta;
      const int old = basis_[leave_row];
      at_upper_[old] = leave_to_upper;
      is_basic[old] = 0;
      is_basic[q] = 1;
      at_upper_[q] = 0;
      basis_[leave_row] = q;
      xb_[leave_row] = entering_value;
      pivot(leave_row, q, d);
    }
  }

  void pivot(int r, int q, std::vector<Rational>& d) {
    ++pivots_;
    auto& pr = t_[r];
    const Rational piv = pr[q];
    std::vector<int> nz;
    for (int j = 0; j < n_cols_; ++j)
      if (pr[j] != 0) {
        pr[j] /= piv;
        nz.push_back(j);
      }
    Rational f;
    for (int i = 0; i < m_; ++i) {
      if (i == r || t_[i][q] == 0) continue;
      f = t_[i][q];
      auto& row = t_[i];
      for (int j : nz) row[j] -= f * pr[j];
    }
    if (d[q] != 0) {
      f = d[q];
      for (int j : nz) d[j] -= f * pr[j];
    }
  }

  const LinearProgram& lp_;
  std::vector<ColumnMap> map_;
  std::vector<int> infeasible_rows_;
  int m_ = 0, n_cols_ = 0, first_artificial_ = 0;
  std::vector<std::vector<Rational>> t_;
  std::vector<int> basis_;
  std::vector<Rational> xb_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<char> at_upper_;
  long pivots_ = 0;
};

}  // namespace

LpResult solve_basic(const LinearProgram& lp) { return Tableau(lp).run(); }

GenerationResult solve_with_generation(LinearProgram lp, const SeparationOracle& oracle, std::optional<int> max_rounds) {
  const int limit = max_rounds.value_or(10 * (lp.n_vars() + lp.n_constraints()));
  GenerationResult out;
  while (true) {
    ++out.rounds;
    out.result = solve_basic(lp);
    if (!out.result.optimal()) return out;
    auto cuts = oracle(out.result.solution.values);
    if (cuts.empty()) return out;
    if (out.rounds >= limit)
      throw GenerationLimitExceeded("lazy generation exceeded " + std::to_string(limit) + " rounds");
    for (auto& c : cuts) {
      if (lp.satisfies(c, out.result.solution.values))
        throw std::logic_error("separation oracle returned a constraint that is not violated");
      out.cuts.push_back(c);
      lp.add_constraint(std::move(c));
    }
  }
}

namespace {

// Inequality rows a.x <= b derived from constraints and finite bounds.
struct Row {
  std::vector<Term> terms;
  Rational rhs;
};

std::vector<Row> inequality_rows(const LinearProgram& lp) {
  std::vector<Row> rows;
  for (const auto& c : lp.constraints()) {
    if (c.rel != Relation::ge) rows.push_back({c.terms, c.rhs});
    if (c.rel != Relation::le) {
      Row r{c.terms, -c.rhs};
      for (auto& t : r.terms) t.coef = -t.coef;
      rows.push_back(std::move(r));
    }
  }
  for (int v = 0; v < lp.n_vars(); ++v) {
    const auto& var = lp.variables()[v];
    if (var.hi) rows.push_back({{{v, 1}}, *var.hi});
    if (var.lo) rows.push_back({{{v, -1}}, -*var.lo});
  }
  return rows;
}

Rational row_activity(const Row& r, std::span<const Rational> x) {
  Rational s = 0;
  for (const auto& t : r.terms) s += t.coef * x[t.var];
  return s;
}

}  // namespace

VertexDecomposition decompose_to_vertices(const LinearProgram& polytope, std::span<const Rational> point) {
  if (!polytope.satisfies(point)) throw DecompositionError("point is not feasible for the polytope");
  const auto rows = inequality_rows(polytope);
  std::vector<Rational> p(point.begin(), point.end());
  Rational remaining = 1;
  VertexDecomposition dec;

  std::vector<Term> objective;
  for (int v = 0; v < polytope.n_vars(); ++v) objective.push_back({v, Rational(v + 1)});

  for (int guard = 0; guard <= polytope.n_vars() + 1; ++guard) {
    LinearProgram face = polytope;
    for (int k = 0; k < polytope.n_constraints(); ++k) {
      const auto& c = polytope.constraints()[k];
      if (c.rel != Relation::eq && polytope.is_tight(c, p)) {
        Constraint eq = c;
        eq.rel = Relation::eq;
        face.add_constraint(std::move(eq));
      }
    }
    for (int v = 0; v < face.n_vars(); ++v) {
      const auto& var = polytope.variables()[v];
      if ((var.lo && p[v] == *var.lo) || (var.hi && p[v] == *var.hi)) face.set_bounds(v, p[v], p[v]);
    }
    face.set_objective(objective, Sense::minimize);
    auto res = solve_basic(face);
    if (!res.optimal()) throw DecompositionError("minimal face has no vertex");
    auto z = res.solution.values;
    for (const auto& x : z)
      if (!is_integral(x)) throw DecompositionError("non-integral vertex found; polytope is not integral");

    if (z == p) {
      dec.terms.push_back({remaining, std::move(z)});
      return dec;
    }
    std::optional<Rational> mu;
    for (const auto& r : rows) {
      Rational az = row_activity(r, z);
      if (az >= r.rhs) continue;
      Rational cand = (r.rhs - row_activity(r, p)) / (r.rhs - az);
      if (!mu || cand < *mu) mu = cand;
    }
    if (!mu || *mu >= 1) throw DecompositionError("decomposition step found no proper split");
    dec.terms.push_back({remaining * *mu, z});
    for (std::size_t v = 0; v < p.size(); ++v) p[v] = (p[v] - *mu * z[v]) / (1 - *mu);
    remaining *= 1 - *mu;
  }
  throw DecompositionError("face dimension failed to decrease");
}

std::size_t sample_term(const VertexDecomposition& dec, std::mt19937_64& rng) {
  static const Rational two64 = power(Rational(2), 64);
  const Rational u = Rational(Integer(std::to_string(rng()))) / two64;
  Rational cum = 0;
  for (std::size_t k = 0; k < dec.terms.size(); ++k) {
    cum += dec.terms[k].weight;
    if (u < cum) return k;
  }
  return dec.terms.size() - 1;
}

}  // namespace ordmed
