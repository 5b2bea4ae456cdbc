#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordmed/rational.hpp"

namespace ordmed {

enum class Relation { le, eq, ge };
enum class Sense { minimize, maximize };

struct Term {
  int var;
  Rational coef;
};

struct Constraint {
  std::vector<Term> terms;
  Relation rel = Relation::le;
  Rational rhs;
  std::string name;
};

struct Variable {
  std::string name;
  std::optional<Rational> lo;  // nullopt means unbounded
  std::optional<Rational> hi;
};

class LinearProgram {
 public:
  int add_variable(std::string name, std::optional<Rational> lo = Rational(0),
                   std::optional<Rational> hi = std::nullopt);
  int add_constraint(Constraint c);
  void set_objective(std::vector<Term> terms, Sense sense = Sense::minimize, Rational constant = 0);
  void set_bounds(int var, std::optional<Rational> lo, std::optional<Rational> hi);

  int n_vars() const { return static_cast<int>(vars_.size()); }
  int n_constraints() const { return static_cast<int>(cons_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const std::vector<Term>& objective() const { return obj_; }
  Sense sense() const { return sense_; }
  const Rational& objective_constant() const { return constant_; }

  Rational objective_value(std::span<const Rational> values) const;
  bool satisfies(std::span<const Rational> values) const;
  bool satisfies(const Constraint& c, std::span<const Rational> values) const;
  bool is_tight(const Constraint& c, std::span<const Rational> values) const;

  /// Plain-text listing, one line per constraint, rationals as p/q.
  void dump(std::ostream& out) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> cons_;
  std::vector<Term> obj_;
  Sense sense_ = Sense::minimize;
  Rational constant_ = 0;
};

Rational activity(const Constraint& c, std::span<const Rational> values);

struct BasicSolution {
  std::vector<Rational> values;
  Rational objective_value;
  std::vector<int> basic_variables;
  std::vector<int> tight_constraints;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  BasicSolution solution;
  long pivots = 0;

  bool optimal() const { return status == LpStatus::optimal; }
};

/// Exact two-phase bounded simplex with Bland's rule; the optimum returned is a vertex.
LpResult solve_basic(const LinearProgram& lp);

/// Returns the constraints of the implicit family violated by `values`; empty when none is.
using SeparationOracle = std::function<std::vector<Constraint>(std::span<const Rational> values)>;

struct GenerationResult {
  LpResult result;
  int rounds = 0;
  std::vector<Constraint> cuts;
};

struct GenerationLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GenerationResult solve_with_generation(LinearProgram lp, const SeparationOracle& oracle,
                                       std::optional<int> max_rounds = std::nullopt);

struct VertexTerm {
  Rational weight;
  std::vector<Rational> vertex;
};

struct VertexDecomposition {
  std::vector<VertexTerm> terms;
};

struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes `point` as a convex combination of integral vertices of the feasibility system.
VertexDecomposition decompose_to_vertices(const LinearProgram& polytope, std::span<const Rational> point);

/// Index of a term drawn with probability equal to its weight, using exact comparisons.
std::size_t sample_term(const VertexDecomposition& dec, std::mt19937_64& rng);

inline const std::vector<Rational>& sample_vertex(const VertexDecomposition& dec, std::mt19937_64& rng) {
  return dec.terms[sample_term(dec, rng)].vertex;
}

}  // namespace ordmed
