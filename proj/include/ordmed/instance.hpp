#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ordmed/rational.hpp"

namespace ordmed {

/// Distance matrix over facilities followed by clients.
class Metric {
 public:
  Metric() = default;
  Metric(int n_facilities, int n_clients, std::vector<Rational> matrix);

  static Metric from_points_l1(int n_facilities, int n_clients,
                               std::span<const std::pair<Rational, Rational>> points);

  int n_facilities() const { return nf_; }
  int n_clients() const { return nc_; }
  int n_points() const { return nf_ + nc_; }

  int facility_point(int i) const { return i; }
  int client_point(int j) const { return nf_ + j; }

  const Rational& at(int u, int v) const { return d_[static_cast<std::size_t>(u) * n_points() + v]; }
  const Rational& fc(int facility, int client) const { return at(facility, nf_ + client); }
  const Rational& cc(int a, int b) const { return at(nf_ + a, nf_ + b); }

  Metric scaled(const Rational& factor) const;

 private:
  int nf_ = 0, nc_ = 0;
  std::vector<Rational> d_;
};

struct MetricViolation {
  std::string message;
};

/// Checks shape, zero diagonal, symmetry, non-negativity and the triangle inequality exactly.
/// With `unit_separation`, distinct non-co-located points must also be at distance >= 1.
std::optional<MetricViolation> validate_metric(const Metric& m, bool unit_separation = false);

struct RobustSpec {
  int k = 1;
  int m = 1;
};

struct MatroidSpec {
  enum class Kind { partition, explicit_table };
  Kind kind = Kind::partition;
  std::vector<std::vector<int>> parts;
  std::vector<int> capacities;
  std::vector<std::uint64_t> independent;  // bitmask table, explicit kind only

  bool is_independent(std::uint64_t mask) const;
  int rank(std::uint64_t mask) const;
};

struct KnapsackSpec {
  std::vector<Rational> wt;
  Rational budget;
};

struct FaultSpec {
  int k = 1;
  std::vector<int> r;
};

using Variant = std::variant<RobustSpec, MatroidSpec, KnapsackSpec, FaultSpec>;

enum class VariantKind { robust, matroid, knapsack, fault_tolerant };

std::string to_string(VariantKind v);
VariantKind parse_variant_kind(std::string_view s);

struct Instance {
  std::vector<std::string> facility_ids;
  std::vector<std::string> client_ids;
  Metric metric;
  std::vector<Rational> w;
  Variant variant;

  int n_facilities() const { return metric.n_facilities(); }
  int n_clients() const { return metric.n_clients(); }
  const Rational& d(int facility, int client) const { return metric.fc(facility, client); }
  VariantKind kind() const { return static_cast<VariantKind>(variant.index()); }

  const RobustSpec& robust() const { return std::get<RobustSpec>(variant); }
  const MatroidSpec& matroid() const { return std::get<MatroidSpec>(variant); }
  const KnapsackSpec& knapsack() const { return std::get<KnapsackSpec>(variant); }
  const FaultSpec& fault() const { return std::get<FaultSpec>(variant); }

  /// Number of served clients: m for robust, |C| otherwise.
  int served_count() const;

  bool feasible_open_set(std::span<const int> open) const;
};

struct InvalidInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural validation: sizes, weight monotonicity, variant invariants, metric axioms.
void validate_instance(const Instance& inst);

struct Solution {
  std::vector<int> open;
  std::vector<int> served;
  std::vector<std::vector<int>> assignment;  // parallel to `served`
};

}  // namespace ordmed
