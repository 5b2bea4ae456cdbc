#include "ordmed/instance.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace ordmed {

Metric::Metric(int n_facilities, int n_clients, std::vector<Rational> matrix)
    : nf_(n_facilities), nc_(n_clients), d_(std::move(matrix)) {
  const auto n = static_cast<std::size_t>(n_points());
  if (d_.size() != n * n) throw std::invalid_argument("distance matrix is not square over all points");
}

Metric Metric::from_points_l1(int n_facilities, int n_clients,
                              std::span<const std::pair<Rational, Rational>> points) {
  const int n = n_facilities + n_clients;
  if (static_cast<int>(points.size()) != n) throw std::invalid_argument("point count mismatch");
  std::vector<Rational> d(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      d[static_cast<std::size_t>(u) * n + v] =
          abs(points[u].first - points[v].first) + abs(points[u].second - points[v].second);
  return Metric(n_facilities, n_clients, std::move(d));
}

Metric Metric::scaled(const Rational& factor) const {
  Metric out = *this;
  for (auto& x : out.d_) x *= factor;
  return out;
}

std::optional<MetricViolation> validate_metric(const Metric& m, bool unit_separation) {
  const int n = m.n_points();
  auto name = [&](int u) {
    return u < m.n_facilities() ? "facility " + std::to_string(u)
                                : "client " + std::to_string(u - m.n_facilities());
  };
  for (int u = 0; u < n; ++u) {
    if (m.at(u, u) != 0) return MetricViolation{"nonzero diagonal at " + name(u)};
    for (int v = 0; v < n; ++v) {
      if (m.at(u, v) < 0) return MetricViolation{"negative distance " + name(u) + " - " + name(v)};
      if (m.at(u, v) != m.at(v, u)) return MetricViolation{"asymmetric entry " + name(u) + " - " + name(v)};
      if (unit_separation && m.at(u, v) != 0 && m.at(u, v) < 1)
        return MetricViolation{"non-co-located pair closer than 1: " + name(u) + " - " + name(v)};
    }
  }
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v)
        if (m.at(u, w) > m.at(u, v) + m.at(v, w))
          return MetricViolation{"triangle violation: d(" + name(u) + ", " + name(w) + ") = " +
                                 to_string(m.at(u, w)) + " exceeds the route via " + name(v)};
  return std::nullopt;
}

bool MatroidSpec::is_independent(std::uint64_t mask) const {
  if (kind == Kind::partition) {
    for (std::size_t p = 0; p < parts.size(); ++p) {
      int used = 0;
      for (int i : parts[p]) used += (mask >> i) & 1U;
      if (used > capacities[p]) return false;
    }
    return true;
  }
  return std::binary_search(independent.begin(), independent.end(), mask);
}

int MatroidSpec::rank(std::uint64_t mask) const {
  if (kind == Kind::partition) {
    int r = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      int inside = 0;
      for (int i : parts[p]) inside += (mask >> i) & 1U;
      r += std::min(inside, capacities[p]);
    }
    return r;
  }
  int best = 0;
  for (auto s : independent)
    if ((s & ~mask) == 0) best = std::max(best, std::popcount(s));
  return best;
}

std::string to_string(VariantKind v) {
  switch (v) {
    case VariantKind::robust: return "robust";
    case VariantKind::matroid: return "matroid";
    case VariantKind::knapsack: return "knapsack";
    case VariantKind::fault_tolerant: return "fault_tolerant";
  }
  return "?";
}

VariantKind parse_variant_kind(std::string_view s) {
  if (s == "robust") return VariantKind::robust;
  if (s == "matroid") return VariantKind::matroid;
  if (s == "knapsack") return VariantKind::knapsack;
  if (s == "fault_tolerant" || s == "ft") return VariantKind::fault_tolerant;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

int Instance::served_count() const {
  return kind() == VariantKind::robust ? robust().m : n_clients();
}

bool Instance::feasible_open_set(std::span<const int> open) const {
  std::set<int> distinct(open.begin(), open.end());
  if (distinct.size() != open.size()) return false;
  for (int i : open)
    if (i < 0 || i >= n_facilities()) return false;
  switch (kind()) {
    case VariantKind::robust: return !open.empty() && static_cast<int>(open.size()) <= robust().k;
    case VariantKind::fault_tolerant: {
      const auto& ft = fault();
      const int need = ft.r.empty() ? 1 : *std::max_element(ft.r.begin(), ft.r.end());
      return static_cast<int>(open.size()) <= ft.k && static_cast<int>(open.size()) >= need;
    }
    case VariantKind::matroid: {
      std::uint64_t mask = 0;
      for (int i : open) mask |= std::uint64_t{1} << i;
      return !open.empty() && matroid().is_independent(mask);
    }
    case VariantKind::knapsack: {
      Rational total = 0;
      for (int i : open) total += knapsack().wt[i];
      return !open.empty() && total <= knapsack().budget;
    }
  }
  return false;
}

namespace {

void validate_matroid(const MatroidSpec& mat, int nf) {
  if (nf > 63) throw InvalidInstance("matroid instances support at most 63 facilities");
  if (mat.kind == MatroidSpec::Kind::partition) {
    if (mat.parts.size() != mat.capacities.size()) throw InvalidInstance("partition capacities mismatch");
    std::vector<int> seen(nf, 0);
    for (const auto& part : mat.parts)
      for (int i : part) {
        if (i < 0 || i >= nf) throw InvalidInstance("partition references unknown facility");
        ++seen[i];
      }
    for (int c : mat.capacities)
      if (c < 0) throw InvalidInstance("negative partition capacity");
    for (int s : seen)
      if (s != 1) throw InvalidInstance("partition parts must cover every facility exactly once");
    return;
  }
  const auto& table = mat.independent;
  if (!std::is_sorted(table.begin(), table.end()) ||
      std::adjacent_find(table.begin(), table.end()) != table.end())
    throw InvalidInstance("independent-set table must be sorted and duplicate free");
  auto has = [&](std::uint64_t s) { return std::binary_search(table.begin(), table.end(), s); };
  if (!has(0)) throw InvalidInstance("independent-set table must contain the empty set");
  for (auto s : table) {
    if (s >> nf) throw InvalidInstance("independent set references unknown facility");
    for (int i = 0; i < nf; ++i)
      if ((s >> i & 1U) && !has(s & ~(std::uint64_t{1} << i)))
        throw InvalidInstance("independent-set table is not downward closed");
  }
  for (auto a : table)
    for (auto b : table) {
      if (std::popcount(a) >= std::popcount(b)) continue;
      bool ok = false;
      for (int i = 0; i < nf && !ok; ++i)
        if ((b >> i & 1U) && !(a >> i & 1U) && has(a | std::uint64_t{1} << i)) ok = true;
      if (!ok) throw InvalidInstance("independent-set table violates the exchange property");
    }
}

}  // namespace

void validate_instance(const Instance& inst) {
  const int nf = inst.n_facilities(), nc = inst.n_clients();
  if (nf < 1 || nc < 1) throw InvalidInstance("instance needs at least one facility and one client");
  if (static_cast<int>(inst.facility_ids.size()) != nf || static_cast<int>(inst.client_ids.size()) != nc)
    throw InvalidInstance("id lists do not match the metric");
  for (std::size_t i = 0; i < inst.w.size(); ++i) {
    if (inst.w[i] < 0) throw InvalidInstance("weights must be non-negative");
    if (i > 0 && inst.w[i] > inst.w[i - 1]) throw InvalidInstance("weights must be non-increasing");
  }
  if (auto v = validate_metric(inst.metric)) throw InvalidInstance(v->message);

  switch (inst.kind()) {
    case VariantKind::robust: {
      const auto& r = inst.robust();
      if (r.k < 1 || r.k > nf) throw InvalidInstance("robust k must lie in [1, |F|]");
      if (r.m < 1 || r.m > nc) throw InvalidInstance("robust m must lie in [1, |C|]");
      if (static_cast<int>(inst.w.size()) != r.m) throw InvalidInstance("robust weights need length m");
      break;
    }
    case VariantKind::matroid:
      validate_matroid(inst.matroid(), nf);
      if (static_cast<int>(inst.w.size()) != nc) throw InvalidInstance("weights need length |C|");
      if (inst.matroid().rank((std::uint64_t{1} << nf) - 1) < 1)
        throw InvalidInstance("matroid has no nonempty independent set");
      break;
    case VariantKind::knapsack: {
      const auto& ks = inst.knapsack();
      if (static_cast<int>(ks.wt.size()) != nf) throw InvalidInstance("knapsack weights need length |F|");
      for (const auto& x : ks.wt)
        if (x < 0) throw InvalidInstance("knapsack weights must be non-negative");
      if (static_cast<int>(inst.w.size()) != nc) throw InvalidInstance("weights need length |C|");
      if (*std::min_element(ks.wt.begin(), ks.wt.end()) > ks.budget)
        throw InvalidInstance("knapsack admits no nonempty feasible set");
      break;
    }
    case VariantKind::fault_tolerant: {
      const auto& ft = inst.fault();
      if (ft.k < 1 || ft.k > nf) throw InvalidInstance("fault-tolerant k must lie in [1, |F|]");
      if (static_cast<int>(ft.r.size()) != nc) throw InvalidInstance("r needs one entry per client");
      for (int r : ft.r)
        if (r < 1 || r > ft.k) throw InvalidInstance("every r_j must lie in [1, k]");
      if (static_cast<int>(inst.w.size()) != nc) throw InvalidInstance("weights need length |C|");
      break;
    }
  }
}

}  // namespace ordmed
