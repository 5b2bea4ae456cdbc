#pragma once

#include <algorithm>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "ordmed/instance_io.hpp"

namespace fixtures {

using ordmed::Json;
using ordmed::Rational;

inline Rational q(const char* text) { return ordmed::parse_rational(text); }

/// Canonical a/b; the two-argument mpq constructor leaves common factors in place.
inline Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

inline std::vector<Rational> qs(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

inline Json json_list(const std::vector<Rational>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(ordmed::rational_to_json(x));
  return a;
}

/// Facilities and clients on a horizontal line, distances |a - b|.
inline ordmed::Instance line_instance(const std::vector<long>& facilities, const std::vector<long>& clients,
                                      const std::vector<Rational>& weights, Json variant) {
  Json doc;
  doc["facilities"] = Json::array();
  doc["clients"] = Json::array();
  Json pts = Json::array();
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    doc["facilities"].push_back("f" + std::to_string(i));
    pts.push_back({facilities[i], 0});
  }
  for (std::size_t j = 0; j < clients.size(); ++j) {
    doc["clients"].push_back("c" + std::to_string(j));
    pts.push_back({clients[j], 0});
  }
  doc["dist"] = {{"points_l1", pts}};
  doc["weights"] = json_list(weights);
  doc["variant"] = std::move(variant);
  return ordmed::instance_from_json(doc);
}

inline Json robust(int k, int m) { return {{"robust", {{"k", k}, {"m", m}}}}; }

inline Json fault(int k, std::vector<int> r) { return {{"fault_tolerant", {{"k", k}, {"r", r}}}}; }

inline Json knapsack(const std::vector<long>& wt, long budget) {
  return {{"knapsack", {{"wt", wt}, {"W", budget}}}};
}

inline Json partition(const std::vector<std::vector<int>>& parts, const std::vector<int>& caps) {
  return {{"matroid", {{"partition", {{"parts", parts}, {"capacities", caps}}}}}};
}

/// Non-increasing non-negative weights with small numerators and denominators.
inline std::vector<Rational> random_weights(std::mt19937_64& rng, int n) {
  std::vector<Rational> w(n);
  for (auto& x : w) x = frac(static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 4));
  std::sort(w.begin(), w.end(), [](const Rational& a, const Rational& b) { return a > b; });
  return w;
}

inline std::vector<Rational> random_costs(std::mt19937_64& rng, int n) {
  std::vector<Rational> c(n);
  for (auto& x : c) x = frac(static_cast<long>(rng() % 50), 1 + static_cast<long>(rng() % 3));
  return c;
}

}  // namespace fixtures
