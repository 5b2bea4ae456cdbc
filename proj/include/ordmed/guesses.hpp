#pragma once

#include <functional>
#include <vector>

#include "ordmed/cost_function.hpp"
#include "ordmed/oracle.hpp"

namespace ordmed {

struct GuessBundle {
  // Single-assignment variants: the largest optimal service cost and one slope per interval.
  Rational o1;
  std::vector<Rational> slopes;
  // Fault-tolerant: the largest connection distance and thresholds at the anchor indices.
  Rational xi1;
  std::vector<int> pos;
  std::vector<Rational> t_prime;
  std::vector<Rational> t;
  std::vector<Rational> w_tilde;

  bool operator==(const GuessBundle&) const = default;
};

/// Least integer power of `base` that is >= value (0 maps to 0).
Rational ceil_power(const Rational& base, const Rational& value);

GuessBundle correct_guesses(const Instance& inst, const ExactOptimum& opt, const Rational& eps, const Rational& delta);

/// Streams every candidate bundle to `sink`; returns true when the stream was cut at `cap`.
bool enumerate_guesses(const Instance& inst, const Rational& eps, const Rational& delta, long cap,
                       const std::function<void(const GuessBundle&)>& sink);

struct GuessStream {
  std::vector<GuessBundle> bundles;
  bool truncated = false;
};

GuessStream collect_guesses(const Instance& inst, const Rational& eps, const Rational& delta, long cap);

CostFunction cost_function_of(const GuessBundle& g, const Rational& eps, int m);

/// Sorted distinct facility-client distances together with 0.
std::vector<Rational> distance_candidates(const Instance& inst);

}  // namespace ordmed
