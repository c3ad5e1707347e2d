#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lll/rational.hpp"

namespace lll {

/// Values are domain indices 0..D-1; a variable is fully described by the
/// probability of each index.
struct Variable {
  int id = 0;
  std::vector<Q> probs;

  int domain_size() const { return static_cast<int>(probs.size()); }
};

/// Partial assignment of an event's scope, aligned with BadEvent::scope.
/// -1 marks an unfixed position.
using ScopeValues = std::vector<int>;
constexpr int kUnset = -1;

struct BadEvent {
  int id = 0;
  std::vector<int> scope;  // sorted variable ids
  std::function<bool(const ScopeValues&)> happens;
  std::function<Q(const ScopeValues&)> cond_prob;

  Q probability() const { return cond_prob(ScopeValues(scope.size(), kUnset)); }
};

struct EventSystem {
  std::vector<Variable> variables;
  std::vector<BadEvent> events;
  std::vector<std::vector<int>> gamma;  // neighbor event ids, sorted

  int n() const { return static_cast<int>(variables.size()); }
  int m() const { return static_cast<int>(events.size()); }
  int max_domain() const;
  bool adjacent(int a, int b) const;
  bool all_dyadic() const;  // every variable probability has a 2^k denominator
};

EventSystem build_event_system(std::vector<Variable> variables, std::vector<BadEvent> events);

/// Conditional probability oracle computed by enumerating the unfixed scope
/// variables; suitable for small hand-built events.
std::function<Q(const ScopeValues&)> make_enumerated_cond_prob(
    const std::vector<Variable>& variables, const std::vector<int>& scope,
    std::function<bool(const ScopeValues&)> happens);

struct ValidationEntry {
  int event_id = 0;
  Q pr;
  Q x_prime;
  double bound = 0;  // x'(A)^{1+eps}
  bool ok = false;
};

struct ValidationReport {
  bool ok = false;
  std::vector<ValidationEntry> entries;
};

ValidationReport validate_lll_condition(const EventSystem& system, const std::vector<Q>& x,
                                        double epsilon);

struct LLLParams {
  std::vector<Q> x;
  std::vector<Q> x_prime;
  std::vector<double> w;       // -log2 x'(A)
  std::vector<char> heavy;     // A in heavy set (x'(A) >= 1/4m)
  std::vector<int> heavy_ids;  // sorted
  std::vector<int> split_size;
  Q M;
  double gamma = 0;
  double w_min = 0;
  double epsilon = 0;
  std::optional<std::pair<long, long>> eps_frac;  // epsilon == p/q when set
  int D = 0;

  int table_width() const;
  int max_witness_vertices() const { return table_width(); }

  /// Exact weight-window tests on the product prod = 2^{-w(tau)} of x'
  /// values over a witness's non-root vertices. Falls back to double
  /// weights with a symmetric 1e-9 slack when epsilon is not a small
  /// rational.
  bool weight_ge_gamma(const Q& prod, double weight) const;
  bool weight_le_2gamma(const Q& prod, double weight) const;
  bool in_window(const Q& prod, double weight) const {
    return weight_ge_gamma(prod, weight) && weight_le_2gamma(prod, weight);
  }
};

LLLParams derive_params(const EventSystem& system, const std::vector<Q>& x, double epsilon,
                        const std::vector<int>* split_sizes = nullptr);

}  // namespace lll
