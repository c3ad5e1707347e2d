#pragma once

#include <cstdint>
#include <functional>

#include "lll/derand.hpp"

namespace lll {

/// A small indexed family of complete tables whose <= k-cell marginals are
/// within delta of the true product distribution. Both constructions here
/// are exact (delta = 0).
struct ApproxSpace {
  enum class Kind { exhaustive, kwise };
  Kind kind = Kind::exhaustive;
  int k = 0;
  Q delta = 0;
  std::uint64_t size = 0;
  int n_vars = 0;
  int width = 0;

  // exhaustive: per-variable bit budget and value thresholds
  std::vector<int> bits_per_var;
  std::vector<std::vector<long>> cum_num;  // cumulative numerators over 2^bits

  // kwise: GF(2) inner products of the seed with per-cell vectors
  int seed_bits = 0;
  std::vector<std::uint64_t> cell_vectors;  // cell = var * width + (col-1)

  int n_cells() const { return n_vars * width; }
  EvaluationTable materialize(std::uint64_t index) const;
  /// Reinterprets a kwise space's flat cells as an n x width grid.
  void reshape(int n, int w);
};

/// Every complete table over dyadic domains, each with its exact product
/// probability realized by a uniform bit expansion.
ApproxSpace build_exhaustive_space(const EventSystem& system, int width,
                                   std::uint64_t cap = std::uint64_t(1) << 20);

/// Exact k-wise independent uniform bits: bit i is the GF(2) inner product
/// of the seed with (1, a_i, a_i^2, ..., a_i^{k-1}) over GF(2^r), the
/// constant block compressed to one bit.
ApproxSpace build_kwise_space(int n_cells, int k);

/// |E_space(predicate) - E_product(predicate)|, both by full enumeration.
/// Throws internal_error if the deviation exceeds D^dt_depth * delta.
Q verify_indistinguishability(const EventSystem& system, const ApproxSpace& space,
                              const std::function<bool(const EvaluationTable&)>& predicate,
                              int dt_depth,
                              std::uint64_t cap = std::uint64_t(1) << 20);

struct DecisionTreeBudget {
  double c = 1;
  std::vector<int> k_event;  // ceil(c * min(w(A), log2 M))
  int k = 0;                 // ceil(2 c gamma)
};

/// Smallest budget certified by scope sizes: an event is decided by
/// querying its scope, so c = max |vbl(A)| / min(w(A), log2 M) works.
DecisionTreeBudget make_budget(const EventSystem& system, const LLLParams& params);

std::vector<int> greedy_mis(const EventSystem& system, const std::vector<int>& happening);

struct ParallelReport {
  RunOutcome outcome = RunOutcome::exhausted;
  int rounds = 0;
  std::vector<int> assignment;
  std::vector<long> resamples;
  std::vector<int> cells_consumed;
  std::vector<std::vector<int>> round_sets;  // MIS per round
};

ParallelReport run_parallel_rounds(const EventSystem& system, const EvaluationTable& table,
                                   int max_rounds);

struct ParallelSolveResult {
  LLLParams params;
  DecisionTreeBudget budget;
  ApproxSpace space;
  std::uint64_t table_index = 0;
  ParallelReport run;
  std::vector<int> assignment;
};

ParallelSolveResult solve_parallel(const EventSystem& system, const std::vector<Q>& x,
                                   double epsilon, int workers = 1,
                                   std::uint64_t space_cap = std::uint64_t(1) << 20);

}  // namespace lll
