#pragma once

#include <map>

#include "lll/engine.hpp"
#include "lll/witness.hpp"

namespace lll {

struct ForbiddenWitness {
  WitnessTree tree;
  CellAssignment cells;
};

/// F = F1 (single-vertex full witnesses of light events) union F2
/// (weight-window partial witnesses over heavy events).
struct ForbiddenSet {
  std::vector<ForbiddenWitness> f1;
  std::vector<ForbiddenWitness> f2;

  size_t size() const { return f1.size() + f2.size(); }
  const ForbiddenWitness& at(size_t i) const {
    return i < f1.size() ? f1[i] : f2[i - f1.size()];
  }
};

std::vector<SplitTree> default_split_trees(const EventSystem& system);

/// With independence_filter, trees whose equal-depth labels are adjacent are
/// skipped: they can never occur in an event-log, so dropping them keeps
/// every guarantee while shrinking F considerably on adjacent events.
ForbiddenSet enumerate_forbidden(const EventSystem& system, const LLLParams& params,
                                 const std::vector<SplitTree>& split_trees,
                                 bool independence_filter = false);

/// Cells fixed so far during table construction; everything else is
/// treated as a fresh draw from the variable's distribution.
struct PartialTable {
  std::map<std::pair<int, int>, int> fixed;  // (variable, column) -> value
  int width = 0;
};

Q consistency_probability(const EventSystem& system, const ForbiddenWitness& witness,
                          const PartialTable& partial);

Q phi(const EventSystem& system, const ForbiddenSet& fset, const PartialTable& partial);

struct BuildResult {
  EvaluationTable table;
  Q phi_empty;
  Q phi_final;
  // (flat cell index p * width + col - 1, Phi value after fixing that cell)
  // for every fix that changed Phi; untouched fixes leave Phi constant.
  std::vector<std::pair<long, Q>> phi_trace;
};

BuildResult build_table(const EventSystem& system, const LLLParams& params,
                        const ForbiddenSet& fset);

struct SolveResult {
  LLLParams params;
  ForbiddenSet forbidden;
  Q phi_empty;
  Q phi_final;
  std::vector<std::pair<long, Q>> phi_trace;
  EvaluationTable table;
  RunReport run;
  std::vector<int> assignment;
};

SolveResult solve_deterministic(const EventSystem& system, const std::vector<Q>& x,
                                double epsilon,
                                const std::vector<SplitTree>* split_trees = nullptr,
                                bool independence_filter = false);

}  // namespace lll
