#pragma once

#include <optional>
#include <string>

#include "lll/derand.hpp"

namespace lll {

struct CnfFormula {
  int nvars = 0;
  std::vector<std::vector<int>> clauses;  // signed 1-based literals

  int max_width() const;
  /// Max number of other clauses any clause shares a variable with.
  int degree() const;
};

CnfFormula parse_dimacs(const std::string& text);
std::string to_dimacs(const CnfFormula& formula);

struct AdaptedSystem {
  EventSystem system;
  std::vector<Q> x;
  std::vector<SplitTree> split_trees;
  int degree = 0;
  ValidationReport validation;  // epsilon-slack check with exact x' values
};

/// One uniform bit per variable, one "clause unsatisfied" event per clause,
/// x(A) = 1/(d+1), clique-cover split trees (|B_A| < 2k).
AdaptedSystem cnf_event_system(const CnfFormula& formula, double epsilon,
                               bool clique_cover = true);

struct Hypergraph {
  int nverts = 0;
  std::vector<std::vector<int>> edges;  // 1-based vertex ids

  int uniformity() const;
  int degree() const;
};

/// Lines: 'h <nverts> <nedges>' header, then one whitespace-separated
/// vertex list per edge.
Hypergraph parse_hypergraph(const std::string& text);
std::string to_hypergraph(const Hypergraph& graph);

/// One color bit per vertex, one "edge monochromatic" event per edge.
AdaptedSystem hypergraph2color_event_system(const Hypergraph& graph, double epsilon,
                                            bool clique_cover = true);

/// Direct method of conditional probabilities on single assignments, no
/// tables: applicable when the expected number of unsatisfied clauses is
/// below 1 (in particular whenever m * 2^-k <= 1/2).
std::optional<std::vector<int>> fast_path_satisfy(const CnfFormula& formula);

bool satisfies(const CnfFormula& formula, const std::vector<int>& assignment);
bool properly_colored(const Hypergraph& graph, const std::vector<int>& colors);

}  // namespace lll
