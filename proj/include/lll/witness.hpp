#pragma once

#include <string>
#include <vector>

#include "lll/model.hpp"

namespace lll {

/// Binary split tree over vbl(A): node labels are variable subsets, the
/// root is all of vbl(A), leaves are the supplied partition.
struct SplitTree {
  struct Node {
    std::vector<int> vars;  // sorted
    int left = -1;
    int right = -1;
  };
  int owner = -1;
  std::vector<Node> nodes;  // node 0 is the root

  int size() const { return static_cast<int>(nodes.size()); }
};

SplitTree build_split_tree(const EventSystem& system, int event_id,
                           const std::vector<std::vector<int>>& leaf_partition);

/// Singleton leaves, the default.
SplitTree build_split_tree(const EventSystem& system, int event_id);

/// Resampling order; t parameters below are 1-based into this sequence.
using EventLog = std::vector<int>;

struct WitnessTree {
  struct Vertex {
    int label = -1;   // event id
    int parent = -1;  // -1 = child of the root
    int depth = 1;
  };
  bool full = false;
  int root_event = -1;         // event whose split tree supplied the root label
  std::vector<int> root_vars;  // S, sorted; equals vbl(root_event) when full
  std::vector<Vertex> vertices;  // non-root vertices in creation order

  double weight(const LLLParams& params) const;
  Q weight_product(const LLLParams& params) const;  // prod x'([v]) over non-root vertices
  bool proper(const EventSystem& system) const;
  /// Labels at equal depth pairwise non-adjacent (and distinct) in G.
  bool levels_independent(const EventSystem& system) const;
  std::string canonical_string() const;
};

WitnessTree construct_witness(const EventSystem& system, const EventLog& log, int t,
                              const SplitTree& split_tree, int node_index);

/// Table of pre-drawn evaluations, one row per variable, with per-variable
/// column cursors (1-based).
struct EvaluationTable {
  std::vector<std::vector<int>> rows;
  int width = 0;
  std::vector<int> cursors;  // current column per variable

  static EvaluationTable from_columns(const EventSystem& system,
                                      const std::vector<std::vector<int>>& columns);
  void reset_cursors() { cursors.assign(rows.size(), 1); }
  int value_at(int var, int col) const;
  int current(int var) const { return value_at(var, cursors[var]); }
};

/// One checked vertex with the table cells it consumes. vertex == -1 marks
/// the root of a full witness.
struct CellAssignment {
  struct Entry {
    int vertex = -1;
    int label = -1;
    std::vector<std::pair<int, int>> cells;  // (variable, column)
  };
  std::vector<Entry> order;  // decreasing depth
};

CellAssignment cell_assignment(const EventSystem& system, const WitnessTree& tree);

enum class TCheckStatus { pass, fail, table_exhausted };

struct TCheckResult {
  TCheckStatus status = TCheckStatus::fail;
  std::vector<std::pair<int, int>> consumed;  // cells in consumption order
};

TCheckResult t_check(const EventSystem& system, const WitnessTree& tree,
                     const EvaluationTable& table);

}  // namespace lll
