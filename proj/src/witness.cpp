#include "lll/witness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace lll {

namespace {

void build_balanced(SplitTree& tree, const std::vector<std::vector<int>>& leaves, int lo, int hi,
                    int node) {
  std::vector<int> vars;
  for (int i = lo; i < hi; ++i) vars.insert(vars.end(), leaves[i].begin(), leaves[i].end());
  std::sort(vars.begin(), vars.end());
  tree.nodes[node].vars = std::move(vars);
  if (hi - lo == 1) return;
  int mid = lo + (hi - lo + 1) / 2;  // extra leaf goes left
  int l = tree.size(), r = tree.size() + 1;
  tree.nodes[node].left = l;
  tree.nodes[node].right = r;
  tree.nodes.emplace_back();
  tree.nodes.emplace_back();
  build_balanced(tree, leaves, lo, mid, l);
  build_balanced(tree, leaves, mid, hi, r);
}

}  // namespace

SplitTree build_split_tree(const EventSystem& system, int event_id,
                           const std::vector<std::vector<int>>& leaf_partition) {
  const auto& scope = system.events.at(event_id).scope;
  std::multiset<int> covered;
  for (const auto& leaf : leaf_partition) {
    if (leaf.empty()) throw input_error("empty leaf in split tree partition");
    covered.insert(leaf.begin(), leaf.end());
  }
  std::multiset<int> want(scope.begin(), scope.end());
  if (covered != want) throw input_error("leaf partition does not partition vbl(A)");

  std::vector<std::vector<int>> leaves = leaf_partition;
  for (auto& l : leaves) std::sort(l.begin(), l.end());
  std::sort(leaves.begin(), leaves.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  SplitTree tree;
  tree.owner = event_id;
  tree.nodes.emplace_back();
  build_balanced(tree, leaves, 0, static_cast<int>(leaves.size()), 0);
  return tree;
}

SplitTree build_split_tree(const EventSystem& system, int event_id) {
  std::vector<std::vector<int>> singles;
  for (int p : system.events.at(event_id).scope) singles.push_back({p});
  return build_split_tree(system, event_id, singles);
}

double WitnessTree::weight(const LLLParams& params) const {
  double w = 0;
  for (const auto& v : vertices) w += params.w[v.label];
  return w;
}

Q WitnessTree::weight_product(const LLLParams& params) const {
  Q prod = 1;
  for (const auto& v : vertices) prod *= params.x_prime[v.label];
  return prod;
}

bool WitnessTree::proper(const EventSystem&) const {
  std::map<int, std::set<int>> children;  // parent -> labels
  for (const auto& v : vertices)
    if (!children[v.parent].insert(v.label).second) return false;
  return true;
}

bool WitnessTree::levels_independent(const EventSystem& system) const {
  std::map<int, std::vector<int>> by_depth;
  for (const auto& v : vertices) by_depth[v.depth].push_back(v.label);
  for (const auto& [d, labels] : by_depth) {
    for (size_t i = 0; i < labels.size(); ++i)
      for (size_t j = i + 1; j < labels.size(); ++j)
        if (labels[i] == labels[j] || system.adjacent(labels[i], labels[j])) return false;
  }
  return true;
}

std::string WitnessTree::canonical_string() const {
  std::vector<std::vector<int>> children(vertices.size() + 1);
  for (size_t i = 0; i < vertices.size(); ++i)
    children[vertices[i].parent + 1].push_back(static_cast<int>(i));
  std::function<std::string(int)> render = [&](int slot) -> std::string {
    std::vector<std::string> parts;
    for (int c : children[slot + 1]) {
      std::ostringstream os;
      os << "E" << vertices[c].label << render(c);
      parts.push_back(os.str());
    }
    std::sort(parts.begin(), parts.end());
    if (parts.empty()) return "";
    std::string out = "(";
    for (size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    return out + ")";
  };
  std::ostringstream os;
  if (full) {
    os << "E" << root_event;
  } else {
    os << "S{";
    for (size_t i = 0; i < root_vars.size(); ++i) os << (i ? "," : "") << "p" << root_vars[i];
    os << "}";
  }
  os << render(-1);
  return os.str();
}

WitnessTree construct_witness(const EventSystem& system, const EventLog& log, int t,
                              const SplitTree& split_tree, int node_index) {
  if (t < 1 || t > static_cast<int>(log.size())) throw input_error("witness step out of range");
  if (split_tree.owner != log[t - 1])
    throw input_error("split tree does not belong to the event at step t");
  if (node_index < 0 || node_index >= split_tree.size())
    throw input_error("S not in the split tree of C(t)");
  const auto& S = split_tree.nodes[node_index].vars;

  WitnessTree tree;
  tree.root_event = log[t - 1];
  tree.root_vars = S;
  tree.full = S == system.events[tree.root_event].scope;

  auto intersects = [](const std::vector<int>& a, const std::vector<int>& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return true;
      a[i] < b[j] ? ++i : ++j;
    }
    return false;
  };

  for (int i = t - 1; i >= 1; --i) {
    int e = log[i - 1];
    // Deepest vertex whose label neighborhood contains e; ties to the
    // earliest-attached vertex.
    int best = -1;
    for (size_t v = 0; v < tree.vertices.size(); ++v) {
      int lbl = tree.vertices[v].label;
      if (lbl != e && !system.adjacent(lbl, e)) continue;
      if (best == -1 || tree.vertices[v].depth > tree.vertices[best].depth) best = static_cast<int>(v);
    }
    WitnessTree::Vertex nv;
    nv.label = e;
    if (best >= 0) {
      nv.parent = best;
      nv.depth = tree.vertices[best].depth + 1;
    } else if (intersects(system.events[e].scope, S)) {
      nv.parent = -1;
      nv.depth = 1;
    } else {
      continue;
    }
    tree.vertices.push_back(nv);
  }
  return tree;
}

EvaluationTable EvaluationTable::from_columns(const EventSystem& system,
                                              const std::vector<std::vector<int>>& columns) {
  EvaluationTable t;
  t.rows.resize(system.n());
  if (static_cast<int>(columns.size()) != system.n())
    throw input_error("table rows do not cover all variables");
  t.rows = columns;
  t.width = 0;
  for (const auto& r : t.rows) t.width = std::max<int>(t.width, static_cast<int>(r.size()));
  t.reset_cursors();
  return t;
}

int EvaluationTable::value_at(int var, int col) const {
  const auto& row = rows.at(var);
  if (col < 1 || col > static_cast<int>(row.size()))
    throw internal_error("table column out of range");
  return row[col - 1];
}

CellAssignment cell_assignment(const EventSystem& system, const WitnessTree& tree) {
  struct Item {
    int vertex;
    int label;
    int depth;
    int creation;
  };
  std::vector<Item> items;
  for (size_t i = 0; i < tree.vertices.size(); ++i)
    items.push_back({static_cast<int>(i), tree.vertices[i].label, tree.vertices[i].depth,
                     static_cast<int>(i)});
  if (tree.full) items.push_back({-1, tree.root_event, 0, static_cast<int>(tree.vertices.size())});
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.depth != b.depth) return a.depth > b.depth;
    if (a.label != b.label) return a.label < b.label;
    return a.creation < b.creation;
  });

  CellAssignment assign;
  std::map<int, int> cursor;  // variable -> next column
  for (const auto& it : items) {
    CellAssignment::Entry e;
    e.vertex = it.vertex;
    e.label = it.label;
    for (int p : system.events[it.label].scope) {
      int& c = cursor[p];
      if (c == 0) c = 1;
      e.cells.emplace_back(p, c);
      ++c;
    }
    assign.order.push_back(std::move(e));
  }
  return assign;
}

TCheckResult t_check(const EventSystem& system, const WitnessTree& tree,
                     const EvaluationTable& table) {
  auto assign = cell_assignment(system, tree);
  TCheckResult res;
  for (const auto& e : assign.order) {
    ScopeValues vals;
    for (auto [p, col] : e.cells) {
      if (col > static_cast<int>(table.rows[p].size())) {
        res.status = TCheckStatus::table_exhausted;
        return res;
      }
      vals.push_back(table.value_at(p, col));
      res.consumed.emplace_back(p, col);
    }
    if (!system.events[e.label].happens(vals)) {
      res.status = TCheckStatus::fail;
      return res;
    }
  }
  res.status = TCheckStatus::pass;
  return res;
}

}  // namespace lll
