#include "lll/derand.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lll {

namespace {

struct nondyadic_error : internal_error {
  using internal_error::internal_error;
};

}  // namespace

std::vector<SplitTree> default_split_trees(const EventSystem& system) {
  std::vector<SplitTree> trees;
  trees.reserve(system.m());
  for (int a = 0; a < system.m(); ++a) trees.push_back(build_split_tree(system, a));
  return trees;
}

namespace {

/// DFS over proper witness shapes: children of each vertex are chosen as an
/// increasing-label subset of its allowed set, a child's subtree is
/// completed before the next sibling is considered, and branches whose
/// weight already exceeds 2*gamma are cut. Every proper tree is produced
/// exactly once, in a fixed order.
class ForbiddenEnumerator {
 public:
  ForbiddenEnumerator(const EventSystem& system, const LLLParams& params,
                      const std::vector<SplitTree>& split_trees, ForbiddenSet& out,
                      bool independence_filter)
      : sys_(system), par_(params), trees_(split_trees), out_(out),
        filter_(independence_filter) {
    bound_ = 2.0 * (1.0 + 1.0 / par_.epsilon) * log2_q(par_.M);
    heavy_nb_.resize(sys_.m());
    for (int b = 0; b < sys_.m(); ++b) {
      if (!par_.heavy[b]) continue;
      heavy_nb_[b].push_back(b);
      for (int c : sys_.gamma[b])
        if (par_.heavy[c]) heavy_nb_[b].push_back(c);
      std::sort(heavy_nb_[b].begin(), heavy_nb_[b].end());
    }
  }

  void run() {
    for (int a = 0; a < sys_.m(); ++a) {
      if (par_.heavy[a]) continue;
      ForbiddenWitness w;
      w.tree.full = true;
      w.tree.root_event = a;
      w.tree.root_vars = sys_.events[a].scope;
      w.cells = cell_assignment(sys_, w.tree);
      out_.f1.push_back(std::move(w));
    }
    // the same subset can be a node of several events' split trees; a
    // partial witness is identified by its root subset, so visit each
    // distinct subset once (first owner in (event, node) order)
    std::set<std::vector<int>> seen_roots;
    for (int a : par_.heavy_ids) {
      const auto& bt = trees_.at(a);
      if (bt.owner != a) throw input_error("split tree owner mismatch");
      for (int node = 0; node < bt.size(); ++node) {
        if (!seen_roots.insert(bt.nodes[node].vars).second) continue;
        root_event_ = a;
        root_vars_ = bt.nodes[node].vars;
        root_allowed_.clear();
        for (int b = 0; b < sys_.m(); ++b)
          if (par_.heavy[b] && intersects(sys_.events[b].scope, root_vars_))
            root_allowed_.push_back(b);
        pending_.push_back({-1, 0});
        rec();
        pending_.pop_back();
      }
    }
  }

 private:
  // equal-depth labels must form an independent set; pruning at insertion
  // is exact because later growth never repairs a same-level conflict
  bool level_free(int parent, int lbl) const {
    if (!filter_) return true;
    int depth = parent < 0 ? 1 : verts_[parent].depth + 1;
    for (const auto& u : verts_) {
      if (u.depth != depth) continue;
      if (u.label == lbl || sys_.adjacent(u.label, lbl)) return false;
    }
    return true;
  }

  static bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) return true;
      a[i] < b[j] ? ++i : ++j;
    }
    return false;
  }

  void record() {
    WitnessTree tree;
    tree.full = false;
    tree.root_event = root_event_;
    tree.root_vars = root_vars_;
    tree.vertices = verts_;
    Q prod = tree.weight_product(par_);
    if (!par_.in_window(prod, weight_)) return;
    ForbiddenWitness w;
    w.tree = std::move(tree);
    w.cells = cell_assignment(sys_, w.tree);
    out_.f2.push_back(std::move(w));
    double count = static_cast<double>(out_.size());
    if (std::log2(count) >= bound_)
      throw internal_error("forbidden witness count exceeds M^{2(1+1/eps)}");
  }

  void rec() {
    if (pending_.empty()) {
      record();
      return;
    }
    auto [v, i] = pending_.back();
    const auto& allowed = v < 0 ? root_allowed_ : heavy_nb_[verts_[v].label];
    if (i >= static_cast<int>(allowed.size())) {
      auto saved = pending_.back();
      pending_.pop_back();
      rec();
      pending_.push_back(saved);
      return;
    }
    pending_.back().second = i + 1;
    rec();  // skip label i
    int lbl = allowed[i];
    double w = par_.w[lbl];
    if (weight_ + w <= 2.0 * par_.gamma + 1e-6 && level_free(v, lbl)) {
      verts_.push_back({lbl, v, v < 0 ? 1 : verts_[v].depth + 1});
      weight_ += w;
      pending_.push_back({static_cast<int>(verts_.size()) - 1, 0});
      rec();
      pending_.pop_back();
      weight_ -= w;
      verts_.pop_back();
    }
    pending_.back().second = i;
  }

  const EventSystem& sys_;
  const LLLParams& par_;
  const std::vector<SplitTree>& trees_;
  ForbiddenSet& out_;
  std::vector<std::vector<int>> heavy_nb_;
  std::vector<int> root_allowed_;
  std::vector<int> root_vars_;
  int root_event_ = -1;
  std::vector<WitnessTree::Vertex> verts_;
  std::vector<std::pair<int, int>> pending_;
  double weight_ = 0;
  double bound_ = 0;
  bool filter_ = false;
};

}  // namespace

ForbiddenSet enumerate_forbidden(const EventSystem& system, const LLLParams& params,
                                 const std::vector<SplitTree>& split_trees,
                                 bool independence_filter) {
  ForbiddenSet out;
  ForbiddenEnumerator(system, params, split_trees, out, independence_filter).run();
  return out;
}

Q consistency_probability(const EventSystem& system, const ForbiddenWitness& witness,
                          const PartialTable& partial) {
  Q prod = 1;
  for (const auto& entry : witness.cells.order) {
    ScopeValues vals(entry.cells.size(), kUnset);
    for (size_t i = 0; i < entry.cells.size(); ++i) {
      auto it = partial.fixed.find(entry.cells[i]);
      if (it != partial.fixed.end()) vals[i] = it->second;
    }
    prod *= system.events[entry.label].cond_prob(vals);
    if (prod == 0) break;
  }
  return prod;
}

Q phi(const EventSystem& system, const ForbiddenSet& fset, const PartialTable& partial) {
  Q sum = 0;
  for (size_t i = 0; i < fset.size(); ++i)
    sum += consistency_probability(system, fset.at(i), partial);
  return sum;
}

namespace {

template <typename Num>
Num num_from_q(const Q& q);

template <>
Dyadic num_from_q<Dyadic>(const Q& q) {
  if (!is_dyadic(q)) throw nondyadic_error("non-dyadic conditional probability");
  return Dyadic::from_q(q);
}

template <>
Q num_from_q<Q>(const Q& q) {
  return q;
}

Q num_to_q(const Dyadic& d) { return d.to_q(); }
Q num_to_q(const Q& q) { return q; }

/// Incremental conditional-expectation engine: per checked vertex we keep
/// the partial scope assignment induced by fixed cells and its conditional
/// probability; Phi updates touch only the witnesses incident to the cell
/// being fixed. Witnesses with a zero factor stay zero forever and are
/// dropped from the hot loop.
template <typename Num>
BuildResult build_table_impl(const EventSystem& system, const LLLParams& params,
                             const ForbiddenSet& fset) {
  const int n = system.n();
  const int width = params.table_width();
  const size_t count = fset.size();

  struct EntryState {
    int label;
    ScopeValues partial;
    Num factor;
  };
  struct WitnessState {
    std::vector<EntryState> entries;
    int zero_count = 0;
  };
  std::vector<WitnessState> state(count);

  struct Incidence {
    int witness;
    int entry;
    int pos;  // scope position == cell index within the entry
  };
  std::vector<std::vector<Incidence>> incidence(static_cast<size_t>(n) * width);
  auto cell_index = [&](int p, int col) { return static_cast<size_t>(p) * width + (col - 1); };

  Num phi_total{};
  for (size_t wi = 0; wi < count; ++wi) {
    const auto& fw = fset.at(wi);
    auto& ws = state[wi];
    Num prod = num_from_q<Num>(Q(1));
    for (size_t ei = 0; ei < fw.cells.order.size(); ++ei) {
      const auto& entry = fw.cells.order[ei];
      EntryState es;
      es.label = entry.label;
      es.partial.assign(entry.cells.size(), kUnset);
      es.factor = num_from_q<Num>(system.events[entry.label].cond_prob(es.partial));
      if (es.factor == Num{}) ++ws.zero_count;
      prod = prod * es.factor;
      for (size_t ci = 0; ci < entry.cells.size(); ++ci) {
        auto [p, col] = entry.cells[ci];
        if (col > width)
          throw internal_error("forbidden witness cell beyond table width");
        incidence[cell_index(p, col)].push_back(
            {static_cast<int>(wi), static_cast<int>(ei), static_cast<int>(ci)});
      }
      ws.entries.push_back(std::move(es));
    }
    phi_total = phi_total + prod;
  }
  BuildResult result;
  result.phi_empty = num_to_q(phi_total);

  auto rest_product = [&](const WitnessState& ws, int skip_entry) -> Num {
    Num prod = num_from_q<Num>(Q(1));
    for (size_t e = 0; e < ws.entries.size(); ++e) {
      if (static_cast<int>(e) == skip_entry) continue;
      if (ws.entries[e].factor == Num{}) return Num{};
      prod = prod * ws.entries[e].factor;
    }
    return prod;
  };

  result.table.rows.assign(n, {});
  for (int p = 0; p < n; ++p) {
    const auto& var = system.variables[p];
    for (int col = 1; col <= width; ++col) {
      const auto& inc = incidence[cell_index(p, col)];
      int best_value = 0;
      Num best_delta{};
      bool have_best = false;
      std::vector<Num> new_factors(inc.size());
      std::vector<Num> best_factors;
      for (int d = 0; d < var.domain_size(); ++d) {
        Num delta{};
        for (size_t ii = 0; ii < inc.size(); ++ii) {
          auto& ws = state[inc[ii].witness];
          auto& es = ws.entries[inc[ii].entry];
          if (ws.zero_count > (es.factor == Num{} ? 1 : 0)) {
            new_factors[ii] = es.factor;  // dead witness, factor change irrelevant
            continue;
          }
          es.partial[inc[ii].pos] = d;
          Num nf = num_from_q<Num>(system.events[es.label].cond_prob(es.partial));
          es.partial[inc[ii].pos] = kUnset;
          new_factors[ii] = nf;
          if (nf == es.factor) continue;
          delta = delta + rest_product(ws, inc[ii].entry) * (nf - es.factor);
        }
        if (!have_best || delta < best_delta) {
          have_best = true;
          best_delta = delta;
          best_value = d;
          best_factors = new_factors;
        }
      }
      // Law of total expectation: the minimizing value cannot increase Phi.
      if (Num{} < best_delta)
        throw internal_error("conditional expectation increased while fixing a cell");
      for (size_t ii = 0; ii < inc.size(); ++ii) {
        auto& ws = state[inc[ii].witness];
        auto& es = ws.entries[inc[ii].entry];
        es.partial[inc[ii].pos] = best_value;
        if (es.factor == Num{} && !(best_factors[ii] == Num{})) --ws.zero_count;
        if (!(es.factor == Num{}) && best_factors[ii] == Num{}) ++ws.zero_count;
        es.factor = best_factors[ii];
      }
      if (!(best_delta == Num{})) {
        phi_total = phi_total + best_delta;
        result.phi_trace.push_back(
            {static_cast<long>(cell_index(p, col)), num_to_q(phi_total)});
      }
      result.table.rows[p].push_back(best_value);
    }
  }

  result.phi_final = num_to_q(phi_total);
  if (result.phi_empty < 1 && result.phi_final != 0)
    throw internal_error("final Phi is not zero despite Phi(empty) < 1");
  result.table.width = width;
  result.table.reset_cursors();
  return result;
}

}  // namespace

BuildResult build_table(const EventSystem& system, const LLLParams& params,
                        const ForbiddenSet& fset) {
  if (system.all_dyadic()) {
    try {
      return build_table_impl<Dyadic>(system, params, fset);
    } catch (const nondyadic_error&) {
      // An oracle produced a non power-of-two denominator; redo in Q.
    }
  }
  return build_table_impl<Q>(system, params, fset);
}

SolveResult solve_deterministic(const EventSystem& system, const std::vector<Q>& x,
                                double epsilon, const std::vector<SplitTree>* split_trees,
                                bool independence_filter) {
  auto report = validate_lll_condition(system, x, epsilon);
  if (!report.ok) throw validation_error("LLL epsilon-slack condition violated");

  SolveResult res;
  std::vector<SplitTree> owned;
  if (split_trees) {
    // caller-picked trees (e.g. clique covers) shrink the M sum
    std::vector<int> sizes;
    for (const auto& t : *split_trees) sizes.push_back(t.size());
    res.params = derive_params(system, x, epsilon, &sizes);
  } else {
    owned = default_split_trees(system);
    split_trees = &owned;
    res.params = derive_params(system, x, epsilon);
  }
  res.forbidden = enumerate_forbidden(system, res.params, *split_trees, independence_filter);
  auto built = build_table(system, res.params, res.forbidden);
  res.phi_empty = built.phi_empty;
  res.phi_final = built.phi_final;
  res.phi_trace = std::move(built.phi_trace);
  res.table = std::move(built.table);
  res.run = run_with_table(system, res.table, default_max_steps(system, res.params));
  if (res.run.outcome != RunOutcome::success)
    throw internal_error("deterministic run did not terminate within the resample cap");
  res.assignment = res.run.assignment;
  return res;
}

}  // namespace lll
