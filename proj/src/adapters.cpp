#include "lll/adapters.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace lll {

int CnfFormula::max_width() const {
  size_t k = 0;
  for (const auto& c : clauses) k = std::max(k, c.size());
  return static_cast<int>(k);
}

namespace {

std::vector<std::vector<int>> clause_scopes(const CnfFormula& f) {
  std::vector<std::vector<int>> scopes;
  for (const auto& c : f.clauses) {
    std::vector<int> s;
    for (int lit : c) s.push_back(std::abs(lit) - 1);
    std::sort(s.begin(), s.end());
    scopes.push_back(std::move(s));
  }
  return scopes;
}

int degree_of_scopes(const std::vector<std::vector<int>>& scopes, int nvars) {
  std::vector<std::vector<int>> by_var(nvars);
  for (size_t i = 0; i < scopes.size(); ++i)
    for (int v : scopes[i]) by_var[v].push_back(static_cast<int>(i));
  int d = 0;
  std::vector<std::set<int>> nb(scopes.size());
  for (const auto& evs : by_var)
    for (int a : evs)
      for (int b : evs)
        if (a != b) nb[a].insert(b);
  for (const auto& s : nb) d = std::max(d, static_cast<int>(s.size()));
  return d;
}

}  // namespace

int CnfFormula::degree() const { return degree_of_scopes(clause_scopes(*this), nvars); }

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CnfFormula f;
  long nclauses = -1;
  std::vector<int> pending;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, fmt;
      hs >> p >> fmt >> f.nvars >> nclauses;
      if (hs.fail() || fmt != "cnf" || f.nvars < 0 || nclauses < 0)
        throw input_error("malformed DIMACS header");
      continue;
    }
    if (nclauses < 0) throw input_error("clause before DIMACS header");
    std::istringstream ls(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        std::set<int> vars;
        for (int l : pending)
          if (!vars.insert(std::abs(l)).second)
            throw input_error("clause repeats a variable");
        if (pending.empty()) throw input_error("empty clause");
        f.clauses.push_back(pending);
        pending.clear();
      } else {
        if (std::abs(lit) > f.nvars) throw input_error("literal out of range");
        pending.push_back(lit);
      }
    }
    if (ls.fail() && !ls.eof()) throw input_error("non-integer token in clause");
  }
  if (!pending.empty()) throw input_error("unterminated clause");
  if (nclauses < 0) throw input_error("missing DIMACS header");
  if (static_cast<long>(f.clauses.size()) != nclauses)
    throw input_error("clause count does not match header");
  return f;
}

std::string to_dimacs(const CnfFormula& formula) {
  std::ostringstream os;
  os << "p cnf " << formula.nvars << " " << formula.clauses.size() << "\n";
  for (const auto& c : formula.clauses) {
    for (int lit : c) os << lit << " ";
    os << "0\n";
  }
  return os.str();
}

namespace {

std::vector<Q> uniform_x(int m, int d) {
  Q x = d == 0 ? Q(1, 2) : Q(1, d + 1);
  return std::vector<Q>(m, x);
}

/// Leaves of the split tree group scope variables that appear in exactly
/// the same set of events; at most |scope| groups, usually far fewer, so
/// |B_A| = 2 * groups - 1 < 2k.
std::vector<SplitTree> cover_split_trees(const EventSystem& sys,
                                         const std::vector<std::vector<int>>& by_var,
                                         bool clique_cover) {
  std::vector<SplitTree> trees;
  for (int a = 0; a < sys.m(); ++a) {
    if (!clique_cover) {
      trees.push_back(build_split_tree(sys, a));
      continue;
    }
    std::map<std::vector<int>, std::vector<int>> groups;
    for (int p : sys.events[a].scope) groups[by_var[p]].push_back(p);
    std::vector<std::vector<int>> leaves;
    for (auto& [key, vars] : groups) leaves.push_back(vars);
    trees.push_back(build_split_tree(sys, a, leaves));
  }
  return trees;
}

AdaptedSystem finish_adapted(EventSystem sys, double epsilon, bool clique_cover, int d) {
  AdaptedSystem out;
  out.degree = d;
  out.x = uniform_x(sys.m(), d);
  std::vector<std::vector<int>> by_var(sys.n());
  for (int a = 0; a < sys.m(); ++a)
    for (int p : sys.events[a].scope) by_var[p].push_back(a);
  out.split_trees = cover_split_trees(sys, by_var, clique_cover);
  out.validation = validate_lll_condition(sys, out.x, epsilon);
  out.system = std::move(sys);
  return out;
}

}  // namespace

AdaptedSystem cnf_event_system(const CnfFormula& formula, double epsilon, bool clique_cover) {
  std::vector<Variable> vars(formula.nvars);
  for (auto& v : vars) v.probs = {Q(1, 2), Q(1, 2)};

  auto scopes = clause_scopes(formula);
  std::vector<BadEvent> events;
  for (size_t i = 0; i < formula.clauses.size(); ++i) {
    BadEvent e;
    e.scope = scopes[i];
    // sign per scope position; value 1 = true
    std::vector<int> sign(e.scope.size());
    for (int lit : formula.clauses[i]) {
      int pos = static_cast<int>(std::lower_bound(e.scope.begin(), e.scope.end(),
                                                  std::abs(lit) - 1) -
                                 e.scope.begin());
      sign[pos] = lit > 0 ? 1 : 0;
    }
    e.happens = [sign](const ScopeValues& vals) {
      for (size_t j = 0; j < vals.size(); ++j)
        if (vals[j] == sign[j]) return false;
      return true;
    };
    e.cond_prob = [sign](const ScopeValues& vals) -> Q {
      int unfixed = 0;
      for (size_t j = 0; j < vals.size(); ++j) {
        if (vals[j] == kUnset)
          ++unfixed;
        else if (vals[j] == sign[j])
          return 0;
      }
      return Q(1, BigInt(1) << unfixed);
    };
    events.push_back(std::move(e));
  }
  auto sys = build_event_system(std::move(vars), std::move(events));
  return finish_adapted(std::move(sys), epsilon, clique_cover, formula.degree());
}

int Hypergraph::uniformity() const {
  size_t k = 0;
  for (const auto& e : edges) k = std::max(k, e.size());
  return static_cast<int>(k);
}

int Hypergraph::degree() const {
  std::vector<std::vector<int>> scopes;
  for (const auto& e : edges) {
    std::vector<int> s;
    for (int v : e) s.push_back(v - 1);
    std::sort(s.begin(), s.end());
    scopes.push_back(std::move(s));
  }
  return degree_of_scopes(scopes, nverts);
}

Hypergraph parse_hypergraph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Hypergraph g;
  long nedges = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'h') {
      std::istringstream hs(line);
      std::string h;
      hs >> h >> g.nverts >> nedges;
      if (hs.fail() || g.nverts < 0 || nedges < 0) throw input_error("malformed hypergraph header");
      continue;
    }
    if (nedges < 0) throw input_error("edge before hypergraph header");
    std::istringstream ls(line);
    std::vector<int> edge;
    int v;
    while (ls >> v) {
      if (v < 1 || v > g.nverts) throw input_error("vertex out of range");
      edge.push_back(v);
    }
    if (ls.fail() && !ls.eof()) throw input_error("non-integer token in edge");
    if (edge.empty()) throw input_error("empty edge");
    std::set<int> uniq(edge.begin(), edge.end());
    if (uniq.size() != edge.size()) throw input_error("edge repeats a vertex");
    g.edges.push_back(std::move(edge));
  }
  if (nedges < 0) throw input_error("missing hypergraph header");
  if (static_cast<long>(g.edges.size()) != nedges)
    throw input_error("edge count does not match header");
  return g;
}

std::string to_hypergraph(const Hypergraph& graph) {
  std::ostringstream os;
  os << "h " << graph.nverts << " " << graph.edges.size() << "\n";
  for (const auto& e : graph.edges) {
    for (size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
    os << "\n";
  }
  return os.str();
}

AdaptedSystem hypergraph2color_event_system(const Hypergraph& graph, double epsilon,
                                            bool clique_cover) {
  std::vector<Variable> vars(graph.nverts);
  for (auto& v : vars) v.probs = {Q(1, 2), Q(1, 2)};

  std::vector<BadEvent> events;
  for (const auto& edge : graph.edges) {
    BadEvent e;
    for (int v : edge) e.scope.push_back(v - 1);
    std::sort(e.scope.begin(), e.scope.end());
    e.happens = [](const ScopeValues& vals) {
      for (int v : vals)
        if (v != vals[0]) return false;
      return true;
    };
    e.cond_prob = [](const ScopeValues& vals) -> Q {
      int unfixed = 0, seen = 0;  // bitmask of colors seen
      for (int v : vals) {
        if (v == kUnset)
          ++unfixed;
        else
          seen |= 1 << v;
      }
      if (seen == 3) return 0;
      if (seen != 0) return Q(1, BigInt(1) << unfixed);
      return unfixed == 1 ? Q(1) : Q(2, BigInt(1) << unfixed);
    };
    events.push_back(std::move(e));
  }
  auto sys = build_event_system(std::move(vars), std::move(events));
  return finish_adapted(std::move(sys), epsilon, clique_cover, graph.degree());
}

std::optional<std::vector<int>> fast_path_satisfy(const CnfFormula& formula) {
  Q expect = 0;
  for (const auto& c : formula.clauses) expect += Q(1, BigInt(1) << c.size());
  if (expect >= 1) return std::nullopt;

  std::vector<int> assign(formula.nvars, kUnset);
  auto expected_unsat = [&]() -> Q {
    Q e = 0;
    for (const auto& c : formula.clauses) {
      bool sat = false;
      int unfixed = 0;
      for (int lit : c) {
        int v = assign[std::abs(lit) - 1];
        if (v == kUnset)
          ++unfixed;
        else if ((lit > 0) == (v == 1))
          sat = true;
      }
      if (!sat) e += Q(1, BigInt(1) << unfixed);
    }
    return e;
  };
  for (int p = 0; p < formula.nvars; ++p) {
    assign[p] = 0;
    Q e0 = expected_unsat();
    assign[p] = 1;
    Q e1 = expected_unsat();
    if (e0 <= e1) assign[p] = 0;
  }
  if (!satisfies(formula, assign))
    throw internal_error("conditional probability path missed a satisfying assignment");
  return assign;
}

bool satisfies(const CnfFormula& formula, const std::vector<int>& assignment) {
  for (const auto& c : formula.clauses) {
    bool sat = false;
    for (int lit : c)
      if ((lit > 0) == (assignment[std::abs(lit) - 1] == 1)) sat = true;
    if (!sat) return false;
  }
  return true;
}

bool properly_colored(const Hypergraph& graph, const std::vector<int>& colors) {
  for (const auto& e : graph.edges) {
    if (e.size() < 2) continue;
    bool mono = true;
    for (int v : e)
      if (colors[v - 1] != colors[e[0] - 1]) mono = false;
    if (mono) return false;
  }
  return true;
}

}  // namespace lll

