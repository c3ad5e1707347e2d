// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is checked against independently computed bounds
// or brute-force oracles, never against the implementation's own output
// alone.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "lll/adapters.hpp"
#include "lll/cli.hpp"
#include "lll/parallel.hpp"

#include <filesystem>
#include <fstream>

using namespace lll;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  std::string name;
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// k = 8 instances: isolated clauses plus a few pairs sharing one variable,
// so every clause intersects at most one other and exact validation holds
// with x = 1/2 (Pr = 2^-8 <= x'^2 for x' in {1/2, 1/4}).
CnfFormula gen_instance(int idx) {
  std::mt19937_64 rng(1000 + idx);
  CnfFormula f;
  int m = 150 + 2 * idx;
  int pairs = idx % 3;
  auto fresh = [&](int count) {
    std::vector<int> vars;
    for (int j = 0; j < count; ++j) vars.push_back(++f.nvars);
    return vars;
  };
  auto add_clause = [&](const std::vector<int>& vars) {
    std::vector<int> clause;
    for (int v : vars) clause.push_back(rng() % 2 ? v : -v);
    f.clauses.push_back(clause);
  };
  for (int p = 0; p < pairs; ++p) {
    auto vars = fresh(15);  // vars[7] is shared
    add_clause({vars.begin(), vars.begin() + 8});
    add_clause({vars.begin() + 7, vars.end()});
  }
  for (int c = 2 * pairs; c < m; ++c) add_clause(fresh(8));
  return f;
}

Q q_pow4(const Q& q) { return q * q * q * q; }

PartialTable prefix_table(const EvaluationTable& table, int width, long upto) {
  PartialTable pt;
  pt.width = width;
  for (size_t p = 0; p < table.rows.size(); ++p)
    for (int col = 1; col <= width; ++col) {
      long flat = static_cast<long>(p) * width + (col - 1);
      if (flat <= upto) pt.fixed[{static_cast<int>(p), col}] = table.rows[p][col - 1];
    }
  return pt;
}

// light 14-variable event (x = 1/100) next to a disjoint heavy 2-variable
// event (x = 1/2); validation holds exactly at eps = 1
struct MixedSystem {
  EventSystem sys;
  std::vector<Q> x;
};

MixedSystem make_mixed() {
  std::vector<Variable> vars(16, fixtures::uniform_bit());
  std::vector<int> scope14;
  for (int p = 0; p < 14; ++p) scope14.push_back(p);
  std::vector<BadEvent> events = {fixtures::all_zero_event(vars, scope14),
                                  fixtures::all_zero_event(vars, {14, 15})};
  MixedSystem m;
  m.sys = build_event_system(std::move(vars), std::move(events));
  m.x = {Q(1, 100), Q(1, 2)};
  return m;
}

void pad_zero(EvaluationTable& t, int width) {
  for (auto& row : t.rows)
    while (static_cast<int>(row.size()) < width) row.push_back(0);
  t.width = width;
  t.reset_cursors();
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> sub;
  std::function<void(int)> rec = [&](int start) {
    if (!sub.empty()) fn(sub);
    if (static_cast<int>(sub.size()) == k) return;
    for (int i = start; i < n; ++i) {
      sub.push_back(i);
      rec(i + 1);
      sub.pop_back();
    }
  };
  rec(0);
}

}  // namespace

int main() {
  std::vector<Criterion> crit(13);
  crit[1].name = "deterministic k-CNF end to end";
  crit[2].name = "Phi(empty) < 1/2";
  crit[3].name = "|F| < M^(2(1+1/eps))";
  crit[4].name = "Phi monotone to zero during build";
  crit[5].name = "resample cap and light events untouched";
  crit[6].name = "T-check soundness over seeded runs";
  crit[7].name = "weight range property";
  crit[8].name = "Theorem 1 Monte Carlo bound";
  crit[9].name = "k-wise space exactness";
  crit[10].name = "parallel solver rounds and determinism";
  crit[11].name = "Phi equals the brute-force table average";
  crit[12].name = "fast path without tables";

  auto e0 = fixtures::make_e0();
  auto e0_params = derive_params(e0, {Q(1, 2)}, 1.0);

  // ---- criteria 1-5: generated instances ------------------------------
  for (int idx = 0; idx < 20; ++idx) {
    auto f = gen_instance(idx);
    auto t0 = Clock::now();
    auto adapted = cnf_event_system(f, 1.0);
    crit[1].require(adapted.validation.ok, "instance failed validation");
    if (!adapted.validation.ok) continue;
    crit[1].require(adapted.degree <= 5, "degree above 5");

    SolveResult res;
    try {
      res = solve_deterministic(adapted.system, adapted.x, 1.0, &adapted.split_trees, true);
    } catch (const std::exception& e) {
      crit[1].require(false, std::string("solve threw: ") + e.what());
      continue;
    }
    double secs = seconds_since(t0);
    crit[1].require(satisfies(f, res.assignment),
                    "assignment does not satisfy instance " + std::to_string(idx));
    crit[1].require(secs < 60.0, "instance took " + std::to_string(secs) + "s");

    crit[2].require(res.phi_empty < Q(1, 2), "Phi(empty) >= 1/2 on an instance");
    crit[3].require(Q(static_cast<long>(res.forbidden.size())) < q_pow4(res.params.M),
                    "|F| >= M^4 on an instance");

    Q prev = res.phi_empty;
    for (const auto& [cell, value] : res.phi_trace) {
      crit[4].require(value <= prev, "Phi increased during build");
      prev = value;
    }
    crit[4].require(res.phi_final == 0, "final Phi nonzero");
    if (idx < 3) {
      // independent recomputation of the traced Phi values from scratch
      size_t points = res.phi_trace.size();
      for (size_t s = 0; s < 3 && points > 0; ++s) {
        const auto& [cell, value] = res.phi_trace[s * (points - 1) / 2];
        auto pt = prefix_table(res.table, res.params.table_width(), cell);
        crit[4].require(phi(adapted.system, res.forbidden, pt) == value,
                        "traced Phi disagrees with recomputation");
      }
    }

    int cap = res.params.table_width();
    for (int a = 0; a < adapted.system.m(); ++a) {
      crit[5].require(res.run.resamples[a] <= cap, "event resampled beyond the cap");
      if (!res.params.heavy[a])
        crit[5].require(res.run.resamples[a] == 0, "light event resampled");
    }
  }

  // criterion 1: the same path through the command-line front end
  {
    auto f = gen_instance(0);
    auto dir = std::filesystem::temp_directory_path();
    auto in = dir / "acceptance_inst0.cnf";
    auto out = dir / "acceptance_inst0.json";
    std::ofstream(in) << to_dimacs(f);
    std::vector<std::string> args = {"lllforge", "solve", "--mode", "det",
                                     "--out",    out.string(), in.string()};
    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    crit[1].require(run_cli(static_cast<int>(argv.size()), argv.data()) == 0,
                    "CLI det solve exited nonzero");
  }

  // ---- criteria 2-5 on the fixed small systems ------------------------
  auto mixed = make_mixed();
  {
    auto res0 = solve_deterministic(e0, {Q(1, 2)}, 1.0);
    crit[2].require(res0.phi_empty == Q(4095, 1048576), "E0 Phi(empty) off");
    crit[2].require(std::abs(to_double(res0.phi_empty) - 4095.0 / 1048576.0) < 1e-12,
                    "E0 Phi(empty) outside 1e-12");
    crit[3].require(res0.forbidden.size() == 18, "E0 |F| != 18");
    crit[3].require(Q(18) < q_pow4(res0.params.M), "E0 |F| bound");

    // full external monotonicity replay on E0, one phi() per fixed cell
    Q prev = res0.phi_empty;
    int width = res0.params.table_width();
    for (long flat = 0; flat < 2 * width; ++flat) {
      auto pt = prefix_table(res0.table, width, flat);
      Q cur = phi(e0, res0.forbidden, pt);
      crit[4].require(cur <= prev, "E0 Phi increased at a cell");
      prev = cur;
    }
    crit[4].require(prev == 0, "E0 final Phi nonzero");

    auto resm = solve_deterministic(mixed.sys, mixed.x, 1.0);
    crit[2].require(resm.phi_empty < Q(1, 2), "mixed system Phi(empty) >= 1/2");
    crit[3].require(Q(static_cast<long>(resm.forbidden.size())) < q_pow4(resm.params.M),
                    "mixed system |F| bound");
    crit[5].require(!resm.params.heavy[0] && resm.params.heavy[1],
                    "mixed system heavy set wrong");
    crit[5].require(resm.run.resamples[0] == 0, "light event was resampled");
    crit[5].require(resm.run.resamples[1] <= resm.params.table_width(),
                    "mixed heavy event beyond cap");
  }

  // ---- criteria 6-8: seeded randomized runs ---------------------------
  auto chain5 = fixtures::make_chain5();
  auto chain5_params = derive_params(chain5, std::vector<Q>(5, Q(1, 4)), 0.4);
  {
    struct Target {
      const EventSystem* sys;
      const LLLParams* params;
    };
    std::vector<Target> targets = {{&e0, &e0_params}, {&chain5, &chain5_params}};
    long runs = 0;
    for (const auto& tgt : targets) {
      const auto& sys = *tgt.sys;
      std::vector<SplitTree> trees = default_split_trees(sys);
      for (std::uint64_t seed = 1; seed <= 600; ++seed, ++runs) {
        auto run = run_randomized(sys, seed, 100000);
        crit[6].require(run.outcome == RunOutcome::success, "seeded run did not finish");
        bool heavy_only = true;
        for (int a : run.log) heavy_only &= bool(tgt.params->heavy[a]);
        bool any_ge = false, any_in = false;
        for (int t = 1; t <= static_cast<int>(run.log.size()); ++t) {
          const auto& bt = trees[run.log[t - 1]];
          for (int node = 0; node < bt.size(); ++node) {
            auto w = construct_witness(sys, run.log, t, bt, node);
            crit[6].require(w.proper(sys), "witness not proper");
            crit[6].require(w.levels_independent(sys), "equal-depth labels adjacent");
            crit[6].require(t_check(sys, w, run.table).status == TCheckStatus::pass,
                            "T-check failed on the driving table");
            auto prod = w.weight_product(*tgt.params);
            double weight = w.weight(*tgt.params);
            if (tgt.params->weight_ge_gamma(prod, weight)) any_ge = true;
            if (tgt.params->in_window(prod, weight)) any_in = true;
          }
        }
        if (heavy_only && any_ge) crit[7].require(any_in, "no witness in [gamma, 2gamma]");
      }
    }
    crit[6].require(runs >= 1000, "fewer than 1000 seeded runs");

    // forced long heavy-only run so the criterion-7 premise actually fires
    auto zero = EvaluationTable::from_columns(
        e0, {std::vector<int>(13, 0), std::vector<int>(13, 0)});
    auto forced = run_with_table(e0, zero, 1000);
    auto bt = build_split_tree(e0, 0);
    bool any_ge = false, any_in = false;
    for (int t = 1; t <= static_cast<int>(forced.log.size()); ++t)
      for (int node = 0; node < bt.size(); ++node) {
        auto w = construct_witness(e0, forced.log, t, bt, node);
        auto prod = w.weight_product(e0_params);
        double weight = w.weight(e0_params);
        if (e0_params.weight_ge_gamma(prod, weight)) any_ge = true;
        if (e0_params.in_window(prod, weight)) any_in = true;
      }
    crit[7].require(any_ge, "forced run never reached weight gamma");
    crit[7].require(any_in, "forced run missed the window");
  }

  {
    const int seeds = 10000;
    double sum = 0, sumsq = 0;
    for (int s = 1; s <= seeds; ++s) {
      auto run = run_randomized(chain5, s, 100000);
      crit[8].require(run.outcome == RunOutcome::success, "chain run did not finish");
      sum += double(run.steps);
      sumsq += double(run.steps) * double(run.steps);
    }
    double mean = sum / seeds;
    double var = (sumsq - sum * sum / seeds) / (seeds - 1);
    double se = std::sqrt(var / seeds);
    double bound = 5.0 * (1.0 / 4) / (3.0 / 4);  // sum x/(1-x)
    crit[8].require(mean <= bound + 3 * se,
                    "mean " + std::to_string(mean) + " above bound " + std::to_string(bound));
  }

  // ---- criterion 9: k-wise spaces -------------------------------------
  {
    const int n_cells = 16;
    for (int k = 2; k <= 4; ++k) {
      auto space = build_kwise_space(n_cells, k);
      crit[9].require(space.delta == 0, "nonzero declared delta");
      std::vector<std::vector<int>> vals(space.size);
      for (std::uint64_t i = 0; i < space.size; ++i) {
        auto t = space.materialize(i);
        for (auto& row : t.rows) vals[i].push_back(row[0]);
      }
      for_each_subset(n_cells, k, [&](const std::vector<int>& sub) {
        std::vector<long> counts(size_t(1) << sub.size(), 0);
        for (const auto& v : vals) {
          int key = 0;
          for (int c : sub) key = key * 2 + v[c];
          ++counts[key];
        }
        long want = static_cast<long>(space.size >> sub.size());
        for (long c : counts) crit[9].require(c == want, "marginal not uniform");
      });
    }

    auto kw = build_kwise_space(2, 2);
    kw.reshape(2, 1);
    auto pred = [](const EvaluationTable& t) { return t.rows[0][0] == 0 && t.rows[1][0] == 0; };
    crit[9].require(verify_indistinguishability(e0, kw, pred, 2) == 0,
                    "certified depth-2 predicate deviated");
  }

  // ---- criterion 10: parallel solver ----------------------------------
  {
    auto res = solve_parallel(e0, {Q(1, 2)}, 1.0, 1, 4);
    auto res3 = solve_parallel(e0, {Q(1, 2)}, 1.0, 3, 4);
    crit[10].require(res.run.outcome == RunOutcome::success, "E0 parallel solve failed");
    crit[10].require(res.table_index == res3.table_index && res.assignment == res3.assignment,
                     "worker count changed the E0 result");

    std::vector<Variable> vars(6, fixtures::uniform_bit());
    std::vector<BadEvent> events = {fixtures::all_zero_event(vars, {0, 1}),
                                    fixtures::all_zero_event(vars, {2, 3}),
                                    fixtures::all_zero_event(vars, {4, 5})};
    auto triple = build_event_system(std::move(vars), std::move(events));
    std::vector<Q> x(3, Q(1, 2));
    auto rt = solve_parallel(triple, x, 1.0, 1, 1 << 18);
    auto rt2 = solve_parallel(triple, x, 1.0, 4, 1 << 18);
    crit[10].require(rt.run.outcome == RunOutcome::success, "triple parallel solve failed");
    crit[10].require(rt.table_index == rt2.table_index && rt.assignment == rt2.assignment,
                     "worker count changed the triple result");

    // every succeeding table in the space obeys the round bound
    int full_width = rt.params.table_width();
    int bound = static_cast<int>(std::ceil(rt.params.gamma / rt.params.w_min - 1e-9));
    bool some_success = false;
    for (std::uint64_t i = 0; i < rt.space.size; ++i) {
      auto t = rt.space.materialize(i);
      pad_zero(t, full_width);
      auto run = run_parallel_rounds(triple, t, bound);
      if (run.outcome != RunOutcome::success) continue;
      some_success = true;
      crit[10].require(run.rounds < bound, "succeeding table needed >= gamma/w_min rounds");
    }
    crit[10].require(some_success, "no table in the triple space succeeded");
    crit[10].require(rt.run.rounds < bound, "chosen table at or above the round bound");
  }

  // ---- criterion 11: brute-force oracle -------------------------------
  {
    struct Small {
      EventSystem sys;
      std::vector<Q> x;
      std::vector<std::vector<int>> leaves;
    };
    std::vector<Small> smalls;
    {
      std::vector<Variable> v2(2, fixtures::uniform_bit());
      std::vector<BadEvent> ev = {fixtures::all_zero_event(v2, {0, 1})};
      smalls.push_back({build_event_system(std::move(v2), std::move(ev)),
                        {Q(1, 4)},
                        {{0, 1}}});
      std::vector<Variable> v1(1, fixtures::uniform_bit());
      std::vector<BadEvent> ev1 = {fixtures::all_zero_event(v1, {0})};
      smalls.push_back({build_event_system(std::move(v1), std::move(ev1)),
                        {Q(1, 4)},
                        {{0}}});
    }
    for (auto& sm : smalls) {
      std::vector<SplitTree> trees = {build_split_tree(sm.sys, 0, {sm.leaves[0]})};
      std::vector<int> sizes = {trees[0].size()};
      auto params = derive_params(sm.sys, sm.x, 1.0, &sizes);
      int width = params.table_width();
      crit[11].require(width <= 4, "small system wider than 4");
      auto fset = enumerate_forbidden(sm.sys, params, trees);
      Q claimed = phi(sm.sys, fset, PartialTable{{}, width});

      int cells = sm.sys.n() * width;
      Q average = 0;
      for (long mask = 0; mask < (1L << cells); ++mask) {
        PartialTable full;
        full.width = width;
        for (int c = 0; c < cells; ++c)
          full.fixed[{c / width, c % width + 1}] = (mask >> c) & 1;
        Q count = 0;
        for (size_t w = 0; w < fset.size(); ++w)
          count += consistency_probability(sm.sys, fset.at(w), full);
        average += count;
      }
      average /= Q(1L << cells);
      crit[11].require(claimed == average, "Phi differs from the exhaustive average");
    }
  }

  // ---- criterion 12: fast path ----------------------------------------
  {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 10; ++rep) {
      CnfFormula f;
      f.nvars = 60;
      int m = 100 + int(rng() % 29);  // m * 2^-8 <= 1/2
      for (int c = 0; c < m; ++c) {
        std::vector<int> vars;
        while (vars.size() < 8) {
          int v = 1 + int(rng() % f.nvars);
          if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        std::vector<int> clause;
        for (int v : vars) clause.push_back(rng() % 2 ? v : -v);
        f.clauses.push_back(clause);
      }
      auto assign = fast_path_satisfy(f);
      crit[12].require(assign.has_value(), "fast path declined an eligible formula");
      if (assign) crit[12].require(satisfies(f, *assign), "fast path assignment unsatisfying");
    }
  }

  int failed = 0;
  for (int i = 1; i <= 12; ++i) {
    if (crit[i].ok) {
      std::printf("criterion %2d (%s): PASS\n", i, crit[i].name.c_str());
    } else {
      std::printf("criterion %2d (%s): FAIL - %s\n", i, crit[i].name.c_str(),
                  crit[i].detail.c_str());
      ++failed;
    }
  }
  return failed;
}
