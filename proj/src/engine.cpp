#include "lll/engine.hpp"

#include <algorithm>
#include <random>

namespace lll {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-variable deterministic value stream: column j of variable p depends
/// only on (seed, p, j), never on consumption order.
struct VariableStream {
  std::mt19937_64 rng;
  std::vector<double> cum;

  VariableStream(const Variable& var, std::uint64_t seed) {
    rng.seed(splitmix64(seed ^ (0xA5A5A5A5A5A5A5A5ULL + 0x9E3779B97F4A7C15ULL *
                                                            (std::uint64_t(var.id) + 1))));
    double acc = 0;
    for (const auto& p : var.probs) {
      acc += to_double(p);
      cum.push_back(acc);
    }
    cum.back() = 1.0;
  }

  int draw() {
    double u = double(rng() >> 11) * (1.0 / 9007199254740992.0);
    return static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin() +
                            (u >= cum.back() ? -1 : 0));
  }
};

template <typename ValueAt>
RunReport run_core(const EventSystem& system, ValueAt&& value_at, long max_steps) {
  RunReport rep;
  rep.resamples.assign(system.m(), 0);
  std::vector<int> cursor(system.n(), 1);
  std::vector<int> current(system.n());
  bool exhausted_table = false;
  for (int p = 0; p < system.n(); ++p) {
    auto v = value_at(p, 1);
    if (!v) {
      exhausted_table = true;
      break;
    }
    current[p] = *v;
  }

  auto happening = [&](int a) {
    const auto& e = system.events[a];
    ScopeValues vals;
    vals.reserve(e.scope.size());
    for (int p : e.scope) vals.push_back(current[p]);
    return e.happens(vals);
  };

  while (!exhausted_table) {
    int pick = -1;
    for (int a = 0; a < system.m() && pick < 0; ++a)
      if (happening(a)) pick = a;
    if (pick < 0) {
      rep.outcome = RunOutcome::success;
      break;
    }
    if (rep.steps >= max_steps) {
      rep.outcome = RunOutcome::exhausted;
      break;
    }
    ++rep.steps;
    rep.log.push_back(pick);
    ++rep.resamples[pick];
    for (int p : system.events[pick].scope) {
      ++cursor[p];
      auto v = value_at(p, cursor[p]);
      if (!v) {
        exhausted_table = true;
        break;
      }
      current[p] = *v;
    }
  }
  if (exhausted_table) rep.outcome = RunOutcome::table_exhausted;
  rep.assignment = current;
  rep.cells_consumed = cursor;
  return rep;
}

}  // namespace

RunReport run_with_table(const EventSystem& system, const EvaluationTable& table,
                         long max_steps) {
  if (static_cast<int>(table.rows.size()) != system.n())
    throw input_error("table rows do not cover all variables");
  auto rep = run_core(
      system,
      [&](int p, int col) -> std::optional<int> {
        if (col > static_cast<int>(table.rows[p].size())) return std::nullopt;
        return table.rows[p][col - 1];
      },
      max_steps);
  rep.table = table;
  rep.table.cursors = rep.cells_consumed;
  return rep;
}

RunReport run_randomized(const EventSystem& system, std::uint64_t seed, long max_steps) {
  std::vector<VariableStream> streams;
  streams.reserve(system.n());
  for (const auto& v : system.variables) streams.emplace_back(v, seed);
  std::vector<std::vector<int>> rows(system.n());
  auto rep = run_core(
      system,
      [&](int p, int col) -> std::optional<int> {
        while (static_cast<int>(rows[p].size()) < col) rows[p].push_back(streams[p].draw());
        return rows[p][col - 1];
      },
      max_steps);
  rep.table.rows = std::move(rows);
  rep.table.width = 0;
  for (const auto& r : rep.table.rows)
    rep.table.width = std::max<int>(rep.table.width, static_cast<int>(r.size()));
  rep.table.cursors = rep.cells_consumed;
  return rep;
}

long default_max_steps(const EventSystem& system, const LLLParams& params) {
  return static_cast<long>(system.m()) * params.table_width();
}

EvaluationTable materialize_table(const EventSystem& system, std::uint64_t seed, int width) {
  EvaluationTable t;
  t.width = width;
  t.rows.resize(system.n());
  for (const auto& v : system.variables) {
    VariableStream s(v, seed);
    auto& row = t.rows[v.id];
    for (int j = 0; j < width; ++j) row.push_back(s.draw());
  }
  t.reset_cursors();
  return t;
}

}  // namespace lll
