#include "lll/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>

namespace lll {

namespace {

// x^r + ... irreducible over GF(2), with the x^r bit included
const std::uint32_t kGfPoly[17] = {0,      0x3,    0x7,    0xB,    0x13,  0x25,
                                   0x43,   0x83,   0x11B,  0x211,  0x409, 0x805,
                                   0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, int r) {
  std::uint32_t acc = 0;
  while (b) {
    if (b & 1) acc ^= a;
    b >>= 1;
    a <<= 1;
    if ((a >> r) & 1) a ^= kGfPoly[r];
  }
  return acc;
}

int bits_of_denominator(const Q& q) {
  BigInt den = denominator(q);
  if ((den & (den - 1)) != 0) throw input_error("non-dyadic probability in exhaustive space");
  return den == 1 ? 0 : static_cast<int>(msb(den));
}

}  // namespace

EvaluationTable ApproxSpace::materialize(std::uint64_t index) const {
  EvaluationTable t;
  t.rows.assign(n_vars, std::vector<int>(width));
  t.width = width;
  if (kind == Kind::exhaustive) {
    int shift = 0;
    for (int p = 0; p < n_vars; ++p) {
      int r = bits_per_var[p];
      for (int col = 0; col < width; ++col) {
        std::uint64_t u = (index >> shift) & ((std::uint64_t(1) << r) - 1);
        shift += r;
        const auto& cum = cum_num[p];
        int v = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), static_cast<long>(u)) -
                                 cum.begin());
        t.rows[p][col] = v;
      }
    }
  } else {
    for (int p = 0; p < n_vars; ++p)
      for (int col = 0; col < width; ++col) {
        std::uint64_t v = cell_vectors[static_cast<size_t>(p) * width + col];
        t.rows[p][col] = std::popcount(index & v) & 1;
      }
  }
  t.reset_cursors();
  return t;
}

void ApproxSpace::reshape(int n, int w) {
  if (n * w != n_cells()) throw input_error("reshape does not preserve cell count");
  n_vars = n;
  width = w;
}

ApproxSpace build_exhaustive_space(const EventSystem& system, int width, std::uint64_t cap) {
  ApproxSpace s;
  s.kind = ApproxSpace::Kind::exhaustive;
  s.n_vars = system.n();
  s.width = width;
  s.delta = 0;
  s.k = system.n() * width;
  long total_bits = 0;
  for (const auto& var : system.variables) {
    int r = 0;
    for (const auto& p : var.probs) r = std::max(r, bits_of_denominator(p));
    s.bits_per_var.push_back(r);
    // exclusive cumulative numerators over the common denominator 2^r; the
    // cell's r-bit draw u selects the first value whose cumulative exceeds u
    std::vector<long> cum;
    Q acc = 0;
    for (const auto& p : var.probs) {
      acc += p;
      Q scaled = acc * q_pow(Q(2), static_cast<unsigned>(r));
      cum.push_back(static_cast<long>(numerator(scaled)));
    }
    s.cum_num.push_back(std::move(cum));
    total_bits += static_cast<long>(r) * width;
  }
  double cap_bits = std::log2(static_cast<double>(cap));
  if (static_cast<double>(total_bits) > cap_bits + 1e-9)
    throw input_error("exhaustive space cap exceeded");
  s.size = std::uint64_t(1) << total_bits;
  return s;
}

ApproxSpace build_kwise_space(int n_cells, int k) {
  if (n_cells < 1 || k < 1) throw input_error("kwise space needs n_cells >= 1, k >= 1");
  ApproxSpace s;
  s.kind = ApproxSpace::Kind::kwise;
  s.n_vars = n_cells;
  s.width = 1;
  s.delta = 0;
  s.k = k;
  int r = 1;
  while ((1 << r) < n_cells) ++r;
  if (r > 16) throw input_error("kwise space: too many cells");
  s.seed_bits = 1 + (k - 1) * r;
  if (s.seed_bits > 62) throw input_error("kwise space cap exceeded");
  s.size = std::uint64_t(1) << s.seed_bits;
  // cell i's vector is (1, a_i, a_i^2, ..., a_i^{k-1}) over GF(2^r) with
  // a_i = i; any <= k distinct rows form a Vandermonde system, so the
  // seed's inner products are exactly k-wise independent.
  for (int i = 0; i < n_cells; ++i) {
    std::uint64_t v = 1;
    std::uint32_t pw = 1;
    int shift = 1;
    for (int j = 1; j < k; ++j) {
      pw = gf_mul(pw, static_cast<std::uint32_t>(i), r);
      v |= std::uint64_t(pw) << shift;
      shift += r;
    }
    s.cell_vectors.push_back(v);
  }
  return s;
}

Q verify_indistinguishability(const EventSystem& system, const ApproxSpace& space,
                              const std::function<bool(const EvaluationTable&)>& predicate,
                              int dt_depth,
                              std::uint64_t cap) {
  if (dt_depth > space.k) throw input_error("dt_depth exceeds the space's k");
  if (space.size > cap) throw input_error("space too large to enumerate");

  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < space.size; ++i)
    if (predicate(space.materialize(i))) ++hits;
  Q e_space = Q(hits) / Q(space.size);

  double combos_bits = 0;
  for (int p = 0; p < space.n_vars; ++p)
    combos_bits += space.width * std::log2(double(system.variables[p].domain_size()));
  if (combos_bits > std::log2(double(cap)) + 1e-9)
    throw input_error("product distribution too large to enumerate");

  EvaluationTable t;
  t.rows.assign(space.n_vars, std::vector<int>(space.width, 0));
  t.width = space.width;
  t.reset_cursors();
  Q e_true = 0;
  std::function<void(int, Q)> rec = [&](int cell, Q weight) {
    if (cell == space.n_cells()) {
      if (predicate(t)) e_true += weight;
      return;
    }
    int p = cell / space.width, col = cell % space.width;
    const auto& var = system.variables[p];
    for (int d = 0; d < var.domain_size(); ++d) {
      t.rows[p][col] = d;
      rec(cell + 1, weight * var.probs[d]);
    }
  };
  rec(0, 1);

  Q dev = e_space > e_true ? e_space - e_true : e_true - e_space;
  Q bound = q_pow(Q(system.max_domain()), static_cast<unsigned>(dt_depth)) * space.delta;
  if (dev > bound)
    throw internal_error("space deviation exceeds D^k * delta");
  return dev;
}

DecisionTreeBudget make_budget(const EventSystem& system, const LLLParams& params) {
  DecisionTreeBudget b;
  double log_m = log2_q(params.M);
  b.c = 1;
  for (int a = 0; a < system.m(); ++a) {
    double denom = std::min(params.w[a], log_m);
    if (denom <= 0) throw internal_error("event with non-positive weight");
    b.c = std::max(b.c, static_cast<double>(system.events[a].scope.size()) / denom);
  }
  for (int a = 0; a < system.m(); ++a)
    b.k_event.push_back(static_cast<int>(std::ceil(b.c * std::min(params.w[a], log_m) - 1e-9)));
  b.k = std::max(1, static_cast<int>(std::ceil(2.0 * b.c * params.gamma - 1e-9)));
  return b;
}

std::vector<int> greedy_mis(const EventSystem& system, const std::vector<int>& happening) {
  std::vector<int> mis;
  for (int a : happening) {
    bool ok = true;
    for (int b : mis)
      if (a == b || system.adjacent(a, b)) {
        ok = false;
        break;
      }
    if (ok) mis.push_back(a);
  }
  return mis;
}

ParallelReport run_parallel_rounds(const EventSystem& system, const EvaluationTable& table,
                                   int max_rounds) {
  ParallelReport rep;
  rep.resamples.assign(system.m(), 0);
  std::vector<int> cursor(system.n(), 1);
  std::vector<int> current(system.n());
  for (int p = 0; p < system.n(); ++p) {
    if (table.rows[p].empty()) {
      rep.outcome = RunOutcome::table_exhausted;
      return rep;
    }
    current[p] = table.rows[p][0];
  }

  auto happening_set = [&] {
    std::vector<int> h;
    for (int a = 0; a < system.m(); ++a) {
      const auto& e = system.events[a];
      ScopeValues vals;
      vals.reserve(e.scope.size());
      for (int p : e.scope) vals.push_back(current[p]);
      if (e.happens(vals)) h.push_back(a);
    }
    return h;
  };

  while (true) {
    auto h = happening_set();
    if (h.empty()) {
      rep.outcome = RunOutcome::success;
      break;
    }
    if (rep.rounds >= max_rounds) {
      rep.outcome = RunOutcome::exhausted;
      break;
    }
    auto mis = greedy_mis(system, h);
    std::vector<char> touched(system.n(), 0);
    for (int a : mis) {
      ++rep.resamples[a];
      for (int p : system.events[a].scope) touched[p] = 1;
    }
    for (int p = 0; p < system.n(); ++p) {
      if (!touched[p]) continue;
      ++cursor[p];
      if (cursor[p] > static_cast<int>(table.rows[p].size())) {
        rep.outcome = RunOutcome::table_exhausted;
        rep.cells_consumed = cursor;
        rep.assignment = current;
        return rep;
      }
      current[p] = table.rows[p][cursor[p] - 1];
    }
    ++rep.rounds;
    rep.round_sets.push_back(std::move(mis));
  }
  rep.assignment = current;
  rep.cells_consumed = cursor;
  return rep;
}

namespace {

void pad_table(EvaluationTable& t, int width) {
  for (auto& row : t.rows)
    while (static_cast<int>(row.size()) < width) row.push_back(0);
  t.width = width;
  t.reset_cursors();
}

}  // namespace

ParallelSolveResult solve_parallel(const EventSystem& system, const std::vector<Q>& x,
                                   double epsilon, int workers, std::uint64_t space_cap) {
  auto report = validate_lll_condition(system, x, epsilon);
  if (!report.ok) throw validation_error("LLL epsilon-slack condition violated");

  ParallelSolveResult res;
  res.params = derive_params(system, x, epsilon);
  res.budget = make_budget(system, res.params);
  const int width = res.params.table_width();
  const int n = system.n();
  double cap_bits = std::log2(static_cast<double>(space_cap));

  bool binary_uniform = true;
  for (const auto& v : system.variables)
    if (v.domain_size() != 2 || v.probs[0] != Q(1, 2)) binary_uniform = false;

  // Space policy: exact k-wise when the seed fits the cap, then the full
  // exhaustive space, then an exhaustive space over a width prefix whose
  // tables get padded with the first domain value.
  bool padded = false;
  if (binary_uniform && n * width >= 1) {
    int r = 1;
    while ((1 << r) < n * width) ++r;
    double seed_bits = 1.0 + static_cast<double>(res.budget.k - 1) * r;
    if (r <= 16 && seed_bits <= cap_bits + 1e-9) {
      res.space = build_kwise_space(n * width, res.budget.k);
      res.space.reshape(n, width);
    }
  }
  if (res.space.size == 0) {
    long bits_per_col = 0;
    for (const auto& var : system.variables) {
      int r = 0;
      for (const auto& p : var.probs) r = std::max(r, bits_of_denominator(p));
      bits_per_col += r;
    }
    int w = width;
    while (w > 1 && static_cast<double>(bits_per_col) * w > cap_bits + 1e-9) --w;
    if (static_cast<double>(bits_per_col) * w > cap_bits + 1e-9)
      throw input_error("no table space fits the cap for this system");
    res.space = build_exhaustive_space(system, w, space_cap);
    padded = w < width;
  }

  int max_rounds = res.params.w_min > 0
                       ? static_cast<int>(std::ceil(res.params.gamma / res.params.w_min - 1e-9))
                       : 1;
  max_rounds = std::max(max_rounds, 1);

  auto try_table = [&](std::uint64_t idx) {
    auto t = res.space.materialize(idx);
    if (padded) pad_table(t, width);
    return run_parallel_rounds(system, t, max_rounds).outcome == RunOutcome::success;
  };

  const std::uint64_t kChunk = 256;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> best{res.space.size};
  auto worker = [&] {
    while (true) {
      std::uint64_t lo = next.fetch_add(kChunk);
      if (lo >= res.space.size || lo >= best.load()) return;
      std::uint64_t hi = std::min(lo + kChunk, res.space.size);
      for (std::uint64_t i = lo; i < hi; ++i) {
        if (i >= best.load()) break;
        if (!try_table(i)) continue;
        std::uint64_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        break;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (best.load() == res.space.size)
    throw internal_error("no table in the space succeeded");
  res.table_index = best.load();
  auto t = res.space.materialize(res.table_index);
  if (padded) pad_table(t, width);
  res.run = run_parallel_rounds(system, t, max_rounds);
  res.assignment = res.run.assignment;
  return res;
}

}  // namespace lll
