#pragma once

#include <cstdint>
#include <vector>

#include "lll/witness.hpp"

namespace lll {

enum class RunOutcome { success, exhausted, table_exhausted };

struct RunReport {
  RunOutcome outcome = RunOutcome::exhausted;
  std::vector<int> assignment;      // final value per variable
  EventLog log;                     // resampling order
  std::vector<long> resamples;      // per event
  std::vector<int> cells_consumed;  // per variable (1 + resamples touching it)
  long steps = 0;
  EvaluationTable table;  // the driving table (materialized for seeded runs)
};

RunReport run_randomized(const EventSystem& system, std::uint64_t seed,
                         long max_steps = 1000000);

RunReport run_with_table(const EventSystem& system, const EvaluationTable& table,
                         long max_steps = 1000000);

/// Default step cap from Theorem-2-style accounting: m * table width.
long default_max_steps(const EventSystem& system, const LLLParams& params);

/// Materializes a width-column random table from the same per-variable
/// substreams run_randomized uses.
EvaluationTable materialize_table(const EventSystem& system, std::uint64_t seed, int width);

}  // namespace lll
