#include "lll/report.hpp"

namespace lll {

Json rational_json(const Q& q) {
  return Json{{"exact", numerator(q).str() + "/" + denominator(q).str()},
              {"approx", to_double(q)}};
}

Json params_json(const LLLParams& params, int m, int n) {
  return Json{{"epsilon", params.epsilon},
              {"M", rational_json(params.M)},
              {"gamma", params.gamma},
              {"w_min", params.w_min},
              {"D", params.D},
              {"m", m},
              {"n", n},
              {"table_width", params.table_width()}};
}

Json run_json(const RunReport& run) {
  const char* outcome = run.outcome == RunOutcome::success          ? "success"
                        : run.outcome == RunOutcome::table_exhausted ? "table_exhausted"
                                                                     : "exhausted";
  return Json{{"outcome", outcome}, {"steps", run.steps}, {"resamples", run.resamples}};
}

Json parallel_run_json(const ParallelReport& run) {
  const char* outcome = run.outcome == RunOutcome::success          ? "success"
                        : run.outcome == RunOutcome::table_exhausted ? "table_exhausted"
                                                                     : "exhausted";
  return Json{{"outcome", outcome}, {"rounds", run.rounds}, {"resamples", run.resamples}};
}

Json assignment_json(const std::vector<int>& assignment) {
  Json j = Json::object();
  for (size_t p = 0; p < assignment.size(); ++p) j[std::to_string(p)] = assignment[p];
  return j;
}

Json space_json(const ApproxSpace& space) {
  return Json{{"k", space.k},
              {"delta", to_double(space.delta)},
              {"size", space.size},
              {"kind", space.kind == ApproxSpace::Kind::kwise ? "kwise" : "exhaustive"},
              {"width", space.width}};
}

Json validation_json(const ValidationReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries)
    entries.push_back(Json{{"event", e.event_id},
                           {"pr", rational_json(e.pr)},
                           {"x_prime", rational_json(e.x_prime)},
                           {"bound", e.bound},
                           {"ok", e.ok}});
  return Json{{"ok", report.ok}, {"events", entries}};
}

}  // namespace lll
