#pragma once

#include <json.hpp>

#include "lll/adapters.hpp"
#include "lll/parallel.hpp"

namespace lll {

using Json = nlohmann::json;

Json rational_json(const Q& q);
Json params_json(const LLLParams& params, int m, int n);
Json run_json(const RunReport& run);
Json parallel_run_json(const ParallelReport& run);
Json assignment_json(const std::vector<int>& assignment);
Json space_json(const ApproxSpace& space);
Json validation_json(const ValidationReport& report);

}  // namespace lll
