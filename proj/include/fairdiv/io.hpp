#pragma once

#include "fairdiv/gmref.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/realloc.hpp"
#include "fairdiv/verify.hpp"

#include <json.hpp>

#include <map>
#include <string>

namespace fairdiv {

nlohmann::json raw_instance_to_json(const RawInstance& raw);
RawInstance raw_instance_from_json(const nlohmann::json& j);

/// Canonical form: values in {1, k}, weights normalized, k declared.
nlohmann::json instance_to_json(const Instance& inst);

RawInstance load_instance_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

nlohmann::json report_to_json(const VerifyReport& report);

/// Result of a solve run, re-verifiable offline.
nlohmann::json result_to_json(const Instance& inst, const SolveResult& result,
                              const std::string& mode, const VerifyReport& certificates,
                              bool include_trace, const std::map<int, int>& owner_override);

struct LoadedResult {
    std::string mode;
    Allocation alloc;
    std::vector<Rational> price;
};

/// Parses a result against its instance; rejects id or partition mismatches.
LoadedResult result_from_json(const Instance& inst, const nlohmann::json& j);

nlohmann::json gm_run_to_json(const Instance& inst, const GmRun& run);

} // namespace fairdiv
