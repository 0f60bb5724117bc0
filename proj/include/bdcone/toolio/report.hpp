#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdcone/certcones/classify.hpp"
#include "bdcone/hierarchy/problem_data.hpp"
#include "bdcone/hierarchy/relaxation.hpp"
#include "bdcone/recovery/recovery.hpp"

namespace bdcone {

inline constexpr int kReportSchemaVersion = 1;

/// Finite doubles as numbers; infinities and NaN as "inf", "-inf", "nan".
nlohmann::ordered_json json_number(double v);
std::string hex_fingerprint(std::uint64_t h);

nlohmann::ordered_json problem_json(const ProblemData& data);
nlohmann::ordered_json config_json(const HierarchyConfig& cfg);

/// One solved relaxation: status, value, residuals, iterations, size,
/// fingerprint and the decoded certificate (primal side) or moments (dual
/// side). Seconds are omitted when `timing` is false.
nlohmann::ordered_json level_json(const RelaxationBundle& bundle, const ProblemData& data,
                                  const RelaxationResult& result, bool timing);

nlohmann::ordered_json class_report_json(const ClassReport& report, const std::vector<std::string>& vars);
nlohmann::ordered_json recovery_json(const RecoveryReport& report);

/// Top-level document: schema_version, command, then `body` fields.
nlohmann::ordered_json make_report(const std::string& command, nlohmann::ordered_json body);

/// Two-space indented text with a trailing newline.
std::string dump_report(const nlohmann::ordered_json& report);

}  // namespace bdcone
