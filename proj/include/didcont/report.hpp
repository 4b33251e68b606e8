#pragma once

#include "didcont/estimator.hpp"
#include "didcont/model.hpp"
#include "didcont/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace didcont {

inline constexpr int report_schema_version = 1;

//! Self-describing record of one estimation run; enough to rerun it exactly.
struct RunReport
{
  int schema_version = report_schema_version;
  Design design = Design::panel;
  Eigen::Index n = 0;
  EstimandSpec estimand;
  EstimationConfig config;
  InferenceOptions inference;
  AtetEstimate estimate;
  std::vector<std::string> group_labels;
  std::optional<double> duration_seconds;

  bool operator==(const RunReport& other) const;
};

nlohmann::json to_json(const RunReport& report);
//! Throws InputError on a malformed record or unknown schema version.
RunReport report_from_json(const nlohmann::json& j);

//! Group labels in estimator order.
std::vector<std::string> group_labels(Design design);

} // namespace didcont
