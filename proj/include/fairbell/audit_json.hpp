// Copyright 2026 The fairbell authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// JSON serialization of audit reports.

#ifndef FAIRBELL_AUDIT_JSON_HPP_
#define FAIRBELL_AUDIT_JSON_HPP_

#include <string>

#include <json.hpp>

#include "fairbell/audit.hpp"
#include "fairbell/scenario.hpp"

namespace fairbell {
namespace audit {

inline nlohmann::json audit_report_to_json(const AuditReport& r) {
  nlohmann::json eff = nlohmann::json::object();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const std::string key =
          std::string(bell::setting_name(bell::kSettings[i], true)) +
          bell::setting_name(bell::kSettings[j], false);
      eff[key] = {{"estimate", r.eff_hat[i][j].eff},
                  {"stderr", r.eff_hat[i][j].std_error}};
    }
  }
  return nlohmann::json{
      {"eff_hat", eff},
      {"factor_fit",
       {{"alice", {{"A", r.factor_fit.alice[0]}, {"a", r.factor_fit.alice[1]}}},
        {"bob", {{"B", r.factor_fit.bob[0]}, {"b", r.factor_fit.bob[1]}}}}},
      {"test_statistic", r.test_statistic},
      {"p_value", r.p_value},
      {"significance", r.significance},
      {"bootstrapped_p_value", r.bootstrapped_p_value},
      {"verdict", verdict_name(r.verdict)},
      {"bell_estimate",
       {{"value", r.bell_estimate.value},
        {"ci_lo", r.bell_estimate.ci_lo},
        {"ci_hi", r.bell_estimate.ci_hi},
        {"stderr", r.bell_estimate.std_error},
        {"resamples", r.bell_estimate.resamples}}},
      {"note", audit_scope_note()}};
}

}  // namespace audit
}  // namespace fairbell

#endif  // FAIRBELL_AUDIT_JSON_HPP_
