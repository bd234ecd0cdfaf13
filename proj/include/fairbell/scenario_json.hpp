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
// JSON serialization of scenarios. Complex entries are [re, im] pairs; each
// operator is an array of rows. The writer emits shortest round-trip doubles,
// so serialize/parse is bit-faithful.

#ifndef FAIRBELL_SCENARIO_JSON_HPP_
#define FAIRBELL_SCENARIO_JSON_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "fairbell/errors.hpp"
#include "fairbell/matrix.hpp"
#include "fairbell/scenario.hpp"

namespace fairbell {
namespace bell {

inline nlohmann::json matrix_to_json(const EigenMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline EigenMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw DomainError("matrix_from_json: expected non-empty array of rows");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  EigenMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const nlohmann::json& row = j.at(i);
    if (static_cast<int>(row.size()) != cols) {
      throw DomainError("matrix_from_json: ragged rows");
    }
    for (int k = 0; k < cols; ++k) {
      const nlohmann::json& entry = row.at(k);
      if (!entry.is_array() || entry.size() != 2) {
        throw DomainError("matrix_from_json: entry is not an [re, im] pair");
      }
      m(i, k) = Cx(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

inline nlohmann::json scenario_to_json(const BellScenario& s) {
  nlohmann::json j;
  j["state"] = matrix_to_json(s.state().eigen());
  j["alice_upper_plus"] = matrix_to_json(s.alice().upper().plus().eigen());
  j["alice_upper_minus"] = matrix_to_json(s.alice().upper().minus().eigen());
  j["alice_lower_plus"] = matrix_to_json(s.alice().lower().plus().eigen());
  j["alice_lower_minus"] = matrix_to_json(s.alice().lower().minus().eigen());
  j["bob_upper_plus"] = matrix_to_json(s.bob().upper().plus().eigen());
  j["bob_upper_minus"] = matrix_to_json(s.bob().upper().minus().eigen());
  j["bob_lower_plus"] = matrix_to_json(s.bob().lower().plus().eigen());
  j["bob_lower_minus"] = matrix_to_json(s.bob().lower().minus().eigen());
  return j;
}

inline BellScenario scenario_from_json(const nlohmann::json& j) {
  auto povm = [&](const char* key) {
    return ops::PovmElement(ops::HermitianOperator(
        ops::ComplexMatrix(matrix_from_json(j.at(key)))));
  };
  PartySettings alice(
      DichotomicMeasurement(povm("alice_upper_plus"), povm("alice_upper_minus")),
      DichotomicMeasurement(povm("alice_lower_plus"), povm("alice_lower_minus")));
  PartySettings bob(
      DichotomicMeasurement(povm("bob_upper_plus"), povm("bob_upper_minus")),
      DichotomicMeasurement(povm("bob_lower_plus"), povm("bob_lower_minus")));
  ops::HermitianOperator state(
      ops::ComplexMatrix(matrix_from_json(j.at("state"))));
  return BellScenario(std::move(state), std::move(alice), std::move(bob));
}

}  // namespace bell
}  // namespace fairbell

#endif  // FAIRBELL_SCENARIO_JSON_HPP_
