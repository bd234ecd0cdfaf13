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
// Bipartite two-setting, two-outcome scenarios with possible detection
// failure: joint probabilities, per-setting-pair success probabilities
// (efficiencies), correlators, and the raw and postselected Bell quantities.
//
// Correlators are kept un-normalized (plain probability combinations);
// division by the efficiency happens only inside bell_postselected. The two
// quantities are the core objects of study and each is exposed for testing.

#ifndef FAIRBELL_SCENARIO_HPP_
#define FAIRBELL_SCENARIO_HPP_

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "fairbell/errors.hpp"
#include "fairbell/matrix.hpp"

namespace fairbell {
namespace bell {

// Which of a party's two measurement settings; the CHSH scenario is a fixed
// 2x2x2 shape so an enum (not strings) labels settings in the core.
enum class Setting { kUpper, kLower };

inline constexpr std::array<Setting, 2> kSettings = {Setting::kUpper,
                                                     Setting::kLower};

inline const char* setting_name(Setting s, bool alice) {
  if (alice) return s == Setting::kUpper ? "A" : "a";
  return s == Setting::kUpper ? "B" : "b";
}

// A dichotomic measurement with loss: outcome elements M+ and M- whose sum
// (the success operator) is bounded by the identity; I - M+ - M- is the
// failure element and must be positive semidefinite within tolerance.
class DichotomicMeasurement {
 public:
  DichotomicMeasurement(ops::PovmElement plus, ops::PovmElement minus,
                        double psd_tol = ops::kPsdTol)
      : plus_(std::move(plus)), minus_(std::move(minus)) {
    if (plus_.dim() != minus_.dim()) {
      throw DimensionMismatch("DichotomicMeasurement: outcome dims differ");
    }
    const EigenMatrix failure = EigenMatrix::Identity(plus_.dim(), plus_.dim()) -
                                plus_.eigen() - minus_.eigen();
    const ops::EigResult eig =
        ops::eig_hermitian(ops::HermitianOperator(failure));
    if (eig.values(plus_.dim() - 1) < -psd_tol) {
      throw DomainError(
          "DichotomicMeasurement: M+ + M- exceeds identity (failure element "
          "eigenvalue " +
          std::to_string(eig.values(plus_.dim() - 1)) + ")");
    }
  }

  int dim() const { return plus_.dim(); }
  const ops::PovmElement& plus() const { return plus_; }
  const ops::PovmElement& minus() const { return minus_; }

  // M = M+ + M-, the operator for a successful (conclusive) measurement.
  ops::HermitianOperator success() const {
    return ops::HermitianOperator(
        ops::ComplexMatrix(plus_.eigen() + minus_.eigen()), 0.0);
  }

  // Delta = M+ - M-, the signed outcome operator.
  ops::HermitianOperator delta() const {
    return ops::HermitianOperator(
        ops::ComplexMatrix(plus_.eigen() - minus_.eigen()), 0.0);
  }

 private:
  ops::PovmElement plus_;
  ops::PovmElement minus_;
};

// One party's pair of settings.
class PartySettings {
 public:
  PartySettings(DichotomicMeasurement upper, DichotomicMeasurement lower)
      : upper_(std::move(upper)), lower_(std::move(lower)) {
    if (upper_.dim() != lower_.dim()) {
      throw DimensionMismatch("PartySettings: setting dims differ");
    }
  }

  int dim() const { return upper_.dim(); }
  const DichotomicMeasurement& at(Setting s) const {
    return s == Setting::kUpper ? upper_ : lower_;
  }
  const DichotomicMeasurement& upper() const { return upper_; }
  const DichotomicMeasurement& lower() const { return lower_; }

 private:
  DichotomicMeasurement upper_;
  DichotomicMeasurement lower_;
};

// Shared state plus both parties' measurements. The state must be a density
// operator (unit trace within 1e-9, PSD within psd tolerance) of dimension
// dim(alice) * dim(bob).
class BellScenario {
 public:
  BellScenario(ops::HermitianOperator state, PartySettings alice,
               PartySettings bob)
      : state_(std::move(state)),
        alice_(std::move(alice)),
        bob_(std::move(bob)) {
    const double trace = state_.eigen().trace().real();
    if (std::abs(trace - 1.0) > 1e-9) {
      throw DomainError("BellScenario: state trace " + std::to_string(trace) +
                        " != 1");
    }
    const ops::EigResult eig = ops::eig_hermitian(state_);
    if (eig.values(state_.dim() - 1) < -ops::kPsdTol) {
      throw DomainError("BellScenario: state eigenvalue " +
                        std::to_string(eig.values(state_.dim() - 1)) +
                        " below -psd tolerance");
    }
    if (state_.dim() != alice_.dim() * bob_.dim()) {
      throw DimensionMismatch("BellScenario: state dim " +
                              std::to_string(state_.dim()) + " != " +
                              std::to_string(alice_.dim()) + "*" +
                              std::to_string(bob_.dim()));
    }
  }

  const ops::HermitianOperator& state() const { return state_; }
  const PartySettings& alice() const { return alice_; }
  const PartySettings& bob() const { return bob_; }
  int dim_alice() const { return alice_.dim(); }
  int dim_bob() const { return bob_.dim(); }

 private:
  ops::HermitianOperator state_;
  PartySettings alice_;
  PartySettings bob_;
};

// p(s1, s2 | alpha, beta) = Tr[(M1^{s1} (x) M2^{s2}) rho]. Outcome signs are
// +1 / -1. Values outside [0,1] by more than 1e-9 are rejected; smaller
// spectral noise is clamped so downstream sums stay in range.
inline double joint_probability(const BellScenario& s, Setting alpha,
                                Setting beta, int s1, int s2) {
  if ((s1 != 1 && s1 != -1) || (s2 != 1 && s2 != -1)) {
    throw DomainError("joint_probability: outcome signs must be +1 or -1");
  }
  const ops::PovmElement& ma = s1 == 1 ? s.alice().at(alpha).plus()
                                       : s.alice().at(alpha).minus();
  const ops::PovmElement& mb =
      s2 == 1 ? s.bob().at(beta).plus() : s.bob().at(beta).minus();
  const double p =
      ops::expectation(ops::tensor_product(ma.op(), mb.op()), s.state());
  if (p < -1e-9 || p > 1.0 + 1e-9) {
    throw DomainError("joint_probability: value " + std::to_string(p) +
                      " outside [0,1] beyond tolerance");
  }
  return std::clamp(p, 0.0, 1.0);
}

// Success probability for the setting pair: Tr[(M1 (x) M2) rho]. Complete
// loss (below 1e-12) is an error because every postselected quantity divides
// by this value.
inline double efficiency(const BellScenario& s, Setting alpha, Setting beta) {
  const double e = ops::expectation(
      ops::tensor_product(s.alice().at(alpha).success(),
                          s.bob().at(beta).success()),
      s.state());
  if (e < 1e-12) {
    throw CompleteLoss("efficiency: setting pair has success probability " +
                       std::to_string(e));
  }
  return std::min(e, 1.0);
}

// Un-normalized correlator p(++) - p(+-) - p(-+) + p(--).
inline double correlator(const BellScenario& s, Setting alpha, Setting beta) {
  return joint_probability(s, alpha, beta, +1, +1) -
         joint_probability(s, alpha, beta, +1, -1) -
         joint_probability(s, alpha, beta, -1, +1) +
         joint_probability(s, alpha, beta, -1, -1);
}

// Correlators and efficiencies for all four setting pairs, validated against
// |c| <= eff (probabilities are non-negative).
struct CorrelatorTable {
  // Indexed [alice setting][bob setting] with 0 = upper, 1 = lower.
  std::array<std::array<double, 2>, 2> c;
  std::array<std::array<double, 2>, 2> eff;
};

inline CorrelatorTable correlator_table(const BellScenario& s) {
  CorrelatorTable t;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Setting alpha = i == 0 ? Setting::kUpper : Setting::kLower;
      const Setting beta = j == 0 ? Setting::kUpper : Setting::kLower;
      t.c[i][j] = correlator(s, alpha, beta);
      t.eff[i][j] = efficiency(s, alpha, beta);
      if (std::abs(t.c[i][j]) > t.eff[i][j] + 1e-10) {
        throw DomainError("correlator_table: |correlator| exceeds efficiency");
      }
    }
  }
  return t;
}

// CHSH combination without postselection:
// C(A,B) + C(A,b) + C(a,B) - C(a,b).
inline double bell_raw(const BellScenario& s) {
  return correlator(s, Setting::kUpper, Setting::kUpper) +
         correlator(s, Setting::kUpper, Setting::kLower) +
         correlator(s, Setting::kLower, Setting::kUpper) -
         correlator(s, Setting::kLower, Setting::kLower);
}

// Postselected CHSH combination: each correlator is divided by its setting
// pair's success probability before entering the sum.
inline double bell_postselected(const BellScenario& s) {
  const CorrelatorTable t = correlator_table(s);
  return t.c[0][0] / t.eff[0][0] + t.c[0][1] / t.eff[0][1] +
         t.c[1][0] / t.eff[1][0] - t.c[1][1] / t.eff[1][1];
}

}  // namespace bell
}  // namespace fairbell

#endif  // FAIRBELL_SCENARIO_HPP_
