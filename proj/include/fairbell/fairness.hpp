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
// Quantum-side fair sampling: the per-party proportionality condition on
// success operators, de-postselection of fair scenarios into lossless ones,
// witness states certifying a broken condition, a separable-state violation
// built from those witnesses, and a two-qubit construction that beats the
// quantum bound 2*sqrt(2) under asymmetric loss.

#ifndef FAIRBELL_FAIRNESS_HPP_
#define FAIRBELL_FAIRNESS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairbell/errors.hpp"
#include "fairbell/matrix.hpp"
#include "fairbell/rng.hpp"
#include "fairbell/scenario.hpp"

namespace fairbell {
namespace fairness {

using bell::Setting;

// Returns kappa = Tr(m)/Tr(n) when m = kappa * n entrywise within rel_tol
// (relative to the largest entry of m), otherwise an empty optional.
inline std::optional<double> proportionality_check(const ops::PovmElement& m,
                                                   const ops::PovmElement& n,
                                                   double rel_tol = 1e-9) {
  if (m.dim() != n.dim()) {
    throw DimensionMismatch("proportionality_check: operator dims differ");
  }
  const double tn = n.eigen().trace().real();
  if (tn < 1e-12) {
    throw ZeroOperator("proportionality_check: comparison operator has trace " +
                       std::to_string(tn));
  }
  const double kappa = m.eigen().trace().real() / tn;
  const double scale = ops::max_abs(m.eigen());
  if (ops::max_abs(m.eigen() - kappa * n.eigen()) <= rel_tol * scale) {
    return kappa;
  }
  return std::nullopt;
}

// One party's verdict: fair means the two success operators are proportional.
// setting_factor is present only when fair: the scalars [upper, lower] with
// the larger normalized to 1, so the success operators are factor * M0 for a
// common reference operator M0.
struct PartyFairness {
  bool fair = false;
  std::optional<std::array<double, 2>> setting_factor;
};

struct FairnessVerdict {
  PartyFairness alice;
  PartyFairness bob;

  bool fair() const { return alice.fair && bob.fair; }
};

namespace detail {

inline PartyFairness check_party(const bell::PartySettings& p) {
  const std::optional<double> kappa =
      proportionality_check(ops::PovmElement(p.upper().success()),
                            ops::PovmElement(p.lower().success()));
  if (!kappa.has_value()) return PartyFairness{false, std::nullopt};
  if (*kappa >= 1.0) {
    return PartyFairness{true, {{1.0, 1.0 / *kappa}}};
  }
  return PartyFairness{true, {{*kappa, 1.0}}};
}

inline double vec_expect(const EigenMatrix& op, const EigenVector& v) {
  return (v.adjoint() * op * v)(0, 0).real();
}

// Orientation functional for a candidate witness pair (u, w):
// <u|m|u><w|n|w> - <u|n|u><w|m|w>. Positive gap means the pair is oriented
// per the construction's requirement.
inline double witness_gap(const EigenMatrix& m, const EigenMatrix& n,
                          const EigenVector& u, const EigenVector& w) {
  return vec_expect(m, u) * vec_expect(n, w) -
         vec_expect(n, u) * vec_expect(m, w);
}

}  // namespace detail

// Fair sampling holds when each party's two success operators are
// proportional; then the loss factors into per-setting scalars and a common
// local operator, and postselection cannot distort the statistics.
inline FairnessVerdict quantum_fairness_check(const bell::PartySettings& alice,
                                              const bell::PartySettings& bob) {
  return FairnessVerdict{detail::check_party(alice), detail::check_party(bob)};
}

// Setting whose success operator is the party's reference (factor 1); ties
// resolve to upper.
inline Setting reference_setting(const PartyFairness& pf) {
  if (!pf.setting_factor.has_value()) {
    throw DomainError("reference_setting: party is not fair");
  }
  return (*pf.setting_factor)[0] >= (*pf.setting_factor)[1] ? Setting::kUpper
                                                            : Setting::kLower;
}

// Rewrites a fair lossy scenario as a lossless one with identical
// postselected statistics. Measurements become M^{-1/2} M^pm M^{-1/2}; the
// state is dressed with the square root of the per-party reference success
// operators, which cancels the measurement renormalization pair by pair and
// leaves exactly the postselected probabilities. The dressing is a local
// product, so a separable state stays separable.
inline bell::BellScenario depostselect_quantum(const bell::BellScenario& s) {
  const FairnessVerdict v = quantum_fairness_check(s.alice(), s.bob());
  if (!v.fair()) {
    std::string sides = !v.alice.fair && !v.bob.fair ? "both parties"
                        : !v.alice.fair              ? "the first party"
                                                     : "the second party";
    throw NotFair("depostselect_quantum: success operators of " + sides +
                  " are not proportional across settings");
  }
  auto transform = [](const bell::DichotomicMeasurement& m) {
    const EigenMatrix w =
        ops::psd_inv_sqrt(ops::PovmElement(m.success())).eigen();
    return bell::DichotomicMeasurement(
        ops::PovmElement(ops::HermitianOperator(
            ops::ComplexMatrix(w * m.plus().eigen() * w))),
        ops::PovmElement(ops::HermitianOperator(
            ops::ComplexMatrix(w * m.minus().eigen() * w))));
  };
  bell::PartySettings alice(transform(s.alice().upper()),
                            transform(s.alice().lower()));
  bell::PartySettings bob(transform(s.bob().upper()),
                          transform(s.bob().lower()));

  const ops::HermitianOperator ga =
      ops::psd_sqrt(s.alice().at(reference_setting(v.alice)).success());
  const ops::HermitianOperator gb =
      ops::psd_sqrt(s.bob().at(reference_setting(v.bob)).success());
  const EigenMatrix g = ops::tensor_product(ga, gb).eigen();
  EigenMatrix dressed = g * s.state().eigen() * g;
  const double norm = dressed.trace().real();
  if (norm < 1e-12) {
    throw CompleteLoss("depostselect_quantum: reference success probability " +
                       std::to_string(norm));
  }
  dressed /= norm;
  return bell::BellScenario(
      ops::HermitianOperator(ops::ComplexMatrix(std::move(dressed))),
      std::move(alice), std::move(bob));
}

// For non-proportional (m, n) finds orthonormal (phi0, phi1) with
// <phi0|n|phi0><phi1|m|phi1> strictly smaller than <phi0|m|phi0><phi1|n|phi1>.
// The scan uses the eigenbasis of m - kappa*n (which always contains such a
// pair for positive operators); a seeded random search covers numerically
// marginal spectra.
inline std::pair<EigenVector, EigenVector> find_condition_witness_states(
    const ops::PovmElement& m, const ops::PovmElement& n) {
  if (proportionality_check(m, n).has_value()) {
    throw Proportional(
        "find_condition_witness_states: operators are proportional");
  }
  const double kappa =
      m.eigen().trace().real() / n.eigen().trace().real();
  const ops::EigResult eig = ops::eig_hermitian(ops::HermitianOperator(
      ops::ComplexMatrix(m.eigen() - kappa * n.eigen()), 0.0));
  const int d = m.dim();
  double best_gap = 0.0;
  EigenVector best_u, best_w;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double gap = detail::witness_gap(m.eigen(), n.eigen(),
                                             eig.vectors.col(i),
                                             eig.vectors.col(j));
      if (gap > best_gap) {
        best_gap = gap;
        best_u = eig.vectors.col(i);
        best_w = eig.vectors.col(j);
      }
    }
  }
  if (best_gap >= 1e-10) return {best_u, best_w};

  Rng rng(0x77u);
  for (int trial = 0; trial < 200; ++trial) {
    const EigenVector u = rng.random_ket(d);
    EigenVector w = rng.random_ket(d);
    w -= u * u.dot(w);
    if (w.norm() < 1e-6) continue;
    w /= w.norm();
    double gap = detail::witness_gap(m.eigen(), n.eigen(), u, w);
    if (gap > best_gap) {
      best_gap = gap;
      best_u = u;
      best_w = w;
    }
    if (-gap > best_gap) {
      best_gap = -gap;
      best_u = w;
      best_w = u;
    }
  }
  if (best_gap >= 1e-10) return {best_u, best_w};
  throw Proportional(
      "find_condition_witness_states: no pair with a usable gap; operators "
      "are numerically proportional");
}

namespace detail {

// Exact maximizer of Tr[Delta * e] over Hermitian -s <= Delta <= s:
// Delta = s^{1/2} sign(s^{1/2} e s^{1/2}) s^{1/2}.
inline EigenMatrix best_delta(const ops::HermitianOperator& s,
                              const EigenMatrix& e) {
  const EigenMatrix r = ops::psd_sqrt(s).eigen();
  const ops::HermitianOperator core(ops::ComplexMatrix(r * e * r));
  return ops::HermitianOperator(
             ops::ComplexMatrix(r * ops::spectral_sign(core).eigen() * r))
      .eigen();
}

// Projects a candidate onto the valid set -s <= Delta <= s: conjugate by the
// pseudo-inverse square root, clamp eigenvalues to [-1, 1], conjugate back.
// Components outside the support of s are dropped, as validity requires.
inline EigenMatrix clip_delta(const ops::HermitianOperator& s,
                              const EigenMatrix& candidate) {
  const ops::EigResult eig = ops::eig_hermitian(s);
  const int d = s.dim();
  Eigen::VectorXd inv_root(d);
  for (int i = 0; i < d; ++i) {
    inv_root(i) = eig.values(i) > ops::kSingularFloor
                      ? 1.0 / std::sqrt(eig.values(i))
                      : 0.0;
  }
  const EigenMatrix w =
      eig.vectors * inv_root.asDiagonal() * eig.vectors.adjoint();
  const ops::EigResult ev = ops::eig_hermitian(
      ops::HermitianOperator(ops::ComplexMatrix(w * candidate * w)));
  Eigen::VectorXd clamped(d);
  for (int i = 0; i < d; ++i) clamped(i) = std::clamp(ev.values(i), -1.0, 1.0);
  const EigenMatrix v =
      ev.vectors * clamped.asDiagonal() * ev.vectors.adjoint();
  const EigenMatrix r = ops::psd_sqrt(s).eigen();
  return ops::HermitianOperator(ops::ComplexMatrix(r * v * r)).eigen();
}

struct FixedStateProblem {
  int da = 0;
  int db = 0;
  EigenMatrix rho;
  std::array<ops::HermitianOperator, 2> success_alice;  // [upper, lower]
  std::array<ops::HermitianOperator, 2> success_bob;
  std::array<std::array<double, 2>, 2> eff;  // joint efficiencies
};

inline FixedStateProblem make_problem(const bell::PartySettings& alice,
                                      const bell::PartySettings& bob,
                                      const EigenMatrix& rho) {
  FixedStateProblem p{alice.dim(),
                      bob.dim(),
                      rho,
                      {alice.upper().success(), alice.lower().success()},
                      {bob.upper().success(), bob.lower().success()},
                      {}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const EigenMatrix joint =
          ops::tensor_product(p.success_alice[i], p.success_bob[j]).eigen();
      p.eff[i][j] = (joint * rho).trace().real();
      if (p.eff[i][j] < 1e-12) {
        throw CompleteLoss(
            "separable_violation_construction: setting pair success "
            "probability " +
            std::to_string(p.eff[i][j]));
      }
    }
  }
  return p;
}

inline double sign_of_pair(int i, int j) {
  return i == 1 && j == 1 ? -1.0 : 1.0;
}

inline double linear_bell(const FixedStateProblem& p,
                          const std::array<EigenMatrix, 2>& dal,
                          const std::array<EigenMatrix, 2>& dbo) {
  double b = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const EigenMatrix joint =
          ops::tensor_product(
              ops::HermitianOperator(ops::ComplexMatrix(dal[i]), 0.0),
              ops::HermitianOperator(ops::ComplexMatrix(dbo[j]), 0.0))
              .eigen();
      b += sign_of_pair(i, j) * (joint * p.rho).trace().real() / p.eff[i][j];
    }
  }
  return b;
}

// Coordinate ascent over the four signed outcome operators at a fixed state.
// Each step solves its setting exactly, so the value is monotone; the
// iteration stops when a full sweep improves by less than 1e-13.
inline double seesaw_deltas(const FixedStateProblem& p,
                            std::array<EigenMatrix, 2>& dal,
                            std::array<EigenMatrix, 2>& dbo) {
  const EigenMatrix ia = EigenMatrix::Identity(p.da, p.da);
  const EigenMatrix ib = EigenMatrix::Identity(p.db, p.db);
  double value = linear_bell(p, dal, dbo);
  for (int sweep = 0; sweep < 300; ++sweep) {
    for (int g = 0; g < 2; ++g) {
      EigenMatrix x = sign_of_pair(g, 0) / p.eff[g][0] * dbo[0] +
                      sign_of_pair(g, 1) / p.eff[g][1] * dbo[1];
      EigenMatrix e = ops::partial_trace_second(
          ops::tensor_product(
              ops::HermitianOperator(ops::ComplexMatrix(ia), 0.0),
              ops::HermitianOperator(ops::ComplexMatrix(x)))
                  .eigen() *
              p.rho,
          p.da, p.db);
      e = (e + e.adjoint()) / 2.0;
      dal[g] = best_delta(p.success_alice[g], e);
    }
    for (int g = 0; g < 2; ++g) {
      EigenMatrix y = sign_of_pair(0, g) / p.eff[0][g] * dal[0] +
                      sign_of_pair(1, g) / p.eff[1][g] * dal[1];
      EigenMatrix e = ops::partial_trace_first(
          ops::tensor_product(
              ops::HermitianOperator(ops::ComplexMatrix(y)),
              ops::HermitianOperator(ops::ComplexMatrix(ib), 0.0))
                  .eigen() *
              p.rho,
          p.da, p.db);
      e = (e + e.adjoint()) / 2.0;
      dbo[g] = best_delta(p.success_bob[g], e);
    }
    const double next = linear_bell(p, dal, dbo);
    if (next - value < 1e-13) {
      value = std::max(value, next);
      break;
    }
    value = next;
  }
  return value;
}

inline bell::BellScenario scenario_from_deltas(
    const FixedStateProblem& p, const std::array<EigenMatrix, 2>& dal,
    const std::array<EigenMatrix, 2>& dbo) {
  auto measurement = [](const ops::HermitianOperator& s,
                        const EigenMatrix& delta) {
    return bell::DichotomicMeasurement(
        ops::PovmElement(ops::HermitianOperator(
            ops::ComplexMatrix((s.eigen() + delta) / 2.0))),
        ops::PovmElement(ops::HermitianOperator(
            ops::ComplexMatrix((s.eigen() - delta) / 2.0))));
  };
  bell::PartySettings new_alice(measurement(p.success_alice[0], dal[0]),
                                measurement(p.success_alice[1], dal[1]));
  bell::PartySettings new_bob(measurement(p.success_bob[0], dbo[0]),
                              measurement(p.success_bob[1], dbo[1]));
  return bell::BellScenario(
      ops::HermitianOperator(ops::ComplexMatrix(p.rho)),
      std::move(new_alice), std::move(new_bob));
}

}  // namespace detail

// A separable scenario violating the postselected CHSH bound, with the
// witness pairs that generated it. bell_value is the generic evaluator's
// result on the returned scenario; construction_value is the internal linear
// form and must agree within numerical tolerance.
struct SeparableViolation {
  bell::BellScenario scenario;
  double bell_value = 0.0;
  double construction_value = 0.0;
  EigenVector phi0, phi1, chi0, chi1;
};

// Builds a two-term product mixture from per-party witness pairs and signed
// outcome operators violating |B| <= 2. The textbook split (full operator on
// one setting, a rank-one piece on the other) is used as a starting point
// when it is a valid sub-POVM; in general it is not positive semidefinite,
// so the split is refined by exact per-setting ascent within the valid set.
// If the balanced mixture stalls at the classical bound, other mixture
// weights are scanned.
inline SeparableViolation separable_violation_construction(
    const bell::PartySettings& alice, const bell::PartySettings& bob) {
  const FairnessVerdict v = quantum_fairness_check(alice, bob);
  if (v.fair()) {
    throw ConditionHolds(
        "separable_violation_construction: measurements satisfy the "
        "fair-sampling condition");
  }
  if (alice.dim() < 2 || bob.dim() < 2) {
    throw DomainError(
        "separable_violation_construction: parties must have dimension >= 2");
  }

  auto party_pair = [](const bell::PartySettings& p, const PartyFairness& pf)
      -> std::pair<EigenVector, EigenVector> {
    if (!pf.fair) {
      return find_condition_witness_states(
          ops::PovmElement(p.upper().success()),
          ops::PovmElement(p.lower().success()));
    }
    // Fair side: every orthonormal pair satisfies the orientation with
    // equality; the two largest eigenvectors of the success operator keep
    // the pair efficiencies maximal.
    const ops::EigResult eig = ops::eig_hermitian(p.upper().success());
    return {eig.vectors.col(0), eig.vectors.col(1)};
  };
  const auto [phi0, phi1] = party_pair(alice, v.alice);
  const auto [chi0, chi1] = party_pair(bob, v.bob);

  const EigenMatrix pa0 = ops::projector(phi0).eigen();
  const EigenMatrix qa0 = ops::projector(chi0).eigen();
  const EigenMatrix product0 =
      ops::projector(ops::kron_vec(phi0, chi0)).eigen();
  const EigenMatrix product1 =
      ops::projector(ops::kron_vec(phi1, chi1)).eigen();

  const EigenMatrix sa_lower = alice.lower().success().eigen();
  const EigenMatrix sb_upper = bob.upper().success().eigen();

  double best_value = -1e300;
  std::optional<detail::FixedStateProblem> best_problem;
  std::array<EigenMatrix, 2> best_dal, best_dbo;

  const std::array<double, 9> weights = {0.5,  0.1, 0.2, 0.3, 0.4,
                                         0.6, 0.7, 0.8, 0.9};
  for (double t : weights) {
    const EigenMatrix rho = t * product0 + (1.0 - t) * product1;
    const detail::FixedStateProblem p =
        detail::make_problem(alice, bob, rho);

    // Start 1: every signed operator equals its success operator (value
    // exactly 2). Start 2: the textbook split, clipped into validity.
    std::array<std::array<EigenMatrix, 2>, 2> dal_starts = {{
        {p.success_alice[0].eigen(), p.success_alice[1].eigen()},
        {p.success_alice[0].eigen(),
         detail::clip_delta(
             alice.lower().success(),
             2.0 * detail::vec_expect(sa_lower, phi0) * pa0 - sa_lower)},
    }};
    std::array<std::array<EigenMatrix, 2>, 2> dbo_starts = {{
        {p.success_bob[0].eigen(), p.success_bob[1].eigen()},
        {detail::clip_delta(
             bob.upper().success(),
             2.0 * detail::vec_expect(sb_upper, chi0) * qa0 - sb_upper),
         p.success_bob[1].eigen()},
    }};
    for (int start = 0; start < 2; ++start) {
      std::array<EigenMatrix, 2> dal = dal_starts[start];
      std::array<EigenMatrix, 2> dbo = dbo_starts[start];
      const double value = detail::seesaw_deltas(p, dal, dbo);
      if (value > best_value) {
        best_value = value;
        best_problem = p;
        best_dal = dal;
        best_dbo = dbo;
      }
    }
    if (best_value > 2.0 + 1e-9) break;
  }
  if (best_value <= 2.0) {
    throw NonConvergence(
        "separable_violation_construction: ascent stalled at " +
        std::to_string(best_value));
  }

  bell::BellScenario scenario =
      detail::scenario_from_deltas(*best_problem, best_dal, best_dbo);
  const double direct = bell::bell_postselected(scenario);
  return SeparableViolation{std::move(scenario), direct, best_value,
                            phi0,               phi1,   chi0,
                            chi1};
}

// Result of the loss-boosted two-qubit construction: a scenario whose
// postselected CHSH value exceeds 2*sqrt(2), the direct evaluation, and the
// closed-form prediction the direct value must match.
struct TsirelsonViolation {
  bell::BellScenario scenario;
  double bell_value = 0.0;
  double closed_form = 0.0;
};

// One party loses the |1> component of one setting with survival probability
// p (success operator diag(1, p)), the other party mirrors with p of its
// own; for p_A below sqrt(p_B) (strictly, with sqrt(p_B) < 1) the
// postselected value exceeds the lossless quantum maximum. The roles swap
// when the other strict condition holds instead; the first branch wins if
// both do. Values within 1e-12 of a boundary are rejected.
inline TsirelsonViolation tsirelson_violation_construction(double p_a,
                                                           double p_b) {
  if (!(p_a > 0.0) || p_a > 1.0 || !(p_b > 0.0) || p_b > 1.0) {
    throw OutOfDomain("tsirelson_violation_construction: survival "
                      "probabilities must lie in (0, 1]");
  }
  const double margin = 1e-12;
  const bool branch1 =
      std::sqrt(p_b) - p_a > margin && 1.0 - std::sqrt(p_b) > margin;
  const bool branch2 =
      std::sqrt(p_a) - p_b > margin && 1.0 - std::sqrt(p_a) > margin;
  if (!branch1 && !branch2) {
    throw OutOfDomain(
        "tsirelson_violation_construction: neither strict domain condition "
        "holds for p_a = " +
        std::to_string(p_a) + ", p_b = " + std::to_string(p_b));
  }

  const EigenMatrix y = ops::pauli_y().eigen();
  const EigenMatrix z = ops::pauli_z().eigen();
  const ops::HermitianOperator ma = ops::diag_op({1.0, p_a});
  const ops::HermitianOperator mb = ops::diag_op({1.0, p_b});
  const EigenMatrix ra = ops::psd_sqrt(ma).eigen();
  const EigenMatrix rb = ops::psd_sqrt(mb).eigen();
  const double inv_rt2 = 1.0 / std::sqrt(2.0);

  std::array<EigenMatrix, 2> dal, dbo;
  double closed = 0.0;
  if (branch1) {
    dal = {-(ra * z * ra), y};
    dbo = {inv_rt2 * (rb * (y - z) * rb), inv_rt2 * (y + z)};
    closed = 2.0 * std::sqrt(2.0) +
             std::sqrt(2.0) * (1.0 - std::sqrt(p_b)) *
                 (std::sqrt(p_b) - p_a) / ((1.0 + p_a) * (1.0 + p_b));
  } else {
    dal = {inv_rt2 * (ra * (y - z) * ra), inv_rt2 * (y + z)};
    dbo = {-(rb * z * rb), y};
    closed = 2.0 * std::sqrt(2.0) +
             std::sqrt(2.0) * (1.0 - std::sqrt(p_a)) *
                 (std::sqrt(p_a) - p_b) / ((1.0 + p_a) * (1.0 + p_b));
  }

  // |psi> = i(|00> + |11>)/2 + (|01> + |10>)/2, symmetric under party
  // exchange, so the same state serves both branches. The relative phase
  // matters: conjugating it negates every cross correlator above.
  EigenVector psi(4);
  psi << Cx(0.0, 0.5), Cx(0.5, 0.0), Cx(0.5, 0.0), Cx(0.0, 0.5);
  const EigenMatrix rho = ops::projector(psi).eigen();

  auto measurement = [](const ops::HermitianOperator& s,
                        const EigenMatrix& delta) {
    return bell::DichotomicMeasurement(
        ops::PovmElement(ops::HermitianOperator(
            ops::ComplexMatrix((s.eigen() + delta) / 2.0))),
        ops::PovmElement(ops::HermitianOperator(
            ops::ComplexMatrix((s.eigen() - delta) / 2.0))));
  };
  const ops::HermitianOperator id2 = ops::identity_op(2);
  bell::PartySettings alice(measurement(ma, dal[0]), measurement(id2, dal[1]));
  bell::PartySettings bob(measurement(mb, dbo[0]), measurement(id2, dbo[1]));
  bell::BellScenario scenario(
      ops::HermitianOperator(ops::ComplexMatrix(rho)), std::move(alice),
      std::move(bob));
  const double direct = bell::bell_postselected(scenario);
  return TsirelsonViolation{std::move(scenario), direct, closed};
}

}  // namespace fairness
}  // namespace fairbell

#endif  // FAIRBELL_FAIRNESS_HPP_
