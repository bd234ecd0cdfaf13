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
// Closed-form postselection constructions on non-orthogonal signal states:
// a two-qubit scheme parameterized by the state overlap kappa whose
// postselected CHSH value passes the lossless quantum maximum, the singular
// value decomposition of its non-unitary filter with the resulting detector
// efficiency, the constant-success-probability counterexample scenario, and
// a three-qubit postselection protocol.

#ifndef FAIRBELL_SCHEME_HPP_
#define FAIRBELL_SCHEME_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "fairbell/errors.hpp"
#include "fairbell/matrix.hpp"
#include "fairbell/scenario.hpp"

namespace fairbell {
namespace scheme {

// The two signal states are embedded in an orthonormal qubit frame as
// |u> = cos(chi)|0> + sin(chi)|1> and |v> = cos(chi)|0> - sin(chi)|1> with
// cos(2 chi) = kappa, so <u|v> = kappa and the measurement basis
// |+> ∝ |u>+|v> = |0>, |-> ∝ |u>-|v> = |1>.

namespace detail {

inline void require_kappa(double kappa, const char* where) {
  if (!(kappa >= 0.0) || kappa >= 1.0) {
    throw OutOfDomain(std::string(where) +
                      ": overlap kappa must lie in [0, 1), got " +
                      std::to_string(kappa));
  }
}

inline void require_angle(double angle, const char* where) {
  if (!std::isfinite(angle)) {
    throw DomainError(std::string(where) + ": angle is not finite");
  }
}

}  // namespace detail

// One measurement configuration: the state overlap and the per-party,
// per-setting rotation angles of the partial phase filter.
struct KappaScheme {
  double kappa = 0.0;
  double theta_upper = 0.0;  // first party, upper setting
  double theta_lower = 0.0;  // first party, lower setting
  double phi_upper = 0.0;    // second party, upper setting
  double phi_lower = 0.0;    // second party, lower setting
};

// The one-parameter symmetric angle family maximizing the Bell function:
// upper angles -Theta/4 for both parties, lower angles 3*Theta/4, so the
// lower-minus-upper gap is Theta on each side and the four-angle sum is
// Theta as well.
inline KappaScheme symmetric_scheme(double kappa, double big_theta) {
  detail::require_kappa(kappa, "symmetric_scheme");
  detail::require_angle(big_theta, "symmetric_scheme");
  return KappaScheme{kappa, -big_theta / 4.0, 3.0 * big_theta / 4.0,
                     -big_theta / 4.0, 3.0 * big_theta / 4.0};
}

// Postselected outcome probabilities (P++, P+-, P-+, P--) after both filters
// fire; they depend on the angles only through theta + phi and sum to 1.
inline std::array<double, 4> scheme_probabilities(double kappa, double theta,
                                                  double phi) {
  detail::require_kappa(kappa, "scheme_probabilities");
  detail::require_angle(theta, "scheme_probabilities");
  detail::require_angle(phi, "scheme_probabilities");
  const double c = std::cos(theta + phi);
  const double den = 4.0 * (1.0 - kappa * kappa * c);
  const double p_pp = (1.0 + kappa) * (1.0 + kappa) * (1.0 - c) / den;
  const double p_cross = (1.0 - kappa * kappa) * (1.0 + c) / den;
  const double p_mm = (1.0 - kappa) * (1.0 - kappa) * (1.0 - c) / den;
  return {p_pp, p_cross, p_cross, p_mm};
}

// Postselected correlator C = P++ - P+- - P-+ + P--, in closed form
// (kappa^2 - cos(theta+phi)) / (1 - kappa^2 cos(theta+phi)).
inline double scheme_correlator(double kappa, double theta, double phi) {
  detail::require_kappa(kappa, "scheme_correlator");
  detail::require_angle(theta, "scheme_correlator");
  detail::require_angle(phi, "scheme_correlator");
  const double c = std::cos(theta + phi);
  return (kappa * kappa - c) / (1.0 - kappa * kappa * c);
}

// Bell function restricted to the symmetric angle family, where it depends
// only on the gap Theta: B = 3 C(Theta/2) - C(3 Theta/2).
inline double scheme_bell(double kappa, double big_theta) {
  return 3.0 * scheme_correlator(kappa, big_theta / 2.0, 0.0) -
         scheme_correlator(kappa, 3.0 * big_theta / 2.0, 0.0);
}

// Closed approximation of the maximizing gap: pi (17 + cos(pi kappa)) / 12.
// Pure arithmetic, valid on the closed interval including kappa = 1.
inline double theta_approx(double kappa) {
  return M_PI * (17.0 + std::cos(M_PI * kappa)) / 12.0;
}

struct ThetaOptimum {
  double theta = 0.0;
  double bell = 0.0;
};

// Maximizes scheme_bell over Theta in [pi, 2 pi]: a 64-point grid seeds a
// golden-section refinement, and the closed approximation competes as a
// candidate so the result never falls below it.
inline ThetaOptimum optimal_theta(double kappa) {
  detail::require_kappa(kappa, "optimal_theta");
  const double lo = M_PI, hi = 2.0 * M_PI;
  const int n = 64;
  const double h = (hi - lo) / (n - 1);
  double center = lo, center_value = scheme_bell(kappa, lo);
  for (int i = 1; i < n; ++i) {
    const double t = lo + i * h;
    const double v = scheme_bell(kappa, t);
    if (v > center_value) {
      center = t;
      center_value = v;
    }
  }
  double a = std::max(lo, center - h);
  double b = std::min(hi, center + h);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = scheme_bell(kappa, x1), f2 = scheme_bell(kappa, x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = scheme_bell(kappa, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = scheme_bell(kappa, x1);
    }
  }
  ThetaOptimum best{(a + b) / 2.0, scheme_bell(kappa, (a + b) / 2.0)};
  for (double candidate : {center, theta_approx(kappa)}) {
    const double v = scheme_bell(kappa, candidate);
    if (v > best.bell) best = ThetaOptimum{candidate, v};
  }
  return best;
}

// Matrix of the partial phase filter in the orthonormal frame: fixes |u>,
// multiplies |v> by e^{i theta}. Non-unitary whenever kappa > 0.
inline EigenMatrix filter_matrix(double kappa, double theta) {
  detail::require_kappa(kappa, "filter_matrix");
  detail::require_angle(theta, "filter_matrix");
  const double c = std::sqrt((1.0 + kappa) / 2.0);
  const double s = std::sqrt((1.0 - kappa) / 2.0);
  const Cx e(std::cos(theta), std::sin(theta));
  EigenMatrix r(2, 2);
  r << (1.0 + e) / 2.0, (c / (2.0 * s)) * (1.0 - e),
      (s / (2.0 * c)) * (1.0 - e), (1.0 + e) / 2.0;
  return r;
}

// Singular value decomposition of the filter, filter = u_plus * W * u_minus
// adjoint up to a global phase. w holds the singular values in ascending
// order; their product is 1, so the closed-form scalars obey a = 2 + kappa d
// and r = sqrt(a^2 - 4).
struct FilterSvd {
  EigenMatrix u_plus;
  EigenMatrix u_minus;
  Eigen::Vector2d w;
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double r = 0.0;
};

inline FilterSvd filter_svd(double kappa, double theta) {
  detail::require_kappa(kappa, "filter_svd");
  detail::require_angle(theta, "filter_svd");
  FilterSvd f;
  f.b = std::sin(theta) * (std::sqrt((1.0 + kappa) / (1.0 - kappa)) -
                           std::sqrt((1.0 - kappa) / (1.0 + kappa)));
  const double sin_half = std::sin(theta / 2.0);
  f.d = 4.0 * kappa * sin_half * sin_half / (1.0 - kappa * kappa);
  f.a = 2.0 + kappa * f.d;
  f.r = std::sqrt(std::max(0.0, f.a * f.a - 4.0));
  f.w << std::sqrt((f.a - f.r) / 2.0), std::sqrt((f.a + f.r) / 2.0);

  const double n_plus = std::hypot(f.b, f.r + f.d);
  const double n_minus = std::hypot(f.b, f.r - f.d);
  if (std::min(n_plus, n_minus) > 1e-9) {
    auto unitary = [&](double m, double norm) {
      EigenMatrix u(2, 2);
      u << Cx(0, -f.b), Cx(m, 0), Cx(-m, 0), Cx(0, f.b);
      return EigenMatrix(u / norm);
    };
    f.u_plus = unitary(f.r + f.d, n_plus);
    f.u_minus = unitary(f.r - f.d, n_minus);
    return f;
  }
  // Degenerate closed form (the normalizer vanishes, e.g. theta = 0 or
  // kappa = 0 where the filter is unitary, or r = d exactly): take the
  // numeric decomposition, reordered to the ascending convention.
  const ops::SvdResult sv = ops::svd(ops::ComplexMatrix(
      filter_matrix(kappa, theta)));
  f.u_plus = EigenMatrix(2, 2);
  f.u_plus.col(0) = sv.u.col(1);
  f.u_plus.col(1) = sv.u.col(0);
  f.u_minus = EigenMatrix(2, 2);
  f.u_minus.col(0) = sv.v.col(1);
  f.u_minus.col(1) = sv.v.col(0);
  return f;
}

// Detector efficiency required to realize the filter by selective
// absorption: the ratio of its singular values, sqrt((a-r)/(a+r)).
inline double scheme_efficiency_eta(double kappa, double theta) {
  const FilterSvd f = filter_svd(kappa, theta);
  return std::sqrt((f.a - f.r) / (f.a + f.r));
}

// Largest postselected CHSH value a local hidden-variable theory can reach
// when every detector has efficiency eta: 4/eta - 2.
inline double lhv_max_given_eta(double eta) {
  if (!(eta > 0.0) || eta > 1.0) {
    throw OutOfDomain("lhv_max_given_eta: efficiency must lie in (0, 1], got " +
                      std::to_string(eta));
  }
  return 4.0 / eta - 2.0;
}

// Realizes the scheme as a generic scenario: the shared state is the
// normalized |uu> - |vv> (the maximally entangled |01>+|10> in the frame),
// and each setting applies its filter scaled to largest singular value 1,
// then measures in the frame basis. The postselected CHSH value of the
// result equals the analytic four-correlator combination.
inline bell::BellScenario scheme_as_scenario(const KappaScheme& s) {
  detail::require_kappa(s.kappa, "scheme_as_scenario");
  const double c = std::sqrt((1.0 + s.kappa) / 2.0);
  const double sn = std::sqrt((1.0 - s.kappa) / 2.0);
  EigenVector u(2), v(2);
  u << Cx(c, 0), Cx(sn, 0);
  v << Cx(c, 0), Cx(-sn, 0);
  EigenVector psi = ops::kron_vec(u, u) - ops::kron_vec(v, v);
  psi /= psi.norm();

  auto setting = [&](double angle) {
    const FilterSvd f = filter_svd(s.kappa, angle);
    const EigenMatrix k = filter_matrix(s.kappa, angle) / f.w(1);
    auto outcome = [&](int basis) {
      const EigenVector ket = EigenVector::Unit(2, basis);
      const EigenMatrix m = k.adjoint() * ops::projector(ket).eigen() * k;
      return ops::PovmElement(ops::HermitianOperator(ops::ComplexMatrix(m)));
    };
    return bell::DichotomicMeasurement(outcome(0), outcome(1));
  };
  bell::PartySettings alice(setting(s.theta_upper), setting(s.theta_lower));
  bell::PartySettings bob(setting(s.phi_upper), setting(s.phi_lower));
  return bell::BellScenario(ops::projector(psi), std::move(alice),
                            std::move(bob));
}

// Two-bit classically correlated scenario whose joint success probability is
// exactly 1/2 for every setting pair while the postselected CHSH value is
// the algebraic maximum 4: constant joint efficiency alone does not restore
// the classical bound. The first party's settings succeed on opposite halves
// of the mixture; the second party's lower setting reads the bit through its
// outcome sign.
inline bell::BellScenario constant_half_efficiency_scenario() {
  EigenMatrix rho = EigenMatrix::Zero(4, 4);
  rho(0, 0) = 0.5;  // |00><00|
  rho(3, 3) = 0.5;  // |11><11|
  auto povm = [](double x, double y) {
    return ops::PovmElement(ops::diag_op({x, y}));
  };
  bell::PartySettings alice(
      bell::DichotomicMeasurement(povm(1, 0), povm(0, 0)),
      bell::DichotomicMeasurement(povm(0, 1), povm(0, 0)));
  bell::PartySettings bob(
      bell::DichotomicMeasurement(povm(1, 1), povm(0, 0)),
      bell::DichotomicMeasurement(povm(1, 0), povm(0, 1)));
  return bell::BellScenario(
      ops::HermitianOperator(ops::ComplexMatrix(rho), 0.0), std::move(alice),
      std::move(bob));
}

// Three-qubit state (|+++> + |--->)/sqrt(2) in the Y eigenbasis, the input
// for which the three-qubit postselection protocol reports its maximum.
inline ops::HermitianOperator ghz_y_state() {
  EigenVector plus_y(2), minus_y(2);
  plus_y << Cx(1.0 / std::sqrt(2.0), 0), Cx(0, 1.0 / std::sqrt(2.0));
  minus_y << Cx(1.0 / std::sqrt(2.0), 0), Cx(0, -1.0 / std::sqrt(2.0));
  const EigenVector ppp =
      ops::kron_vec(ops::kron_vec(plus_y, plus_y), plus_y);
  const EigenVector mmm =
      ops::kron_vec(ops::kron_vec(minus_y, minus_y), minus_y);
  EigenVector psi = (ppp + mmm) / std::sqrt(2.0);
  return ops::projector(psi);
}

// Three-qubit postselection protocol: measure Z on the forced qubit and
// postselect on +1; on the renormalized remaining pair the inferred-outcome
// identities contribute exactly 2, so the reported quantity is
// C(Z,Z) + 2 - C(X,X) of that pair.
inline double ghz_postselected_bell(const ops::HermitianOperator& rho,
                                    int forced_qubit = 2) {
  if (rho.dim() != 8) {
    throw DimensionMismatch("ghz_postselected_bell: expected an 8-dim "
                            "operator, got dim " +
                            std::to_string(rho.dim()));
  }
  if (forced_qubit < 0 || forced_qubit > 2) {
    throw DomainError("ghz_postselected_bell: forced qubit index " +
                      std::to_string(forced_qubit) + " out of range");
  }
  if (std::abs(rho.eigen().trace().real() - 1.0) > 1e-9) {
    throw DomainError("ghz_postselected_bell: state trace is not 1");
  }
  const ops::EigResult spec = ops::eig_hermitian(rho);
  if (spec.values(rho.dim() - 1) < -ops::kPsdTol) {
    throw DomainError("ghz_postselected_bell: state is not positive "
                      "semidefinite");
  }

  // Qubit q occupies bit (2 - q) of the 8-dim index; keep indices whose
  // forced bit is 0 (the Z = +1 branch) and pack the other two bits in
  // qubit order.
  std::array<int, 4> kept{};
  int filled = 0;
  for (int n = 0; n < 8; ++n) {
    if ((n >> (2 - forced_qubit)) & 1) continue;
    kept[filled++] = n;
  }
  EigenMatrix pair = EigenMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      pair(i, j) = rho.eigen()(kept[i], kept[j]);
    }
  }
  const double norm = pair.trace().real();
  if (norm < 1e-12) {
    throw CompleteLoss("ghz_postselected_bell: postselection probability " +
                       std::to_string(norm));
  }
  pair /= norm;
  const ops::HermitianOperator state{ops::ComplexMatrix(std::move(pair))};
  const double c_zz = ops::expectation(
      ops::tensor_product(ops::pauli_z(), ops::pauli_z()), state);
  const double c_xx = ops::expectation(
      ops::tensor_product(ops::pauli_x(), ops::pauli_x()), state);
  return c_zz + 2.0 - c_xx;
}

}  // namespace scheme
}  // namespace fairbell

#endif  // FAIRBELL_SCHEME_HPP_
