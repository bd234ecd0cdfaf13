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
// Numerical maximization of the postselected Bell quantity under a fixed
// loss structure. The search alternates an exact signed-outcome step (each
// setting's Delta is solved in closed form at a fixed state, so that step is
// monotone) with an adaptive projected-gradient step on the state. Restarts
// are deterministic: restart i draws from a generator seeded with seed ^ i,
// and results merge by restart index, so a given configuration always
// reproduces the same output. On top of the single-point maximizer sit a
// one-sided-loss efficiency scan, a separable-state search at fixed
// measurements, and the loss-tradeoff curve for the partial-filter scheme.

#ifndef FAIRBELL_OPTIMIZE_HPP_
#define FAIRBELL_OPTIMIZE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairbell/errors.hpp"
#include "fairbell/fairness.hpp"
#include "fairbell/matrix.hpp"
#include "fairbell/rng.hpp"
#include "fairbell/scenario.hpp"
#include "fairbell/scheme.hpp"

namespace fairbell {
namespace optimize {

// Which family of states the maximization searches over.
enum class StateClass { kEntangledPure, kProductPure, kSeparableMixture };

struct OptimizationConfig {
  int restarts = 32;
  int max_iterations = 500;
  double convergence_tol = 1e-10;
  std::uint64_t seed = 42;
  StateClass state_class = StateClass::kEntangledPure;
};

// The argmax scenario repackages the best state and signed outcome operators
// as measurements, so bell_postselected(scenario) reproduces best_bell.
struct OptimizationResult {
  double best_bell = 0.0;
  bell::BellScenario scenario;
  std::vector<double> restart_values;  // one entry per restart, in order
  int iterations_used = 0;             // outer iterations of the best restart
  bool converged = false;              // best restart met convergence_tol
};

namespace detail {

constexpr double kSuccessFloor = 1e-9;  // smallest usable success eigenvalue
constexpr double kEffFloor = 1e-12;     // joint success probability guard
constexpr int kStateRounds = 40;        // ascent rounds per outer iteration
constexpr int kStallRounds = 10;        // consecutive failed rounds => stop

inline void validate_config(const OptimizationConfig& cfg) {
  if (cfg.restarts < 1) {
    throw DomainError("OptimizationConfig: restarts must be >= 1");
  }
  if (cfg.max_iterations < 1) {
    throw DomainError("OptimizationConfig: max_iterations must be >= 1");
  }
  if (!(cfg.convergence_tol > 0.0)) {
    throw DomainError("OptimizationConfig: convergence_tol must be > 0");
  }
}

// Everything that stays fixed while states and signed outcomes move: the
// per-party success operators and their pairwise Kronecker products.
struct LossSetup {
  int da = 0;
  int db = 0;
  std::array<ops::HermitianOperator, 2> success_a;
  std::array<ops::HermitianOperator, 2> success_b;
  std::array<std::array<EigenMatrix, 2>, 2> q;
};

inline LossSetup make_loss_setup(const std::array<ops::PovmElement, 2>& alice,
                                 const std::array<ops::PovmElement, 2>& bob) {
  if (alice[0].dim() != alice[1].dim() || bob[0].dim() != bob[1].dim()) {
    throw DimensionMismatch(
        "maximize_bell_fixed_loss: a party's settings have different "
        "dimensions");
  }
  LossSetup s{alice[0].dim(),
              bob[0].dim(),
              {alice[0].op(), alice[1].op()},
              {bob[0].op(), bob[1].op()},
              {}};
  for (const auto& party : {s.success_a, s.success_b}) {
    for (const auto& m : party) {
      const double lo = ops::eig_hermitian(m).values(m.dim() - 1);
      if (lo < kSuccessFloor) {
        throw CompleteLoss(
            "maximize_bell_fixed_loss: success operator eigenvalue " +
            std::to_string(lo) + " below floor");
      }
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      s.q[i][j] = ops::tensor_product(s.success_a[i], s.success_b[j]).eigen();
    }
  }
  return s;
}

// Numerators P and denominators Q of the four correlator ratios.
struct RatioObjective {
  std::array<std::array<EigenMatrix, 2>, 2> q;
  std::array<std::array<EigenMatrix, 2>, 2> p;
};

inline std::array<std::array<EigenMatrix, 2>, 2> delta_krons(
    const std::array<EigenMatrix, 2>& dal,
    const std::array<EigenMatrix, 2>& dbo) {
  std::array<std::array<EigenMatrix, 2>, 2> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out[i][j] = ops::tensor_product(
                      ops::HermitianOperator(ops::ComplexMatrix(dal[i]), 0.0),
                      ops::HermitianOperator(ops::ComplexMatrix(dbo[j]), 0.0))
                      .eigen();
    }
  }
  return out;
}

// A convex mixture of pure components; factors are kept alongside the joint
// kets when the components are constrained to be product states.
struct MixtureState {
  std::vector<EigenVector> kets;
  std::vector<std::array<EigenVector, 2>> factors;
  std::vector<double> weights;
  bool product = false;
};

inline MixtureState initial_state(Rng& rng, int da, int db, int components,
                                  bool product) {
  MixtureState s;
  s.product = product;
  for (int k = 0; k < components; ++k) {
    if (product) {
      std::array<EigenVector, 2> f = {rng.random_ket(da), rng.random_ket(db)};
      s.kets.push_back(ops::kron_vec(f[0], f[1]));
      s.factors.push_back(std::move(f));
    } else {
      s.kets.push_back(rng.random_ket(da * db));
    }
    s.weights.push_back(1.0 / components);
  }
  return s;
}

inline EigenMatrix mixture_density(const MixtureState& s, int dim) {
  EigenMatrix rho = EigenMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < s.kets.size(); ++k) {
    rho += s.weights[k] * (s.kets[k] * s.kets[k].adjoint());
  }
  rho = (rho + rho.adjoint()) / 2.0;
  return rho / rho.trace().real();
}

struct RatioTerms {
  std::array<std::array<double, 2>, 2> num{};
  std::array<std::array<double, 2>, 2> den{};
  double value = 0.0;
};

inline RatioTerms eval_terms(const RatioObjective& obj,
                             const MixtureState& s) {
  RatioTerms t;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < s.kets.size(); ++k) {
        num += s.weights[k] * fairness::detail::vec_expect(obj.p[i][j],
                                                           s.kets[k]);
        den += s.weights[k] * fairness::detail::vec_expect(obj.q[i][j],
                                                           s.kets[k]);
      }
      if (den < kEffFloor) {
        throw CompleteLoss(
            "optimize: setting pair success probability " +
            std::to_string(den) + " vanished during the search");
      }
      t.num[i][j] = num;
      t.den[i][j] = den;
      t.value += fairness::detail::sign_of_pair(i, j) * num / den;
    }
  }
  return t;
}

// Gradient of the ratio sum with respect to the state: the value moves along
// G = sum_t (sign_t / D_t) (P_t - (N_t / D_t) Q_t), the same matrix whose
// diagonal quadratic forms are the derivatives with respect to the weights.
inline EigenMatrix ascent_matrix(const RatioObjective& obj,
                                 const RatioTerms& t) {
  EigenMatrix g = EigenMatrix::Zero(obj.q[0][0].rows(), obj.q[0][0].cols());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double scale = fairness::detail::sign_of_pair(i, j) / t.den[i][j];
      g += scale * (obj.p[i][j] - (t.num[i][j] / t.den[i][j]) * obj.q[i][j]);
    }
  }
  return g;
}

// (I (x) <b|) g, the first-party block of a joint-space gradient.
inline EigenVector contract_second(const EigenVector& g, const EigenVector& b,
                                   int da, int db) {
  EigenVector out = EigenVector::Zero(da);
  for (int i = 0; i < da; ++i) {
    out(i) = b.dot(g.segment(i * db, db));
  }
  return out;
}

// (<a| (x) I) g, the second-party block of a joint-space gradient.
inline EigenVector contract_first(const EigenVector& g, const EigenVector& a,
                                  int da, int db) {
  EigenVector out = EigenVector::Zero(db);
  for (int i = 0; i < da; ++i) {
    out += std::conj(a(i)) * g.segment(i * db, db);
  }
  return out;
}

// Euclidean projection onto the probability simplex (sort and threshold).
inline std::vector<double> project_to_simplex(const std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double candidate = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(v[i] - tau, 0.0);
  }
  return out;
}

// Adaptive projected gradient ascent on the mixture at fixed measurements.
// Each round tries a ket move and (for proper mixtures) a weight move; a
// move is kept only if it strictly improves the value, so the ascent is
// monotone. Step sizes halve on rejection; kStallRounds consecutive rounds
// without improvement end the ascent.
struct AscentOutcome {
  double value = 0.0;
  bool stalled = false;
};

inline AscentOutcome state_ascent(const RatioObjective& obj, MixtureState& s,
                                  int da, int db, int max_rounds) {
  RatioTerms t = eval_terms(obj, s);
  double value = t.value;
  double ket_step = 0.25, w_step = 0.25;
  int fails = 0;
  for (int round = 0; round < max_rounds; ++round) {
    const double round_start = value;
    {  // Ket move: all components along their phase-projected gradients.
      const EigenMatrix g = ascent_matrix(obj, t);
      std::vector<EigenVector> dir_a(s.kets.size()), dir_b(s.kets.size()),
          dir_full(s.kets.size());
      double norm2 = 0.0;
      for (std::size_t k = 0; k < s.kets.size(); ++k) {
        const EigenVector gj = g * s.kets[k];
        if (s.product) {
          EigenVector ga = contract_second(gj, s.factors[k][1], da, db);
          EigenVector gb = contract_first(gj, s.factors[k][0], da, db);
          ga -= s.factors[k][0].dot(ga) * s.factors[k][0];
          gb -= s.factors[k][1].dot(gb) * s.factors[k][1];
          norm2 += ga.squaredNorm() + gb.squaredNorm();
          dir_a[k] = std::move(ga);
          dir_b[k] = std::move(gb);
        } else {
          EigenVector gf = gj - s.kets[k].dot(gj) * s.kets[k];
          norm2 += gf.squaredNorm();
          dir_full[k] = std::move(gf);
        }
      }
      bool accepted = false;
      if (norm2 > 1e-28) {
        const double f = ket_step / std::sqrt(norm2);
        MixtureState cand = s;
        for (std::size_t k = 0; k < s.kets.size(); ++k) {
          if (s.product) {
            cand.factors[k][0] =
                (s.factors[k][0] + f * dir_a[k]).normalized();
            cand.factors[k][1] =
                (s.factors[k][1] + f * dir_b[k]).normalized();
            cand.kets[k] = ops::kron_vec(cand.factors[k][0],
                                         cand.factors[k][1]);
          } else {
            cand.kets[k] = (s.kets[k] + f * dir_full[k]).normalized();
          }
        }
        const RatioTerms ct = eval_terms(obj, cand);
        if (ct.value > value) {
          s = std::move(cand);
          t = ct;
          value = ct.value;
          ket_step = std::min(2.0, ket_step * 1.5);
          accepted = true;
        }
      }
      if (!accepted) ket_step /= 2.0;
    }
    if (s.weights.size() > 1) {  // Weight move within the simplex.
      const EigenMatrix g = ascent_matrix(obj, t);
      std::vector<double> grad(s.weights.size());
      double mean = 0.0;
      for (std::size_t k = 0; k < s.kets.size(); ++k) {
        grad[k] = fairness::detail::vec_expect(g, s.kets[k]);
        mean += grad[k];
      }
      mean /= static_cast<double>(grad.size());
      double norm2 = 0.0;
      for (double& x : grad) {
        x -= mean;
        norm2 += x * x;
      }
      bool accepted = false;
      if (norm2 > 1e-28) {
        const double f = w_step / std::sqrt(norm2);
        std::vector<double> cand_w(s.weights.size());
        for (std::size_t k = 0; k < cand_w.size(); ++k) {
          cand_w[k] = s.weights[k] + f * grad[k];
        }
        MixtureState cand = s;
        cand.weights = project_to_simplex(cand_w);
        const RatioTerms ct = eval_terms(obj, cand);
        if (ct.value > value) {
          s = std::move(cand);
          t = ct;
          value = ct.value;
          w_step = std::min(2.0, w_step * 1.5);
          accepted = true;
        }
      }
      if (!accepted) w_step /= 2.0;
    }
    if (value - round_start <= 1e-15) {
      if (++fails >= kStallRounds) return {value, true};
    } else {
      fails = 0;
    }
    if (ket_step < 1e-13 && (s.weights.size() <= 1 || w_step < 1e-13)) {
      return {value, true};
    }
  }
  return {value, false};
}

// Bridges the current mixture into the fixed-state signed-outcome
// subproblem solved exactly by the coordinate ascent in fairness.hpp.
inline fairness::detail::FixedStateProblem delta_problem(
    const LossSetup& setup, const EigenMatrix& rho) {
  fairness::detail::FixedStateProblem p{
      setup.da, setup.db, rho, setup.success_a, setup.success_b, {}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      p.eff[i][j] = (setup.q[i][j] * rho).trace().real();
      if (p.eff[i][j] < kEffFloor) {
        throw CompleteLoss(
            "optimize: setting pair success probability " +
            std::to_string(p.eff[i][j]) + " vanished during the search");
      }
    }
  }
  return p;
}

struct SeesawRun {
  double value = 0.0;
  MixtureState state;
  std::array<EigenMatrix, 2> delta_a, delta_b;
  int iterations = 0;
  bool converged = false;
};

// Full see-saw from a given starting point: exact signed-outcome solve,
// then a state ascent pass, until an outer iteration improves by less than
// the configured tolerance.
inline SeesawRun run_seesaw(const LossSetup& setup, MixtureState state,
                            std::array<EigenMatrix, 2> dal,
                            std::array<EigenMatrix, 2> dbo,
                            const OptimizationConfig& cfg) {
  RatioObjective obj{setup.q, delta_krons(dal, dbo)};
  double current = eval_terms(obj, state).value;
  int used = cfg.max_iterations;
  bool converged = false;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const EigenMatrix rho = mixture_density(state, setup.da * setup.db);
    fairness::detail::FixedStateProblem prob = delta_problem(setup, rho);
    const double after_delta = fairness::detail::seesaw_deltas(prob, dal, dbo);
    if (after_delta + 1e-9 < current) {
      throw NonConvergence(
          "optimize: exact signed-outcome step decreased the value from " +
          std::to_string(current) + " to " + std::to_string(after_delta));
    }
    obj.p = delta_krons(dal, dbo);
    const double next = state_ascent(obj, state, setup.da, setup.db,
                                     kStateRounds)
                            .value;
    const double gain = next - current;
    current = next;
    if (gain < cfg.convergence_tol) {
      used = it;
      converged = true;
      break;
    }
  }
  return {current, std::move(state), std::move(dal), std::move(dbo), used,
          converged};
}

// Random feasible signed-outcome initialization. Starting from the success
// operators themselves is a see-saw trap: with no loss the exact step then
// fixes every Delta at the identity, where the value is 2 for every state
// and the state gradient vanishes. A generic clipped Hermitian breaks that
// symmetry while staying inside -M <= Delta <= M.
inline std::array<EigenMatrix, 2> random_deltas(
    Rng& rng, const std::array<ops::HermitianOperator, 2>& success) {
  std::array<EigenMatrix, 2> out;
  for (int g = 0; g < 2; ++g) {
    out[g] = fairness::detail::clip_delta(
        success[g], rng.random_hermitian(success[g].dim()).eigen());
  }
  return out;
}

// Restart driver shared by the public fixed-loss entry points. Components
// and product flags encode the state class; merging is by restart index
// (first maximum wins), which keeps the result deterministic.
inline std::pair<SeesawRun, std::vector<double>> best_of_restarts(
    const LossSetup& setup, const OptimizationConfig& cfg, int components,
    bool product) {
  std::vector<double> values;
  values.reserve(cfg.restarts);
  std::optional<SeesawRun> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(cfg.seed ^ static_cast<std::uint64_t>(r));
    MixtureState s0 =
        initial_state(rng, setup.da, setup.db, components, product);
    std::array<EigenMatrix, 2> dal = random_deltas(rng, setup.success_a);
    std::array<EigenMatrix, 2> dbo = random_deltas(rng, setup.success_b);
    SeesawRun run = run_seesaw(setup, std::move(s0), std::move(dal),
                               std::move(dbo), cfg);
    values.push_back(run.value);
    if (!best || run.value > best->value) best = std::move(run);
  }
  return {std::move(*best), std::move(values)};
}

inline OptimizationResult package_result(const LossSetup& setup,
                                         const SeesawRun& run,
                                         std::vector<double> values) {
  const EigenMatrix rho = mixture_density(run.state, setup.da * setup.db);
  bell::BellScenario scenario = fairness::detail::scenario_from_deltas(
      delta_problem(setup, rho), run.delta_a, run.delta_b);
  return OptimizationResult{run.value, std::move(scenario), std::move(values),
                            run.iterations, run.converged};
}

inline std::pair<int, bool> state_shape(StateClass c) {
  switch (c) {
    case StateClass::kEntangledPure:
      return {1, false};
    case StateClass::kProductPure:
      return {1, true};
    default:
      return {4, true};
  }
}

}  // namespace detail

// Maximizes the postselected Bell quantity over states of the configured
// class and signed outcome operators compatible with the given success
// operators. A non-converged best restart is reported through the converged
// flag with the best value so far, never an exception.
inline OptimizationResult maximize_bell_fixed_loss(
    const std::array<ops::PovmElement, 2>& alice_success,
    const std::array<ops::PovmElement, 2>& bob_success,
    const OptimizationConfig& cfg) {
  detail::validate_config(cfg);
  const detail::LossSetup setup =
      detail::make_loss_setup(alice_success, bob_success);
  const auto [components, product] = detail::state_shape(cfg.state_class);
  auto [best, values] =
      detail::best_of_restarts(setup, cfg, components, product);
  return detail::package_result(setup, best, std::move(values));
}

// Diagnostic companion to maximize_bell_fixed_loss: the same search over
// rank-2 mixtures of (possibly entangled) pure states. Used to spot-check
// that restricting the main search to pure states loses nothing.
inline OptimizationResult maximize_bell_rank2(
    const std::array<ops::PovmElement, 2>& alice_success,
    const std::array<ops::PovmElement, 2>& bob_success,
    const OptimizationConfig& cfg) {
  detail::validate_config(cfg);
  const detail::LossSetup setup =
      detail::make_loss_setup(alice_success, bob_success);
  auto [best, values] = detail::best_of_restarts(setup, cfg, 2, false);
  return detail::package_result(setup, best, std::move(values));
}

struct LossScanPoint {
  double p = 0.0;
  double best_bell = 0.0;
};

// One-sided-loss efficiency scan: alice lossless, bob's upper setting keeps
// the lower basis state with probability p. Points are optimized
// independently, then a backward repair pass warm-starts any point that
// ended below its right neighbour (the signed outcomes of a larger p are
// feasible after clipping), which keeps the curve a monotone envelope.
inline std::vector<LossScanPoint> scan_fixed_loss(
    const std::vector<double>& p_grid, const OptimizationConfig& cfg) {
  detail::validate_config(cfg);
  if (p_grid.empty()) {
    throw DomainError("scan_fixed_loss: empty efficiency grid");
  }
  for (double p : p_grid) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw OutOfDomain("scan_fixed_loss: efficiency " + std::to_string(p) +
                        " outside (0, 1]");
    }
  }
  const int n = static_cast<int>(p_grid.size());
  const ops::PovmElement eye{ops::identity_op(2)};
  std::vector<detail::LossSetup> setups;
  std::vector<detail::SeesawRun> runs;
  setups.reserve(n);
  runs.reserve(n);
  const auto [components, product] = detail::state_shape(cfg.state_class);
  for (double p : p_grid) {
    setups.push_back(detail::make_loss_setup(
        {eye, eye}, {ops::PovmElement(ops::diag_op({1.0, p})), eye}));
    runs.push_back(
        detail::best_of_restarts(setups.back(), cfg, components, product)
            .first);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return p_grid[i] < p_grid[j]; });
  for (int k = n - 2; k >= 0; --k) {
    const int lo = order[k], hi = order[k + 1];
    if (runs[lo].value + 1e-12 >= runs[hi].value) continue;
    std::array<EigenMatrix, 2> dal, dbo;
    for (int g = 0; g < 2; ++g) {
      dal[g] = fairness::detail::clip_delta(setups[lo].success_a[g],
                                            runs[hi].delta_a[g]);
      dbo[g] = fairness::detail::clip_delta(setups[lo].success_b[g],
                                            runs[hi].delta_b[g]);
    }
    detail::SeesawRun warm =
        detail::run_seesaw(setups[lo], runs[hi].state, dal, dbo, cfg);
    if (warm.value > runs[lo].value) runs[lo] = std::move(warm);
  }
  std::vector<LossScanPoint> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back({p_grid[i], runs[i].value});
  return out;
}

// Maximizes the postselected Bell quantity over separable states at fixed
// measurements: a product-pure phase, then a refinement over mixtures of up
// to four product states, returning the better of the two.
inline OptimizationResult maximize_bell_separable(
    const bell::BellScenario& s, const OptimizationConfig& cfg) {
  detail::validate_config(cfg);
  const int da = s.alice().dim(), db = s.bob().dim();
  detail::RatioObjective obj;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto& ma = s.alice().at(bell::kSettings[i]);
      const auto& mb = s.bob().at(bell::kSettings[j]);
      obj.q[i][j] = ops::tensor_product(ma.success(), mb.success()).eigen();
      obj.p[i][j] = ops::tensor_product(ma.delta(), mb.delta()).eigen();
    }
  }
  auto run_state_only = [&](detail::MixtureState state) {
    double current = detail::eval_terms(obj, state).value;
    int used = cfg.max_iterations;
    bool converged = false;
    for (int it = 1; it <= cfg.max_iterations; ++it) {
      const double next =
          detail::state_ascent(obj, state, da, db, detail::kStateRounds)
              .value;
      const double gain = next - current;
      current = next;
      if (gain < cfg.convergence_tol) {
        used = it;
        converged = true;
        break;
      }
    }
    struct StateRun {
      double value;
      detail::MixtureState state;
      int iterations;
      bool converged;
    };
    return StateRun{current, std::move(state), used, converged};
  };
  std::vector<double> values;
  double best_value = 0.0;
  detail::MixtureState best_state;
  int best_iters = 0;
  bool best_conv = false, have_best = false;
  std::optional<std::array<EigenVector, 2>> best_product;
  double best_product_value = 0.0;
  const int mixture_restarts = std::max(1, cfg.restarts / 4);
  for (int r = 0; r < cfg.restarts + mixture_restarts; ++r) {
    Rng rng(cfg.seed ^ static_cast<std::uint64_t>(r));
    detail::MixtureState s0 =
        r < cfg.restarts ? detail::initial_state(rng, da, db, 1, true)
                         : detail::initial_state(rng, da, db, 4, true);
    if (r == cfg.restarts && best_product) {
      s0.factors[0] = *best_product;
      s0.kets[0] = ops::kron_vec(s0.factors[0][0], s0.factors[0][1]);
    }
    auto run = run_state_only(std::move(s0));
    values.push_back(run.value);
    if (!have_best || run.value > best_value) {
      best_value = run.value;
      best_state = run.state;
      best_iters = run.iterations;
      best_conv = run.converged;
      have_best = true;
    }
    if (r < cfg.restarts && (!best_product || run.value > best_product_value)) {
      best_product = run.state.factors[0];
      best_product_value = run.value;
    }
  }
  bell::BellScenario argmax(
      ops::HermitianOperator(
          ops::ComplexMatrix(detail::mixture_density(best_state, da * db))),
      s.alice(), s.bob());
  return OptimizationResult{best_value, std::move(argmax), std::move(values),
                            best_iters, best_conv};
}

struct SchemeTradeoffPoint {
  double kappa = 0.0;
  double theta = 0.0;  // operating angle gap used at this loss level
  double entangled_max = 0.0;
  double separable_max = 0.0;
  double lhv_max = 0.0;
  double eta = 0.0;
  bool entangled_converged = false;
  bool separable_converged = false;
};

// Loss-tradeoff curve. At each overlap the success operators are fixed to
// the scheme's filters at the optimal angle gap and the state is fixed to
// the maximally entangled state the scheme prepares; the signed outcome
// operators are then optimized exactly (restarts from random feasible
// points plus a warm start from the scheme's own outcome split). The
// separable maximum is evaluated at the optimized measurements, and the
// classical row uses the geometric mean of the two per-setting
// efficiencies. Optimizing the state as well would be wrong here: the
// measurements it finds are best answered by a separable state, which
// collapses the gap the curve is meant to display.
inline std::vector<SchemeTradeoffPoint> optimize_scheme_tradeoff(
    const std::vector<double>& kappa_grid, const OptimizationConfig& cfg) {
  detail::validate_config(cfg);
  if (kappa_grid.empty()) {
    throw DomainError("optimize_scheme_tradeoff: empty overlap grid");
  }
  std::vector<SchemeTradeoffPoint> out;
  out.reserve(kappa_grid.size());
  for (double kappa : kappa_grid) {
    const scheme::ThetaOptimum opt = scheme::optimal_theta(kappa);
    const scheme::KappaScheme ks = scheme::symmetric_scheme(kappa, opt.theta);
    const bell::BellScenario base = scheme::scheme_as_scenario(ks);
    const std::array<ops::PovmElement, 2> sa = {
        ops::PovmElement(base.alice().upper().success()),
        ops::PovmElement(base.alice().lower().success())};
    const std::array<ops::PovmElement, 2> sb = {
        ops::PovmElement(base.bob().upper().success()),
        ops::PovmElement(base.bob().lower().success())};
    const detail::LossSetup setup = detail::make_loss_setup(sa, sb);
    const fairness::detail::FixedStateProblem prob =
        detail::delta_problem(setup, base.state().eigen());
    double ent_value = 0.0;
    std::array<EigenMatrix, 2> best_dal, best_dbo;
    bool have_ent = false;
    auto consider = [&](std::array<EigenMatrix, 2> dal,
                        std::array<EigenMatrix, 2> dbo) {
      const double v = fairness::detail::seesaw_deltas(prob, dal, dbo);
      if (!have_ent || v > ent_value) {
        ent_value = v;
        best_dal = std::move(dal);
        best_dbo = std::move(dbo);
        have_ent = true;
      }
    };
    for (int r = 0; r < cfg.restarts; ++r) {
      Rng rng(cfg.seed ^ static_cast<std::uint64_t>(r));
      consider(detail::random_deltas(rng, setup.success_a),
               detail::random_deltas(rng, setup.success_b));
    }
    consider({base.alice().upper().delta().eigen(),
              base.alice().lower().delta().eigen()},
             {base.bob().upper().delta().eigen(),
              base.bob().lower().delta().eigen()});
    const bell::BellScenario ent_scenario =
        fairness::detail::scenario_from_deltas(prob, best_dal, best_dbo);
    OptimizationConfig sep_cfg = cfg;
    sep_cfg.state_class = StateClass::kSeparableMixture;
    const OptimizationResult sep =
        maximize_bell_separable(ent_scenario, sep_cfg);
    const double eta_upper =
        scheme::scheme_efficiency_eta(kappa, ks.theta_upper);
    const double eta_lower =
        scheme::scheme_efficiency_eta(kappa, ks.theta_lower);
    const double eta = std::sqrt(eta_upper * eta_lower);
    out.push_back({kappa, opt.theta, ent_value, sep.best_bell,
                   scheme::lhv_max_given_eta(eta), eta, true,
                   sep.converged});
  }
  return out;
}

}  // namespace optimize
}  // namespace fairbell

#endif  // FAIRBELL_OPTIMIZE_HPP_
