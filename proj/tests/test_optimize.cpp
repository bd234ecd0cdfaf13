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

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "fairbell/errors.hpp"
#include "fairbell/matrix.hpp"
#include "fairbell/optimize.hpp"
#include "fairbell/rng.hpp"
#include "fairbell/scenario.hpp"
#include "fairbell/scheme.hpp"
#include "test_helpers.hpp"

using Catch::Approx;
using fairbell::Cx;
using fairbell::EigenMatrix;
using fairbell::EigenVector;
using fairbell::Rng;
namespace ops = fairbell::ops;
namespace bell = fairbell::bell;
namespace opt = fairbell::optimize;
namespace scheme = fairbell::scheme;
using namespace fairbell_tests;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

ops::PovmElement eye2() { return ops::PovmElement(ops::identity_op(2)); }

ops::PovmElement lossy(double p) {
  return ops::PovmElement(ops::diag_op({1.0, p}));
}

// The optimizer must never report a value its own argmax cannot reproduce.
void check_result_contract(const opt::OptimizationResult& r, int restarts) {
  REQUIRE(static_cast<int>(r.restart_values.size()) >= restarts);
  double max_restart = r.restart_values.front();
  for (double v : r.restart_values) max_restart = std::max(max_restart, v);
  REQUIRE(r.best_bell == max_restart);
  REQUIRE(bell::bell_postselected(r.scenario) ==
          Approx(r.best_bell).margin(1e-9));
}

// Independent product-state oracle: evaluates the postselected quantity on a
// Bloch-angle grid of product kets at the scenario's fixed measurements.
double product_grid_max(const bell::BellScenario& s, int n_polar,
                        int n_azimuth) {
  std::array<std::array<EigenMatrix, 2>, 2> p, q;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto& ma = s.alice().at(bell::kSettings[i]);
      const auto& mb = s.bob().at(bell::kSettings[j]);
      p[i][j] = ops::tensor_product(ma.delta(), mb.delta()).eigen();
      q[i][j] = ops::tensor_product(ma.success(), mb.success()).eigen();
    }
  }
  std::vector<EigenVector> kets;
  for (int a = 0; a <= n_polar; ++a) {
    const double th = M_PI * a / n_polar;
    for (int b = 0; b < n_azimuth; ++b) {
      const double ph = 2.0 * M_PI * b / n_azimuth;
      EigenVector k(2);
      k << Cx(std::cos(th / 2), 0.0),
          Cx(std::sin(th / 2) * std::cos(ph), std::sin(th / 2) * std::sin(ph));
      kets.push_back(std::move(k));
    }
  }
  double best = -1e300;
  for (const auto& ka : kets) {
    for (const auto& kb : kets) {
      const EigenVector joint = ops::kron_vec(ka, kb);
      double value = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const double num = (joint.adjoint() * p[i][j] * joint)(0).real();
          const double den = (joint.adjoint() * q[i][j] * joint)(0).real();
          value += (i == 1 && j == 1 ? -1.0 : 1.0) * num / den;
        }
      }
      best = std::max(best, value);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("optimizer configuration validation") {
  opt::OptimizationConfig cfg;
  const std::array<ops::PovmElement, 2> id = {eye2(), eye2()};

  SECTION("invalid configurations are rejected") {
    cfg.restarts = 0;
    REQUIRE_THROWS_AS(opt::maximize_bell_fixed_loss(id, id, cfg),
                      fairbell::DomainError);
    cfg = {};
    cfg.max_iterations = 0;
    REQUIRE_THROWS_AS(opt::maximize_bell_fixed_loss(id, id, cfg),
                      fairbell::DomainError);
    cfg = {};
    cfg.convergence_tol = 0.0;
    REQUIRE_THROWS_AS(opt::maximize_bell_fixed_loss(id, id, cfg),
                      fairbell::DomainError);
  }

  SECTION("scan grids are validated") {
    cfg = {};
    REQUIRE_THROWS_AS(opt::scan_fixed_loss({}, cfg), fairbell::DomainError);
    REQUIRE_THROWS_AS(opt::scan_fixed_loss({0.5, 0.0}, cfg),
                      fairbell::OutOfDomain);
    REQUIRE_THROWS_AS(opt::scan_fixed_loss({1.2}, cfg),
                      fairbell::OutOfDomain);
    REQUIRE_THROWS_AS(opt::optimize_scheme_tradeoff({}, cfg),
                      fairbell::DomainError);
  }

  SECTION("vanishing success operators are complete loss") {
    const std::array<ops::PovmElement, 2> dead = {
        ops::PovmElement(ops::diag_op({1.0, 0.0})), eye2()};
    cfg = {};
    cfg.restarts = 1;
    REQUIRE_THROWS_AS(opt::maximize_bell_fixed_loss(id, dead, cfg),
                      fairbell::CompleteLoss);
  }
}

TEST_CASE("lossless search recovers the quantum maximum") {
  const std::array<ops::PovmElement, 2> id = {eye2(), eye2()};
  opt::OptimizationConfig cfg;
  cfg.restarts = 8;
  const auto r = opt::maximize_bell_fixed_loss(id, id, cfg);

  SECTION("value and diagnostics") {
    REQUIRE(r.best_bell == Approx(kTsirelson).margin(1e-6));
    REQUIRE(r.converged);
    REQUIRE(r.iterations_used >= 1);
    check_result_contract(r, cfg.restarts);
  }

  SECTION("the same configuration reproduces the result exactly") {
    const auto again = opt::maximize_bell_fixed_loss(id, id, cfg);
    REQUIRE(again.best_bell == r.best_bell);
    REQUIRE(again.restart_values == r.restart_values);
    opt::OptimizationConfig other = cfg;
    other.seed = 1234;
    const auto different = opt::maximize_bell_fixed_loss(id, id, other);
    REQUIRE(different.best_bell == Approx(kTsirelson).margin(1e-6));
  }
}

TEST_CASE("one-sided loss and the postselected maximum") {
  const std::array<ops::PovmElement, 2> id = {eye2(), eye2()};
  opt::OptimizationConfig cfg;
  cfg.restarts = 8;

  SECTION("moderate loss cannot beat the lossless maximum") {
    const auto r =
        opt::maximize_bell_fixed_loss(id, {lossy(0.5), eye2()}, cfg);
    REQUIRE(r.best_bell <= kTsirelson + 1e-6);
    REQUIRE(r.best_bell >= kTsirelson - 1e-3);
    check_result_contract(r, cfg.restarts);
  }

  SECTION("strong loss boosts the postselected value") {
    const auto r =
        opt::maximize_bell_fixed_loss(id, {lossy(0.05), eye2()}, cfg);
    REQUIRE(r.best_bell > kTsirelson + 1e-4);
    check_result_contract(r, cfg.restarts);
    // The argmax keeps the requested loss structure.
    REQUIRE(ops::max_abs(EigenMatrix(
                r.scenario.bob().upper().success().eigen() -
                ops::diag_op({1.0, 0.05}).eigen())) < 1e-12);
    REQUIRE(ops::max_abs(EigenMatrix(
                r.scenario.alice().upper().success().eigen() -
                ops::identity_op(2).eigen())) < 1e-12);
  }

  SECTION("an iteration cap reports non-convergence with the best so far") {
    opt::OptimizationConfig capped = cfg;
    capped.restarts = 2;
    capped.max_iterations = 1;
    const auto r =
        opt::maximize_bell_fixed_loss(id, {lossy(0.05), eye2()}, capped);
    REQUIRE_FALSE(r.converged);
    REQUIRE(r.iterations_used == 1);
    REQUIRE(std::isfinite(r.best_bell));
    check_result_contract(r, capped.restarts);
  }
}

TEST_CASE("rank-2 mixtures do not beat the pure-state search") {
  const std::array<ops::PovmElement, 2> id = {eye2(), eye2()};
  opt::OptimizationConfig cfg;
  cfg.restarts = 6;
  for (double p : {0.05, 0.1, 0.3, 0.6, 1.0}) {
    const auto pure =
        opt::maximize_bell_fixed_loss(id, {lossy(p), eye2()}, cfg);
    const auto rank2 = opt::maximize_bell_rank2(id, {lossy(p), eye2()}, cfg);
    REQUIRE(rank2.best_bell <= pure.best_bell + 1e-6);
    REQUIRE(rank2.best_bell >= pure.best_bell - 1e-3);
  }
}

TEST_CASE("efficiency scan is a monotone envelope") {
  opt::OptimizationConfig cfg;
  cfg.restarts = 8;
  const std::vector<double> grid = {0.05, 0.15, 0.35, 0.65, 1.0};
  const auto curve = opt::scan_fixed_loss(grid, cfg);

  SECTION("shape and endpoints") {
    REQUIRE(curve.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      REQUIRE(curve[i].p == grid[i]);
    }
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
      REQUIRE(curve[i + 1].best_bell <= curve[i].best_bell + 2e-3);
    }
    REQUIRE(curve.back().best_bell == Approx(kTsirelson).margin(1e-6));
    REQUIRE(curve.front().best_bell > kTsirelson + 1e-4);
  }

  SECTION("rows follow the input order even when unsorted") {
    const auto shuffled = opt::scan_fixed_loss({0.35, 1.0, 0.05}, cfg);
    REQUIRE(shuffled[0].p == 0.35);
    REQUIRE(shuffled[1].p == 1.0);
    REQUIRE(shuffled[2].p == 0.05);
    REQUIRE(shuffled[0].best_bell == Approx(curve[2].best_bell).margin(1e-9));
    REQUIRE(shuffled[1].best_bell == Approx(curve[4].best_bell).margin(1e-9));
    REQUIRE(shuffled[2].best_bell == Approx(curve[0].best_bell).margin(1e-9));
  }
}

TEST_CASE("separable search at fixed measurements") {
  opt::OptimizationConfig cfg;
  cfg.restarts = 12;

  SECTION("orthogonal-state scheme tops out at sqrt(2)") {
    const auto scn = scheme::scheme_as_scenario(
        scheme::symmetric_scheme(0.0, scheme::optimal_theta(0.0).theta));
    const auto r = opt::maximize_bell_separable(scn, cfg);
    REQUIRE(r.best_bell == Approx(std::sqrt(2.0)).margin(0.01));
    REQUIRE(r.best_bell >= product_grid_max(scn, 24, 24) - 1e-9);
    check_result_contract(r, cfg.restarts);
    // The argmax replaces only the state, never the measurements.
    for (bell::Setting g : bell::kSettings) {
      REQUIRE(ops::max_abs(EigenMatrix(
                  r.scenario.alice().at(g).plus().eigen() -
                  scn.alice().at(g).plus().eigen())) == 0.0);
      REQUIRE(ops::max_abs(EigenMatrix(
                  r.scenario.bob().at(g).minus().eigen() -
                  scn.bob().at(g).minus().eigen())) == 0.0);
    }
  }

  SECTION("the documented overlap point reaches the classical bound") {
    const auto scn = scheme::scheme_as_scenario(
        scheme::symmetric_scheme(0.357, scheme::optimal_theta(0.357).theta));
    const auto r = opt::maximize_bell_separable(scn, cfg);
    REQUIRE(r.best_bell == Approx(2.0).margin(0.01));
  }

  SECTION("fair loss keeps separable states classical") {
    Rng rng(0x0f7a11u);
    for (int trial = 0; trial < 6; ++trial) {
      const bell::BellScenario scn(
          ops::HermitianOperator(
              ops::ComplexMatrix(EigenMatrix::Identity(4, 4) / 4.0)),
          random_fair_party(rng, 2), random_fair_party(rng, 2));
      opt::OptimizationConfig quick = cfg;
      quick.restarts = 4;
      const auto r = opt::maximize_bell_separable(scn, quick);
      REQUIRE(r.best_bell <= 2.0 + 1e-8);
    }
  }
}

TEST_CASE("fair loss ceilings hold for the full search") {
  opt::OptimizationConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 80;
  Rng rng(0xfa1f5eedULL);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<ops::PovmElement, 2> sa = {
        ops::PovmElement(
            ops::HermitianOperator(ops::ComplexMatrix(
                rng.uniform(0.3, 1.0) * EigenMatrix::Identity(2, 2)))),
        ops::PovmElement(
            ops::HermitianOperator(ops::ComplexMatrix(
                rng.uniform(0.3, 1.0) * EigenMatrix::Identity(2, 2))))};
    std::array<ops::PovmElement, 2> sb = {
        ops::PovmElement(
            ops::HermitianOperator(ops::ComplexMatrix(
                rng.uniform(0.3, 1.0) * EigenMatrix::Identity(2, 2)))),
        ops::PovmElement(
            ops::HermitianOperator(ops::ComplexMatrix(
                rng.uniform(0.3, 1.0) * EigenMatrix::Identity(2, 2))))};
    cfg.seed = 42 + trial;
    cfg.state_class = opt::StateClass::kEntangledPure;
    REQUIRE(opt::maximize_bell_fixed_loss(sa, sb, cfg).best_bell <=
            kTsirelson + 1e-6);
    cfg.state_class = opt::StateClass::kSeparableMixture;
    REQUIRE(opt::maximize_bell_fixed_loss(sa, sb, cfg).best_bell <=
            2.0 + 1e-6);
  }
}

TEST_CASE("scheme tradeoff curve") {
  opt::OptimizationConfig cfg;
  cfg.restarts = 8;
  const auto curve = opt::optimize_scheme_tradeoff({0.0, 0.357}, cfg);
  REQUIRE(curve.size() == 2);

  SECTION("zero loss reproduces the lossless limits") {
    const auto& pt = curve[0];
    REQUIRE(pt.kappa == 0.0);
    REQUIRE(pt.theta == Approx(1.5 * M_PI).margin(1e-5));
    REQUIRE(pt.entangled_max == Approx(kTsirelson).margin(1e-6));
    REQUIRE(pt.separable_max == Approx(std::sqrt(2.0)).margin(0.01));
    REQUIRE(pt.eta == Approx(1.0).margin(1e-9));
    REQUIRE(pt.lhv_max == Approx(2.0).margin(1e-9));
  }

  SECTION("the high-overlap point beats the fixed-angle construction") {
    const auto& pt = curve[1];
    REQUIRE(pt.entangled_max >=
            scheme::optimal_theta(0.357).bell - 1e-9);
    REQUIRE(pt.entangled_max >= 2.95);
    REQUIRE(pt.separable_max == Approx(2.0).margin(0.1));
    REQUIRE(pt.separable_max < 2.01);
    REQUIRE(pt.lhv_max ==
            Approx(scheme::lhv_max_given_eta(pt.eta)).margin(1e-9));
    const auto ks = scheme::symmetric_scheme(0.357, pt.theta);
    const double eta_u = scheme::scheme_efficiency_eta(0.357, ks.theta_upper);
    const double eta_l = scheme::scheme_efficiency_eta(0.357, ks.theta_lower);
    REQUIRE(pt.eta == Approx(std::sqrt(eta_u * eta_l)).margin(1e-12));
  }
}
