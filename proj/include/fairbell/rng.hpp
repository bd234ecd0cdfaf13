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
// Seeded random helpers. Distribution transforms are written out here rather
// than taken from <random> because the standard leaves those algorithms
// implementation-defined; this keeps one stream definition everywhere the
// library promises seed-reproducible output.

#ifndef FAIRBELL_RNG_HPP_
#define FAIRBELL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "fairbell/matrix.hpp"

namespace fairbell {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] by rejection-free multiply-shift; the tiny
  // modulo bias is irrelevant for the ranges used here (< 2^32).
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + engine_() % (hi - lo + 1);
  }

  // Standard normal via Box-Muller (no caching: one draw, two uniforms).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Haar-ish random unit ket: i.i.d. complex Gaussian components normalized.
  EigenVector random_ket(int dim) {
    EigenVector v(dim);
    for (int i = 0; i < dim; ++i) {
      v(i) = Cx(normal(), normal());
    }
    v /= v.norm();
    return v;
  }

  // GUE-style random Hermitian with entries O(scale).
  ops::HermitianOperator random_hermitian(int dim, double scale = 1.0) {
    EigenMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        g(i, j) = Cx(normal(), normal());
      }
    }
    EigenMatrix h = (g + g.adjoint()) * (scale / 2.0);
    return ops::HermitianOperator(ops::ComplexMatrix(std::move(h)), 0.0);
  }

  // Random Hermitian with eigenvalues drawn uniformly from [lo, hi]; used to
  // make well-conditioned positive operators with a known spectral window.
  ops::HermitianOperator random_bounded_psd(int dim, double lo, double hi) {
    const ops::EigResult basis = ops::eig_hermitian(random_hermitian(dim));
    Eigen::VectorXd vals(dim);
    for (int i = 0; i < dim; ++i) {
      vals(i) = uniform(lo, hi);
    }
    EigenMatrix m = basis.vectors * vals.asDiagonal() * basis.vectors.adjoint();
    m = (m + m.adjoint()) / 2.0;
    return ops::HermitianOperator(ops::ComplexMatrix(std::move(m)));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairbell

#endif  // FAIRBELL_RNG_HPP_
