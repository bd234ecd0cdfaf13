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

#ifndef FAIRBELL_ERRORS_HPP_
#define FAIRBELL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fairbell {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input violates a documented precondition (shape, range, or schema).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Operand dimensions are incompatible.
class DimensionMismatch : public DomainError {
 public:
  explicit DimensionMismatch(const std::string& what) : DomainError(what) {}
};

// An operator that must be inverted has an eigenvalue below the floor.
class SingularOperator : public Error {
 public:
  explicit SingularOperator(const std::string& what) : Error(what) {}
};

// A success probability needed as a denominator is numerically zero.
class CompleteLoss : public Error {
 public:
  explicit CompleteLoss(const std::string& what) : Error(what) {}
};

// A proportionality target has vanishing trace.
class ZeroOperator : public Error {
 public:
  explicit ZeroOperator(const std::string& what) : Error(what) {}
};

// An efficiency table does not split into setting and hidden factors.
class NotFactorizable : public Error {
 public:
  explicit NotFactorizable(const std::string& what) : Error(what) {}
};

// De-postselection was requested for measurements that fail fairness.
class NotFair : public Error {
 public:
  explicit NotFair(const std::string& what) : Error(what) {}
};

// A witness search was invoked on operators that are in fact proportional.
class Proportional : public Error {
 public:
  explicit Proportional(const std::string& what) : Error(what) {}
};

// A violation was requested for measurements that satisfy the fair-sampling
// condition, so no violation exists.
class ConditionHolds : public Error {
 public:
  explicit ConditionHolds(const std::string& what) : Error(what) {}
};

// Scalar arguments lie outside the construction's validity region.
class OutOfDomain : public DomainError {
 public:
  explicit OutOfDomain(const std::string& what) : DomainError(what) {}
};

// An event log has a setting pair with no trials.
class EmptyCell : public Error {
 public:
  explicit EmptyCell(const std::string& what) : Error(what) {}
};

// An iterative routine hit its budget; carries best-so-far context in what().
class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what) : Error(what) {}
};

}  // namespace fairbell

#endif  // FAIRBELL_ERRORS_HPP_
