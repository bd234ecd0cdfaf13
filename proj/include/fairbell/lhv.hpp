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
// Local-hidden-variable machinery with loss: finite models over a shared
// hidden value, the tight postselected CHSH bound for a given efficiency
// table, the assignment that saturates it, the factorization condition on
// efficiencies, its violation witness, and de-postselection of factorized
// models into lossless ones.
//
// Per-entry efficiencies may be zero (the constant-joint-efficiency
// counterexample needs them); every quantity that divides by a joint
// efficiency guards it against complete loss, and de-postselection, which
// divides by per-entry efficiencies, refuses zeros explicitly.

#ifndef FAIRBELL_LHV_HPP_
#define FAIRBELL_LHV_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairbell/errors.hpp"
#include "fairbell/scenario.hpp"

namespace fairbell {
namespace lhv {

using bell::Setting;

// Outcome probabilities of one party at one setting given the hidden value.
struct Response {
  double p_plus = 0.0;
  double p_minus = 0.0;

  double efficiency() const { return p_plus + p_minus; }
  double delta() const { return p_plus - p_minus; }
};

// One hidden value: its weight and both parties' responses at both settings.
// response[party][setting] with party 0 = first (settings A/a), party 1 =
// second (settings B/b); setting 0 = upper, 1 = lower.
struct HiddenValue {
  std::string label;
  double weight = 0.0;
  std::array<std::array<Response, 2>, 2> response;
};

inline int setting_index(Setting s) { return s == Setting::kUpper ? 0 : 1; }

// Per-party, per-setting, per-hidden-value efficiencies plus the weights.
// Entries lie in [0, 1]; joint efficiencies are validated where divided by.
class EfficiencyTable {
 public:
  EfficiencyTable(std::vector<std::string> labels, std::vector<double> weights,
                  std::array<std::array<std::vector<double>, 2>, 2> eff)
      : labels_(std::move(labels)),
        weights_(std::move(weights)),
        eff_(std::move(eff)) {
    const std::size_t n = weights_.size();
    if (n == 0) throw DomainError("EfficiencyTable: no hidden values");
    if (labels_.size() != n) {
      throw DomainError("EfficiencyTable: label/weight count mismatch");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (w < 0.0) throw DomainError("EfficiencyTable: negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw DomainError("EfficiencyTable: weights sum to " +
                        std::to_string(total));
    }
    for (int k = 0; k < 2; ++k) {
      for (int g = 0; g < 2; ++g) {
        if (eff_[k][g].size() != n) {
          throw DomainError("EfficiencyTable: ragged efficiency columns");
        }
        for (double e : eff_[k][g]) {
          if (e < 0.0 || e > 1.0 + 1e-12) {
            throw DomainError("EfficiencyTable: efficiency " +
                              std::to_string(e) + " outside [0,1]");
          }
        }
      }
    }
  }

  int size() const { return static_cast<int>(weights_.size()); }
  const std::string& label(int x) const { return labels_[x]; }
  double weight(int x) const { return weights_[x]; }
  double eff(int party, Setting s, int x) const {
    return eff_[party][setting_index(s)][x];
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
  std::array<std::array<std::vector<double>, 2>, 2> eff_;
};

// Finite LHV model. Weights form a distribution; each response pair has
// non-negative entries summing to at most 1.
class LhvModel {
 public:
  explicit LhvModel(std::vector<HiddenValue> hidden_values)
      : hidden_(std::move(hidden_values)) {
    if (hidden_.empty()) throw DomainError("LhvModel: no hidden values");
    double total = 0.0;
    for (const HiddenValue& h : hidden_) {
      if (h.weight < 0.0) throw DomainError("LhvModel: negative weight");
      total += h.weight;
      for (int k = 0; k < 2; ++k) {
        for (int g = 0; g < 2; ++g) {
          const Response& r = h.response[k][g];
          if (r.p_plus < 0.0 || r.p_minus < 0.0) {
            throw DomainError("LhvModel: negative response probability");
          }
          if (r.efficiency() > 1.0 + 1e-9) {
            throw DomainError("LhvModel: response sum " +
                              std::to_string(r.efficiency()) + " exceeds 1");
          }
        }
      }
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw DomainError("LhvModel: weights sum to " + std::to_string(total));
    }
  }

  int size() const { return static_cast<int>(hidden_.size()); }
  const HiddenValue& at(int x) const { return hidden_[x]; }
  const std::vector<HiddenValue>& hidden_values() const { return hidden_; }

  EfficiencyTable efficiency_table() const {
    std::vector<std::string> labels;
    std::vector<double> weights;
    std::array<std::array<std::vector<double>, 2>, 2> eff;
    for (const HiddenValue& h : hidden_) {
      labels.push_back(h.label);
      weights.push_back(h.weight);
      for (int k = 0; k < 2; ++k) {
        for (int g = 0; g < 2; ++g) {
          eff[k][g].push_back(std::min(h.response[k][g].efficiency(), 1.0));
        }
      }
    }
    return EfficiencyTable(std::move(labels), std::move(weights),
                           std::move(eff));
  }

 private:
  std::vector<HiddenValue> hidden_;
};

// p(s1, s2 | alpha, beta) = sum_x w(x) p1(s1|alpha,x) p2(s2|beta,x).
inline double lhv_joint_probability(const LhvModel& m, int s1, int s2,
                                    Setting alpha, Setting beta) {
  if ((s1 != 1 && s1 != -1) || (s2 != 1 && s2 != -1)) {
    throw DomainError("lhv_joint_probability: outcome signs must be +1 or -1");
  }
  double p = 0.0;
  for (const HiddenValue& h : m.hidden_values()) {
    const Response& r1 = h.response[0][setting_index(alpha)];
    const Response& r2 = h.response[1][setting_index(beta)];
    p += h.weight * (s1 == 1 ? r1.p_plus : r1.p_minus) *
         (s2 == 1 ? r2.p_plus : r2.p_minus);
  }
  return p;
}

// Joint success probability for a setting pair; complete loss rejected.
inline double lhv_efficiency(const EfficiencyTable& t, Setting alpha,
                             Setting beta) {
  double e = 0.0;
  for (int x = 0; x < t.size(); ++x) {
    e += t.weight(x) * t.eff(0, alpha, x) * t.eff(1, beta, x);
  }
  if (e < 1e-12) {
    throw CompleteLoss("lhv_efficiency: setting pair success probability " +
                       std::to_string(e));
  }
  return e;
}

inline double lhv_efficiency(const LhvModel& m, Setting alpha, Setting beta) {
  return lhv_efficiency(m.efficiency_table(), alpha, beta);
}

// Postselected CHSH combination of the model's correlators.
inline double lhv_bell_postselected(const LhvModel& m) {
  const EfficiencyTable t = m.efficiency_table();
  auto c = [&](Setting alpha, Setting beta) {
    double sum = 0.0;
    for (const HiddenValue& h : m.hidden_values()) {
      sum += h.weight * h.response[0][setting_index(alpha)].delta() *
             h.response[1][setting_index(beta)].delta();
    }
    return sum / lhv_efficiency(t, alpha, beta);
  };
  return c(Setting::kUpper, Setting::kUpper) +
         c(Setting::kUpper, Setting::kLower) +
         c(Setting::kLower, Setting::kUpper) -
         c(Setting::kLower, Setting::kLower);
}

namespace detail {

// Setting pairs in the fixed tie-break order (upper,upper), (upper,lower),
// (lower,upper), (lower,lower).
inline constexpr std::array<std::pair<Setting, Setting>, 4> kPairOrder = {{
    {Setting::kUpper, Setting::kUpper},
    {Setting::kUpper, Setting::kLower},
    {Setting::kLower, Setting::kUpper},
    {Setting::kLower, Setting::kLower},
}};

// Index (in kPairOrder) of the minimal ratio e1(alpha,x) e2(beta,x) /
// E(alpha,beta) for hidden value x; strict inequality advances, ties keep
// the earlier pair.
inline int argmin_ratio(const EfficiencyTable& t,
                        const std::array<double, 4>& joint, int x) {
  int best = 0;
  double best_ratio = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto [alpha, beta] = kPairOrder[i];
    const double ratio =
        t.eff(0, alpha, x) * t.eff(1, beta, x) / joint[i];
    if (i == 0 || ratio < best_ratio) {
      best = i;
      best_ratio = ratio;
    }
  }
  return best;
}

inline std::array<double, 4> joint_efficiencies(const EfficiencyTable& t) {
  std::array<double, 4> joint;
  for (int i = 0; i < 4; ++i) {
    joint[i] = lhv_efficiency(t, kPairOrder[i].first, kPairOrder[i].second);
  }
  return joint;
}

}  // namespace detail

// Tight LHV bound on the postselected CHSH quantity for a fixed efficiency
// table: 4 - 2 sum_x w(x) min_{alpha,beta} e1(alpha,x) e2(beta,x) / E(alpha,beta).
inline double bell_bound_bmax(const EfficiencyTable& t) {
  const std::array<double, 4> joint = detail::joint_efficiencies(t);
  double penalty = 0.0;
  for (int x = 0; x < t.size(); ++x) {
    const int i = detail::argmin_ratio(t, joint, x);
    const auto [alpha, beta] = detail::kPairOrder[i];
    penalty +=
        t.weight(x) * t.eff(0, alpha, x) * t.eff(1, beta, x) / joint[i];
  }
  return 4.0 - 2.0 * penalty;
}

// Deterministic-signs model achieving the bound. Each hidden value commits
// to extremal responses |Delta| = efficiency; the signs are chosen so that
// exactly the minimal-ratio pair's term enters the CHSH combination
// negatively: the (lower,lower) pair carries an external minus sign, so it
// is made negative with all signs +, while the other pairs flip one or two
// specific settings.
inline LhvModel saturating_assignment(const EfficiencyTable& t) {
  const std::array<double, 4> joint = detail::joint_efficiencies(t);
  std::vector<HiddenValue> hidden;
  for (int x = 0; x < t.size(); ++x) {
    const int i = detail::argmin_ratio(t, joint, x);
    // sign[party][setting]; +1 means Delta = +efficiency.
    std::array<std::array<int, 2>, 2> sign = {{{+1, +1}, {+1, +1}}};
    switch (i) {
      case 0:  // (upper, upper) negative: flip party 1 upper, party 2 lower.
        sign[0][0] = -1;
        sign[1][1] = -1;
        break;
      case 1:  // (upper, lower) negative: flip party 2 lower.
        sign[1][1] = -1;
        break;
      case 2:  // (lower, upper) negative: flip party 1 lower.
        sign[0][1] = -1;
        break;
      case 3:  // (lower, lower): external minus already makes it negative.
        break;
    }
    HiddenValue h;
    h.label = t.label(x);
    h.weight = t.weight(x);
    for (int k = 0; k < 2; ++k) {
      for (int g = 0; g < 2; ++g) {
        const Setting s = g == 0 ? Setting::kUpper : Setting::kLower;
        const double e = t.eff(k, s, x);
        h.response[k][g] =
            sign[k][g] > 0 ? Response{e, 0.0} : Response{0.0, e};
      }
    }
    hidden.push_back(std::move(h));
  }
  return LhvModel(std::move(hidden));
}

// Swaps + and - for the first party at both settings and all hidden values;
// negates the model's CHSH value term by term.
inline LhvModel flip_first_party_signs(const LhvModel& m) {
  std::vector<HiddenValue> hidden = m.hidden_values();
  for (HiddenValue& h : hidden) {
    for (int g = 0; g < 2; ++g) {
      std::swap(h.response[0][g].p_plus, h.response[0][g].p_minus);
    }
  }
  return LhvModel(std::move(hidden));
}

// Setting and hidden factors of a factorized efficiency table, normalized so
// max over settings of the setting factor is 1 per party.
struct Factorization {
  std::array<std::array<double, 2>, 2> setting_factor;  // [party][setting]
  std::array<std::vector<double>, 2> hidden_factor;     // [party][x]
  double residual = 0.0;
};

// Rank-1 test per party on the 2 x n efficiency matrix via normalized 2x2
// minors. On success returns factors e_S(setting) * e_H(x) reconstructing
// the table; otherwise an empty optional (not an error).
inline std::optional<Factorization> factorization_check(
    const EfficiencyTable& t, double rel_tol = 1e-9) {
  const int n = t.size();
  Factorization f;
  for (int k = 0; k < 2; ++k) {
    auto e = [&](int g, int x) {
      return t.eff(k, g == 0 ? Setting::kUpper : Setting::kLower, x);
    };
    for (int x1 = 0; x1 < n; ++x1) {
      for (int x2 = x1 + 1; x2 < n; ++x2) {
        const double ad = e(0, x1) * e(1, x2);
        const double bc = e(0, x2) * e(1, x1);
        const double scale = std::max(std::abs(ad), std::abs(bc));
        if (scale > 0.0 && std::abs(ad - bc) > rel_tol * scale) {
          return std::nullopt;
        }
      }
    }
    // Reference column: the hidden value with the largest efficiency.
    int x0 = 0;
    double best = -1.0;
    for (int x = 0; x < n; ++x) {
      const double col = std::max(e(0, x), e(1, x));
      if (col > best) {
        best = col;
        x0 = x;
      }
    }
    if (best <= 0.0) {
      // Entire table vanishes for this party; factors are degenerate.
      f.setting_factor[k] = {1.0, 1.0};
      f.hidden_factor[k].assign(n, 0.0);
      continue;
    }
    for (int g = 0; g < 2; ++g) {
      f.setting_factor[k][g] = e(g, x0) / best;
    }
    f.hidden_factor[k].resize(n);
    for (int x = 0; x < n; ++x) {
      f.hidden_factor[k][x] = std::max(e(0, x), e(1, x));
    }
    for (int g = 0; g < 2; ++g) {
      for (int x = 0; x < n; ++x) {
        const double recon = f.setting_factor[k][g] * f.hidden_factor[k][x];
        const double denom = std::max(std::abs(recon), std::abs(e(g, x)));
        if (denom > 1e-15) {
          f.residual = std::max(f.residual,
                                std::abs(recon - e(g, x)) / denom);
        }
      }
    }
  }
  return f;
}

// If some hidden value's ratio e1(alpha,x) e2(beta,x) / E(alpha,beta) varies
// across setting pairs, the saturating assignment exceeds the classical
// bound; returns that model, or an empty optional when the ratio is constant
// for every hidden value (the factorized case).
inline std::optional<LhvModel> violation_witness(const EfficiencyTable& t) {
  const std::array<double, 4> joint = detail::joint_efficiencies(t);
  bool varies = false;
  for (int x = 0; x < t.size() && !varies; ++x) {
    double lo = 0.0;
    double hi = 0.0;
    for (int i = 0; i < 4; ++i) {
      const auto [alpha, beta] = detail::kPairOrder[i];
      const double ratio =
          t.eff(0, alpha, x) * t.eff(1, beta, x) / joint[i];
      if (i == 0) {
        lo = hi = ratio;
      } else {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    if (hi - lo > 1e-9 * std::max(1.0, hi)) varies = true;
  }
  if (!varies) return std::nullopt;
  return saturating_assignment(t);
}

// Rewrites a factorized-loss model as a lossless one with identical
// postselected statistics: the hidden-value weights absorb the hidden
// factors and each response is renormalized by its own efficiency.
inline LhvModel depostselect(const LhvModel& m) {
  const EfficiencyTable t = m.efficiency_table();
  const std::optional<Factorization> f = factorization_check(t);
  if (!f.has_value()) {
    throw NotFactorizable("depostselect: efficiency table is not factorized");
  }
  const int n = m.size();
  double norm = 0.0;
  std::vector<double> tilde_w(n);
  for (int x = 0; x < n; ++x) {
    tilde_w[x] = m.at(x).weight * f->hidden_factor[0][x] *
                 f->hidden_factor[1][x];
    norm += tilde_w[x];
  }
  if (norm < 1e-12) {
    throw CompleteLoss("depostselect: hidden factors annihilate all weight");
  }
  std::vector<HiddenValue> hidden;
  for (int x = 0; x < n; ++x) {
    HiddenValue h;
    h.label = m.at(x).label;
    h.weight = tilde_w[x] / norm;
    for (int k = 0; k < 2; ++k) {
      for (int g = 0; g < 2; ++g) {
        const Response& r = m.at(x).response[k][g];
        const double e = r.efficiency();
        if (e <= 0.0) {
          throw DomainError(
              "depostselect: zero per-entry efficiency cannot be "
              "renormalized");
        }
        h.response[k][g] = Response{std::min(r.p_plus / e, 1.0),
                                    std::min(r.p_minus / e, 1.0)};
      }
    }
    hidden.push_back(std::move(h));
  }
  return LhvModel(std::move(hidden));
}

// JSON schema (documented in docs/formats.md):
// {"hidden_values": [{"label": ..., "weight": ...,
//   "party1": {"upper": [p_plus, p_minus], "lower": [...]},
//   "party2": {...}}, ...]}
inline nlohmann::json lhv_model_to_json(const LhvModel& m) {
  nlohmann::json values = nlohmann::json::array();
  for (const HiddenValue& h : m.hidden_values()) {
    nlohmann::json v;
    v["label"] = h.label;
    v["weight"] = h.weight;
    const char* party_keys[2] = {"party1", "party2"};
    for (int k = 0; k < 2; ++k) {
      v[party_keys[k]] = {
          {"upper", {h.response[k][0].p_plus, h.response[k][0].p_minus}},
          {"lower", {h.response[k][1].p_plus, h.response[k][1].p_minus}},
      };
    }
    values.push_back(std::move(v));
  }
  return nlohmann::json{{"hidden_values", std::move(values)}};
}

inline LhvModel lhv_model_from_json(const nlohmann::json& j) {
  std::vector<HiddenValue> hidden;
  for (const nlohmann::json& v : j.at("hidden_values")) {
    HiddenValue h;
    h.label = v.at("label").get<std::string>();
    h.weight = v.at("weight").get<double>();
    const char* party_keys[2] = {"party1", "party2"};
    const char* setting_keys[2] = {"upper", "lower"};
    for (int k = 0; k < 2; ++k) {
      for (int g = 0; g < 2; ++g) {
        const nlohmann::json& pair = v.at(party_keys[k]).at(setting_keys[g]);
        if (!pair.is_array() || pair.size() != 2) {
          throw DomainError("lhv_model_from_json: response must be a pair");
        }
        h.response[k][g] =
            Response{pair.at(0).get<double>(), pair.at(1).get<double>()};
      }
    }
    hidden.push_back(std::move(h));
  }
  return LhvModel(std::move(hidden));
}

}  // namespace lhv
}  // namespace fairbell

#endif  // FAIRBELL_LHV_HPP_
