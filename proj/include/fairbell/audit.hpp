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
// Empirical fair-sampling auditing. Ingests detection-event logs, estimates
// per-setting-pair success probabilities, tests whether they factor into a
// per-party product (the operational fair-sampling condition for the
// prepared state), and estimates the postselected CHSH value with a
// bootstrap confidence interval.
//
// The audit certifies the product form for the prepared state only. A
// scenario can pass it with constant success probabilities and still reach
// the algebraic maximum of the postselected quantity, so a passing verdict
// never certifies the condition at the hidden-variable level; the report
// carries that caveat verbatim.

#ifndef FAIRBELL_AUDIT_HPP_
#define FAIRBELL_AUDIT_HPP_

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fairbell/errors.hpp"
#include "fairbell/scenario.hpp"

namespace fairbell {
namespace audit {

// Detection counts for one setting pair. counts[x][y] holds the number of
// trials with first-party outcome x and second-party outcome y, index 0 for
// the + outcome and 1 for the - outcome; trials not in any cell failed.
struct PairCounts {
  std::int64_t n_trials = 0;
  std::array<std::array<std::int64_t, 2>, 2> counts = {{{0, 0}, {0, 0}}};

  std::int64_t successes() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }
  std::int64_t failures() const { return n_trials - successes(); }
};

// A complete experiment record: counts for all four setting pairs.
// Invariant per pair: counts are non-negative and sum to at most n_trials.
class EventLog {
 public:
  explicit EventLog(std::array<std::array<PairCounts, 2>, 2> cells)
      : cells_(cells) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const PairCounts& pc = cells_[i][j];
        if (pc.n_trials < 0) {
          throw DomainError("EventLog: negative trial count");
        }
        for (const auto& row : pc.counts) {
          for (std::int64_t c : row) {
            if (c < 0) throw DomainError("EventLog: negative outcome count");
          }
        }
        if (pc.successes() > pc.n_trials) {
          throw DomainError("EventLog: outcome counts exceed trials");
        }
      }
    }
  }

  const PairCounts& at(bell::Setting alpha, bell::Setting beta) const {
    return cells_[alpha == bell::Setting::kUpper ? 0 : 1]
                 [beta == bell::Setting::kUpper ? 0 : 1];
  }

 private:
  std::array<std::array<PairCounts, 2>, 2> cells_;
};

struct EfficiencyEstimate {
  double eff = 0.0;
  double std_error = 0.0;
};

// Indexed [first-party setting][second-party setting], 0 = upper.
using EfficiencyEstimateTable = std::array<std::array<EfficiencyEstimate, 2>, 2>;

// Fitted product model: success probability of pair (i, j) is
// alice[i] * bob[j]. The split is identified only up to a scale, reported
// with the first party's larger factor normalized to 1, so the second
// party's factors equal the fitted efficiencies in that row.
struct FactorFit {
  std::array<double, 2> alice = {1.0, 1.0};
  std::array<double, 2> bob = {1.0, 1.0};

  double fitted(int i, int j) const { return alice[i] * bob[j]; }
};

struct BellEstimate {
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double std_error = 0.0;
  int resamples = 0;
};

enum class Verdict { kConsistentWithFair, kRejected };

inline const char* verdict_name(Verdict v) {
  return v == Verdict::kRejected ? "rejected" : "consistent_with_fair";
}

struct AuditOptions {
  int bootstrap_resamples = 2000;
  std::uint64_t seed = 42;
};

struct AuditReport {
  EfficiencyEstimateTable eff_hat;
  FactorFit factor_fit;
  double test_statistic = 0.0;
  double p_value = 1.0;
  double significance = 0.05;
  bool bootstrapped_p_value = false;
  Verdict verdict = Verdict::kConsistentWithFair;
  BellEstimate bell_estimate;
};

// Caveat carried by every report; see the header comment.
inline const char* audit_scope_note() {
  return "The test audits the product form of the success probabilities for "
         "the prepared state only; equal or factorized success probabilities "
         "for one state do not imply the condition for internal states, so a "
         "passing verdict does not by itself bound the postselected value.";
}

inline EfficiencyEstimateTable estimate_efficiencies(const EventLog& log) {
  EfficiencyEstimateTable t;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const PairCounts& pc = log.at(bell::kSettings[i], bell::kSettings[j]);
      if (pc.n_trials == 0) {
        throw EmptyCell("estimate_efficiencies: setting pair has no trials");
      }
      const double n = static_cast<double>(pc.n_trials);
      const double eff = static_cast<double>(pc.successes()) / n;
      t[i][j] = {eff, std::sqrt(eff * (1.0 - eff) / n)};
    }
  }
  return t;
}

namespace detail {

// Success counts k and trial counts n per setting pair; the sufficient
// statistics for both the product fit and the likelihood-ratio statistic.
struct CountTable {
  std::array<std::array<std::int64_t, 2>, 2> n;
  std::array<std::array<std::int64_t, 2>, 2> k;
};

inline CountTable count_table(const EventLog& log) {
  CountTable t;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const PairCounts& pc = log.at(bell::kSettings[i], bell::kSettings[j]);
      t.n[i][j] = pc.n_trials;
      t.k[i][j] = pc.successes();
    }
  }
  return t;
}

inline constexpr double kFactorFloor = 1e-12;

// Exact coordinate maximizer of the binomial log-likelihood in one party
// factor with the other party's two factors held fixed. The derivative
// sum_j [k_j / a - (n_j - k_j) other_j / (1 - a other_j)] is strictly
// decreasing in a, so its zero is bracketed and bisected.
inline double solve_factor(const std::array<std::int64_t, 2>& n,
                           const std::array<std::int64_t, 2>& k,
                           const std::array<double, 2>& other) {
  if (k[0] + k[1] == 0) return kFactorFloor;
  double hi = 1.0;
  for (double b : other) {
    if (b > 0.0) hi = std::min(hi, 1.0 / b);
  }
  hi *= 1.0 - 1e-14;
  const auto deriv = [&](double a) {
    double d = 0.0;
    for (int j = 0; j < 2; ++j) {
      if (n[j] == 0) continue;
      d += static_cast<double>(k[j]) / a;
      const double margin = std::max(1.0 - a * other[j], 1e-15);
      d -= static_cast<double>(n[j] - k[j]) * other[j] / margin;
    }
    return d;
  };
  double lo = kFactorFloor;
  if (deriv(hi) >= 0.0) return hi;
  if (deriv(lo) <= 0.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (deriv(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Maximum-likelihood product fit by alternating exact coordinate steps.
// Each step solves one factor exactly, so the likelihood never decreases
// and the alternation converges; the scale redundancy is removed at the end.
inline FactorFit fit_product_model(const CountTable& t) {
  std::array<double, 2> a = {0.5, 0.5};
  std::array<double, 2> b = {0.5, 0.5};
  for (int round = 0; round < 400; ++round) {
    double change = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double next = solve_factor(t.n[i], t.k[i], b);
      change = std::max(change, std::abs(next - a[i]));
      a[i] = next;
    }
    for (int j = 0; j < 2; ++j) {
      const double next = solve_factor({t.n[0][j], t.n[1][j]},
                                       {t.k[0][j], t.k[1][j]}, a);
      change = std::max(change, std::abs(next - b[j]));
      b[j] = next;
    }
    if (change < 1e-14) break;
  }
  FactorFit fit;
  const double scale = std::max(a[0], a[1]);
  for (int i = 0; i < 2; ++i) fit.alice[i] = a[i] / scale;
  for (int j = 0; j < 2; ++j) fit.bob[j] = std::min(1.0, b[j] * scale);
  return fit;
}

// 2 * log likelihood ratio of the saturated four-parameter model against
// the fitted product model. Zero-count conventions: 0 log 0 = 0.
inline double lr_statistic(const CountTable& t, const FactorFit& fit) {
  double lambda = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double n = static_cast<double>(t.n[i][j]);
      const double k = static_cast<double>(t.k[i][j]);
      const double mu = std::clamp(fit.fitted(i, j) * n, 1e-300, n);
      if (k > 0.0) lambda += k * std::log(k / mu);
      if (n - k > 0.0) {
        lambda += (n - k) * std::log((n - k) / std::max(n - mu, 1e-12));
      }
    }
  }
  return std::max(0.0, 2.0 * lambda);
}

// Survival function of the chi-square distribution with one degree of
// freedom: P(X > x) = erfc(sqrt(x / 2)).
inline double chi_square_1_sf(double x) {
  return std::erfc(std::sqrt(std::max(x, 0.0) / 2.0));
}

// Draws a multinomial sample over the given category probabilities by
// binomial conditioning; category order fixes the draw sequence, so the
// result is deterministic given the engine state.
template <std::size_t N>
inline std::array<std::int64_t, N> multinomial(std::mt19937_64& engine,
                                               std::int64_t n,
                                               const std::array<double, N>& p) {
  std::array<std::int64_t, N> out{};
  std::int64_t remaining = n;
  double mass_left = 1.0;
  for (std::size_t c = 0; c + 1 < N; ++c) {
    if (remaining == 0) break;
    const double q = std::clamp(mass_left > 0.0 ? p[c] / mass_left : 1.0,
                                0.0, 1.0);
    std::binomial_distribution<std::int64_t> dist(remaining, q);
    const std::int64_t draw = q >= 1.0 ? remaining : dist(engine);
    out[c] = draw;
    remaining -= draw;
    mass_left -= p[c];
  }
  out[N - 1] = remaining;
  return out;
}

}  // namespace detail

// Plug-in estimate of the postselected CHSH quantity from conditional
// outcome frequencies, with a nonparametric bootstrap confidence interval
// (resampling trials within each setting pair). Resamples that lose every
// success in some pair carry no estimate and are skipped.
inline BellEstimate postselected_bell_estimate(const EventLog& log,
                                               const AuditOptions& options = {}) {
  if (options.bootstrap_resamples < 1) {
    throw DomainError("postselected_bell_estimate: resamples must be >= 1");
  }
  const auto plug_in =
      [](const std::array<std::array<PairCounts, 2>, 2>& cells) {
        double b = 0.0;
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            const PairCounts& pc = cells[i][j];
            const double succ = static_cast<double>(pc.successes());
            const double corr =
                static_cast<double>(pc.counts[0][0] - pc.counts[0][1] -
                                    pc.counts[1][0] + pc.counts[1][1]);
            b += (i == 1 && j == 1 ? -1.0 : 1.0) * corr / succ;
          }
        }
        return b;
      };

  std::array<std::array<PairCounts, 2>, 2> cells;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cells[i][j] = log.at(bell::kSettings[i], bell::kSettings[j]);
      if (cells[i][j].successes() == 0) {
        throw EmptyCell("postselected_bell_estimate: no successes for pair");
      }
    }
  }

  BellEstimate est;
  est.value = plug_in(cells);

  std::mt19937_64 engine(options.seed);
  std::vector<double> boot;
  boot.reserve(static_cast<std::size_t>(options.bootstrap_resamples));
  for (int r = 0; r < options.bootstrap_resamples; ++r) {
    std::array<std::array<PairCounts, 2>, 2> resampled;
    bool usable = true;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const PairCounts& pc = cells[i][j];
        const double n = static_cast<double>(pc.n_trials);
        const std::array<double, 5> p = {
            static_cast<double>(pc.counts[0][0]) / n,
            static_cast<double>(pc.counts[0][1]) / n,
            static_cast<double>(pc.counts[1][0]) / n,
            static_cast<double>(pc.counts[1][1]) / n,
            static_cast<double>(pc.failures()) / n};
        const auto draw = detail::multinomial(engine, pc.n_trials, p);
        PairCounts rc;
        rc.n_trials = pc.n_trials;
        rc.counts = {{{draw[0], draw[1]}, {draw[2], draw[3]}}};
        resampled[i][j] = rc;
        usable = usable && rc.successes() > 0;
      }
    }
    if (usable) boot.push_back(plug_in(resampled));
  }

  est.resamples = static_cast<int>(boot.size());
  if (boot.empty()) {
    est.ci_lo = est.ci_hi = est.value;
    return est;
  }
  std::sort(boot.begin(), boot.end());
  const auto percentile = [&](double q) {
    const double pos = q * static_cast<double>(boot.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, boot.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * boot[lo] + w * boot[hi];
  };
  est.ci_lo = percentile(0.025);
  est.ci_hi = percentile(0.975);
  double mean = 0.0;
  for (double v : boot) mean += v;
  mean /= static_cast<double>(boot.size());
  double var = 0.0;
  for (double v : boot) var += (v - mean) * (v - mean);
  if (boot.size() > 1) var /= static_cast<double>(boot.size() - 1);
  est.std_error = std::sqrt(var);
  return est;
}

// Likelihood-ratio test of the product form against the saturated model.
// The statistic is asymptotically chi-square with one degree of freedom;
// when any fitted expected failure count is below 10 the p-value comes from
// a parametric bootstrap under the fitted null instead.
inline AuditReport fairness_test(const EventLog& log, double significance,
                                 const AuditOptions& options = {}) {
  if (!(significance > 0.0) || significance > 0.5) {
    throw OutOfDomain("fairness_test: significance must lie in (0, 0.5]");
  }
  if (options.bootstrap_resamples < 1) {
    throw DomainError("fairness_test: resamples must be >= 1");
  }

  AuditReport report;
  report.significance = significance;
  report.eff_hat = estimate_efficiencies(log);

  const detail::CountTable table = detail::count_table(log);
  report.factor_fit = detail::fit_product_model(table);
  report.test_statistic = detail::lr_statistic(table, report.factor_fit);

  bool small_counts = false;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double n = static_cast<double>(table.n[i][j]);
      if (n - report.factor_fit.fitted(i, j) * n < 10.0) small_counts = true;
    }
  }
  report.bootstrapped_p_value = small_counts;

  if (small_counts) {
    std::mt19937_64 engine(options.seed);
    int at_least = 0;
    for (int r = 0; r < options.bootstrap_resamples; ++r) {
      detail::CountTable resampled = table;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const double q =
              std::clamp(report.factor_fit.fitted(i, j), 0.0, 1.0);
          std::binomial_distribution<std::int64_t> dist(table.n[i][j], q);
          resampled.k[i][j] = dist(engine);
        }
      }
      const FactorFit refit = detail::fit_product_model(resampled);
      if (detail::lr_statistic(resampled, refit) >=
          report.test_statistic - 1e-12) {
        ++at_least;
      }
    }
    report.p_value = (1.0 + static_cast<double>(at_least)) /
                     (1.0 + static_cast<double>(options.bootstrap_resamples));
  } else {
    report.p_value = detail::chi_square_1_sf(report.test_statistic);
  }

  report.verdict = report.p_value < significance ? Verdict::kRejected
                                                 : Verdict::kConsistentWithFair;
  report.bell_estimate = postselected_bell_estimate(log, options);
  return report;
}

// Bonferroni combination for audits of several preparations: reject if any
// per-log p-value falls below significance / m. A joint pass strengthens
// but never proves the hidden-variable-level condition.
struct CombinedVerdict {
  double adjusted_p = 1.0;
  Verdict verdict = Verdict::kConsistentWithFair;
};

inline CombinedVerdict bonferroni_combine(const std::vector<double>& p_values,
                                          double significance) {
  if (p_values.empty()) {
    throw DomainError("bonferroni_combine: need at least one p-value");
  }
  if (!(significance > 0.0) || significance > 0.5) {
    throw OutOfDomain("bonferroni_combine: significance must lie in (0, 0.5]");
  }
  double min_p = 1.0;
  for (double p : p_values) {
    if (!(p >= 0.0) || p > 1.0) {
      throw OutOfDomain("bonferroni_combine: p-values must lie in [0, 1]");
    }
    min_p = std::min(min_p, p);
  }
  CombinedVerdict out;
  out.adjusted_p = std::min(1.0, min_p * static_cast<double>(p_values.size()));
  out.verdict = out.adjusted_p < significance ? Verdict::kRejected
                                              : Verdict::kConsistentWithFair;
  return out;
}

// Samples an event log from a scenario: per setting pair, a multinomial
// draw over the four joint outcomes and the failure remainder, in a fixed
// pair order so the result is deterministic given the seed.
inline EventLog simulate_log(const bell::BellScenario& s,
                             std::int64_t n_per_pair, std::uint64_t seed) {
  if (n_per_pair < 0) {
    throw DomainError("simulate_log: trial count must be non-negative");
  }
  std::mt19937_64 engine(seed);
  std::array<std::array<PairCounts, 2>, 2> cells;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      std::array<double, 5> p{};
      double total = 0.0;
      int c = 0;
      for (int sa : {+1, -1}) {
        for (int sb : {+1, -1}) {
          p[c] = std::max(
              0.0, bell::joint_probability(s, bell::kSettings[i],
                                           bell::kSettings[j], sa, sb));
          total += p[c];
          ++c;
        }
      }
      if (total > 1.0) {
        for (int m = 0; m < 4; ++m) p[m] /= total;
        total = 1.0;
      }
      p[4] = 1.0 - total;
      const auto draw = detail::multinomial(engine, n_per_pair, p);
      PairCounts pc;
      pc.n_trials = n_per_pair;
      pc.counts = {{{draw[0], draw[1]}, {draw[2], draw[3]}}};
      cells[i][j] = pc;
    }
  }
  return EventLog(cells);
}

// CSV round trip. Format: header setting_a,setting_b,n_trials,n_pp,n_pm,
// n_mp,n_mm, then exactly one row per setting pair with labels A/a and B/b.
inline std::string write_event_log_csv(const EventLog& log) {
  std::ostringstream out;
  out << "setting_a,setting_b,n_trials,n_pp,n_pm,n_mp,n_mm\n";
  for (bell::Setting sa : bell::kSettings) {
    for (bell::Setting sb : bell::kSettings) {
      const PairCounts& pc = log.at(sa, sb);
      out << bell::setting_name(sa, true) << ','
          << bell::setting_name(sb, false) << ',' << pc.n_trials << ','
          << pc.counts[0][0] << ',' << pc.counts[0][1] << ','
          << pc.counts[1][0] << ',' << pc.counts[1][1] << '\n';
    }
  }
  return out.str();
}

namespace detail {

inline std::int64_t parse_count(const std::string& field) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DomainError("EventLog CSV: expected an integer, got '" + field +
                      "'");
  }
  return value;
}

}  // namespace detail

inline EventLog read_event_log_csv(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty() ||
      lines.front() != "setting_a,setting_b,n_trials,n_pp,n_pm,n_mp,n_mm") {
    throw DomainError("EventLog CSV: missing or malformed header");
  }
  if (lines.size() != 5) {
    throw DomainError("EventLog CSV: expected exactly four data rows, got " +
                      std::to_string(lines.size() - 1));
  }
  std::array<std::array<PairCounts, 2>, 2> cells;
  std::array<std::array<bool, 2>, 2> seen = {{{false, false}, {false, false}}};
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream row(lines[r]);
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 7) {
      throw DomainError("EventLog CSV: expected 7 fields per row");
    }
    int i = -1, j = -1;
    if (fields[0] == "A") i = 0;
    if (fields[0] == "a") i = 1;
    if (fields[1] == "B") j = 0;
    if (fields[1] == "b") j = 1;
    if (i < 0 || j < 0) {
      throw DomainError("EventLog CSV: setting labels must come from {A,a} "
                        "and {B,b}");
    }
    if (seen[i][j]) {
      throw DomainError("EventLog CSV: duplicate setting pair row");
    }
    seen[i][j] = true;
    PairCounts pc;
    pc.n_trials = detail::parse_count(fields[2]);
    pc.counts[0][0] = detail::parse_count(fields[3]);
    pc.counts[0][1] = detail::parse_count(fields[4]);
    pc.counts[1][0] = detail::parse_count(fields[5]);
    pc.counts[1][1] = detail::parse_count(fields[6]);
    cells[i][j] = pc;
  }
  return EventLog(cells);
}

}  // namespace audit
}  // namespace fairbell

#endif  // FAIRBELL_AUDIT_HPP_
