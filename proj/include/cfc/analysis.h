// Copyright 2026 The cfc-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFC_ANALYSIS_H_
#define CFC_ANALYSIS_H_

// Fisher information of detector statistics, its theta -> 0 limit, and the
// counterfactual violation strength built from it.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfc/circuits.h"
#include "cfc/optics.h"
#include "json.hpp"

namespace cfc {

// Bins at or below this probability are treated as empty. Every bin is fed
// by a single absorption, so dp^2 / p <= 4 |d amplitude|^2 stays bounded for
// arbitrarily small p and only exactly empty bins are skipped.
inline constexpr double kBinFloor = 0.0;
// An empty bin whose derivative exceeds this is a numerical inconsistency.
inline constexpr double kDerivativeFloor = 1e-12;

// sum_i dp_i^2 / p_i over the polarization-resolved bins.
// Throws NumericalError for a bin with p <= kBinFloor but |dp| > kDerivativeFloor.
double fisher(const OutcomeDistribution& dist);

// Fisher information of the distribution conditioned on landing in a bin
// whose role is in `keep`. Throws NumericalError when that event has zero
// probability.
double fisher_postselected(const OutcomeDistribution& dist, std::span<const BinRole> keep);

inline constexpr std::array<BinRole, 2> kSuccessRoles{BinRole::kD0, BinRole::kD1};

// Maps the scalar approach variable to a full angle assignment.
using ThetaFamily = std::function<ThetaValues(double)>;

// `site` follows theta, every other tagging of the circuit sits at 0.
ThetaFamily isolate(const Circuit& circuit, std::string site);
// All of `sites` follow theta together, the rest sit at 0.
ThetaFamily tied(const Circuit& circuit, std::vector<std::string> sites);
// `site` follows theta, everything else is pinned to `fixed`.
ThetaFamily with_fixed(std::string site, ThetaValues fixed);

struct LimitOptions {
  std::vector<double> grid{1e-2, 5e-3, 2.5e-3};
  double tolerance = 1e-6;
  // Post-selection on these roles when set.
  std::optional<std::vector<BinRole>> keep;
};

struct LimitEstimate {
  double value = 0.0;
  double residual = 0.0;
  bool converged = false;
  std::vector<double> grid;
  std::vector<double> samples;
};

// Polynomial extrapolation in theta^2 to theta = 0 (Neville). The residual
// is the gap between the estimate using every point and the one that drops
// the coarsest point.
LimitEstimate extrapolate_to_zero(std::span<const double> grid, std::span<const double> samples,
                                  double tolerance);

// Fisher information about `site` with angles `thetas`.
double fisher_at(const Circuit& circuit, const std::string& site, const ThetaValues& thetas,
                 const std::optional<std::vector<BinRole>>& keep = std::nullopt);

LimitEstimate fisher_limit(const Circuit& circuit, const std::string& site, const ThetaFamily& family,
                           const LimitOptions& options = {});

struct SiteFisher {
  std::string site;
  double theta0 = 0.0;
  double fisher_at_theta0 = 0.0;
  LimitEstimate limit;
};

struct FisherReport {
  bool post_selected = false;
  std::vector<BinRole> conditioning;
  std::vector<SiteFisher> sites;

  bool converged() const;
};

struct SiteSpec {
  std::string site;
  ThetaFamily family;
  double theta0 = 1e-2;
};

// Per-site point values and limits; sites are evaluated in parallel.
FisherReport fisher_report(const Circuit& circuit, const std::vector<SiteSpec>& sites,
                           const LimitOptions& options = {});

struct RepetitionPlan {
  double p_success = 0.0;
  double epsilon = 0.0;
  int n_gamma = 1;
};

// Smallest n with (1 - p_success)^n < epsilon. Both arguments in (0, 1).
int n_gamma(double p_success, double epsilon);
RepetitionPlan plan_repetitions(double p_success, double epsilon);

struct SiteContribution {
  std::string site;
  std::optional<LimitEstimate> fisher_zero;
  std::optional<LimitEstimate> fisher_one;
  // Probability crossing the site at theta = 0.
  std::optional<double> flux_zero;
  std::optional<double> flux_one;
  double contribution = 0.0;
};

struct ViolationReport {
  // n_gamma * raw_sum.
  double d_vio = 0.0;
  double raw_sum = 0.0;
  double f_ref = 4.0;
  RepetitionPlan repetitions;
  std::vector<SiteContribution> sites;
  bool converged = true;
  std::string method;
};

// Both bit processes of the doubly nested network; per-site contribution
// (F0 + F1) / (2 F_ref); n_gamma from P(D0 | 0-bit).
ViolationReport d_vio_reduced(double epsilon = 0.05, const LimitOptions& options = {});

// Double sum over the chained protocol's Bob crossings (0-bit process).
double d_vio_full_sum(int outer, int inner);

struct AsymptoticEstimate {
  double value = 0.0;
  // False outside inner >> outer >> 1 (taken as outer >= 10 and inner >= 10 outer).
  bool regime_valid = false;
};

// (pi^2 / 4 outer) * (inner / 2).
AsymptoticEstimate d_vio_full_asymptotic(int outer, int inner);

enum class SimulationMode { kAuto, kFisher, kFlux };

inline constexpr int kMaxFisherOuter = 8;
inline constexpr int kMaxFisherInner = 16;

struct FullSimulationOptions {
  SimulationMode mode = SimulationMode::kAuto;
  LimitOptions limit;
  double epsilon = 0.05;
};

// 0-bit: sum over sites of lim F / F_ref (Fisher mode) or of crossing flux
// (flux mode). 1-bit: probability absorbed by Bob's detectors. The n_gamma
// plan comes from P(D0 | 0-bit); d_vio carries the scaled value and raw_sum
// the unscaled one.
ViolationReport d_vio_full_simulated(int outer, int inner, BitProcess bit,
                                     const FullSimulationOptions& options = {});

nlohmann::json to_json(const LimitEstimate& estimate);
nlohmann::json to_json(const FisherReport& report);
nlohmann::json to_json(const ViolationReport& report);
nlohmann::json to_json(const OutcomeDistribution& dist);

}  // namespace cfc

#endif  // CFC_ANALYSIS_H_
