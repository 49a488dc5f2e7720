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

#include "cfc/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string_view>
#include <unordered_map>

#include "cfc/errors.h"
#include "cfc/parallel.h"

namespace cfc {
namespace {

constexpr double kPi = std::numbers::pi;

double fisher_term(double p, double dp, std::string_view where) {
  if (p > kBinFloor) {
    return dp * dp / p;
  }
  if (std::abs(dp) > kDerivativeFloor) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "bin %s has p=%.3g but dp=%.3g; move the evaluation point",
                  std::string(where).c_str(), p, dp);
    throw NumericalError(buf);
  }
  return 0.0;
}

bool kept(const BinOutcome& o, std::span<const BinRole> keep) {
  return std::find(keep.begin(), keep.end(), o.role) != keep.end();
}

std::string role_list(std::span<const BinRole> roles) {
  std::string out;
  for (BinRole r : roles) {
    if (!out.empty()) out += ",";
    out += to_string(r);
  }
  return out;
}

}  // namespace

double fisher(const OutcomeDistribution& dist) {
  double total = 0.0;
  for (const auto& o : dist.outcomes) {
    total += fisher_term(o.p, o.dp, o.name);
  }
  return total;
}

double fisher_postselected(const OutcomeDistribution& dist, std::span<const BinRole> keep) {
  double p_keep = 0.0;
  double dp_keep = 0.0;
  for (const auto& o : dist.outcomes) {
    if (kept(o, keep)) {
      p_keep += o.p;
      dp_keep += o.dp;
    }
  }
  if (!(p_keep > 0.0)) {
    throw NumericalError("post-selection on {" + role_list(keep) + "} has zero probability");
  }
  double total = 0.0;
  for (const auto& o : dist.outcomes) {
    if (!kept(o, keep)) {
      continue;
    }
    const double q = o.p / p_keep;
    const double dq = (o.dp * p_keep - o.p * dp_keep) / (p_keep * p_keep);
    total += fisher_term(q, dq, o.name);
  }
  return total;
}

ThetaFamily isolate(const Circuit& circuit, std::string site) {
  return [zeros = circuit.zero_thetas(), site = std::move(site)](double theta) {
    ThetaValues out = zeros;
    out[site] = theta;
    return out;
  };
}

ThetaFamily tied(const Circuit& circuit, std::vector<std::string> sites) {
  return [zeros = circuit.zero_thetas(), sites = std::move(sites)](double theta) {
    ThetaValues out = zeros;
    for (const auto& s : sites) {
      out[s] = theta;
    }
    return out;
  };
}

ThetaFamily with_fixed(std::string site, ThetaValues fixed) {
  return [fixed = std::move(fixed), site = std::move(site)](double theta) {
    ThetaValues out = fixed;
    out[site] = theta;
    return out;
  };
}

LimitEstimate extrapolate_to_zero(std::span<const double> grid, std::span<const double> samples,
                                  double tolerance) {
  if (grid.size() != samples.size() || grid.size() < 2) {
    throw ConfigurationError("extrapolation needs at least two (theta, value) pairs");
  }
  const std::size_t k = grid.size();
  std::vector<double> x(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(grid[i] > 0.0)) {
      throw ConfigurationError("extrapolation grid must be strictly positive");
    }
    x[i] = grid[i] * grid[i];
  }
  // Neville tableau evaluated at x = 0; after the sweep for width w, table[i]
  // holds the interpolant through points i..i+w.
  std::vector<double> table(samples.begin(), samples.end());
  for (std::size_t w = 1; w < k; ++w) {
    for (std::size_t i = 0; i + w < k; ++i) {
      const double denom = x[i] - x[i + w];
      if (denom == 0.0) {
        throw ConfigurationError("extrapolation grid has repeated points");
      }
      table[i] = (-x[i + w] * table[i] + x[i] * table[i + 1]) / denom;
    }
  }
  // Rebuild the estimate without the coarsest point for the residual.
  std::vector<double> fine(samples.begin() + 1, samples.end());
  for (std::size_t w = 1; w + 1 < k; ++w) {
    for (std::size_t i = 0; i + w + 1 < k; ++i) {
      const double xi = x[i + 1];
      const double xj = x[i + 1 + w];
      fine[i] = (-xj * fine[i] + xi * fine[i + 1]) / (xi - xj);
    }
  }

  LimitEstimate out;
  out.value = table[0];
  out.residual = std::abs(table[0] - fine[0]);
  out.converged = std::isfinite(out.value) && out.residual < tolerance;
  out.grid.assign(grid.begin(), grid.end());
  out.samples.assign(samples.begin(), samples.end());
  return out;
}

double fisher_at(const Circuit& circuit, const std::string& site, const ThetaValues& thetas,
                 const std::optional<std::vector<BinRole>>& keep) {
  const OutcomeDistribution dist = propagate(circuit, thetas, site);
  return keep ? fisher_postselected(dist, *keep) : fisher(dist);
}

LimitEstimate fisher_limit(const Circuit& circuit, const std::string& site, const ThetaFamily& family,
                           const LimitOptions& options) {
  std::vector<double> samples;
  samples.reserve(options.grid.size());
  for (double theta : options.grid) {
    samples.push_back(fisher_at(circuit, site, family(theta), options.keep));
  }
  return extrapolate_to_zero(options.grid, samples, options.tolerance);
}

bool FisherReport::converged() const {
  return std::all_of(sites.begin(), sites.end(), [](const SiteFisher& s) { return s.limit.converged; });
}

FisherReport fisher_report(const Circuit& circuit, const std::vector<SiteSpec>& sites,
                           const LimitOptions& options) {
  FisherReport report;
  report.post_selected = options.keep.has_value();
  if (options.keep) {
    report.conditioning = *options.keep;
  }
  report.sites.resize(sites.size());
  parallel_for(sites.size(), [&](std::size_t i) {
    const SiteSpec& spec = sites[i];
    SiteFisher& out = report.sites[i];
    out.site = spec.site;
    out.theta0 = spec.theta0;
    out.fisher_at_theta0 = fisher_at(circuit, spec.site, spec.family(spec.theta0), options.keep);
    out.limit = fisher_limit(circuit, spec.site, spec.family, options);
  });
  return report;
}

int n_gamma(double p_success, double epsilon) {
  if (!(p_success > 0.0 && p_success < 1.0)) {
    throw ConfigurationError("success probability must lie in (0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigurationError("error target must lie in (0, 1)");
  }
  const double miss = 1.0 - p_success;
  double n = std::ceil(std::log(epsilon) / std::log(miss));
  n = std::max(n, 1.0);
  if (n > static_cast<double>(std::numeric_limits<int>::max() / 2)) {
    throw ConfigurationError("repetition count overflows");
  }
  int count = static_cast<int>(n);
  // Settle log rounding against the defining inequality.
  while (count > 1 && std::pow(miss, count - 1) < epsilon) {
    --count;
  }
  while (!(std::pow(miss, count) < epsilon)) {
    ++count;
  }
  return count;
}

RepetitionPlan plan_repetitions(double p_success, double epsilon) {
  return RepetitionPlan{p_success, epsilon, n_gamma(p_success, epsilon)};
}

ViolationReport d_vio_reduced(double epsilon, const LimitOptions& options) {
  const Circuit reference = build_reference();
  const LimitEstimate f_ref =
      fisher_limit(reference, std::string(kReferenceParam), isolate(reference, std::string(kReferenceParam)),
                   LimitOptions{options.grid, options.tolerance, std::nullopt});

  const Circuit zero = build_reduced({0.0, 0.0, BitProcess::kZeroBit});
  const Circuit one = build_reduced({0.0, 0.0, BitProcess::kOneBit});
  const std::string t1(kTheta1);
  const std::string t2(kTheta2);
  const LimitOptions unconditioned{options.grid, options.tolerance, std::nullopt};

  // theta1 alone; theta2 approaches 0 together with theta1.
  struct Job {
    const Circuit* circuit;
    std::string site;
    ThetaFamily family;
  };
  std::vector<Job> jobs{{&zero, t1, isolate(zero, t1)},
                        {&one, t1, isolate(one, t1)},
                        {&zero, t2, tied(zero, {t1, t2})},
                        {&one, t2, tied(one, {t1, t2})}};
  std::vector<LimitEstimate> limits(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    limits[i] = fisher_limit(*jobs[i].circuit, jobs[i].site, jobs[i].family, unconditioned);
  });

  const OutcomeDistribution dist_zero = propagate(zero, zero.zero_thetas());
  const OutcomeDistribution dist_one = propagate(one, one.zero_thetas());

  ViolationReport report;
  report.method = "reduced";
  report.f_ref = f_ref.value;
  report.converged = f_ref.converged;
  report.repetitions = plan_repetitions(dist_zero.role_probability(BinRole::kD0), epsilon);
  for (std::size_t s = 0; s < 2; ++s) {
    SiteContribution site;
    site.site = s == 0 ? t1 : t2;
    site.fisher_zero = limits[2 * s];
    site.fisher_one = limits[2 * s + 1];
    site.flux_zero = dist_zero.flux_at(site.site);
    site.flux_one = dist_one.flux_at(site.site);
    site.contribution = (site.fisher_zero->value + site.fisher_one->value) / (2.0 * report.f_ref);
    report.converged = report.converged && site.fisher_zero->converged && site.fisher_one->converged;
    report.raw_sum += site.contribution;
    report.sites.push_back(std::move(site));
  }
  report.d_vio = report.repetitions.n_gamma * report.raw_sum;
  return report;
}

double d_vio_full_sum(int outer, int inner) {
  if (outer < 2 || inner < 2) {
    throw ConfigurationError("full protocol needs outer, inner >= 2");
  }
  const double outer_angle = kPi / (2.0 * outer);
  const double c2 = std::pow(std::cos(outer_angle), 2);
  const double s2 = std::pow(std::sin(outer_angle), 2);
  double outer_sum = 0.0;
  double weight = 1.0;
  for (int n = 1; n <= outer - 1; ++n) {
    outer_sum += weight * s2;
    weight *= c2;
  }
  double inner_sum = 0.0;
  for (int m = 1; m <= inner - 1; ++m) {
    inner_sum += std::pow(std::sin(m * kPi / (2.0 * inner)), 2);
  }
  return outer_sum * inner_sum;
}

AsymptoticEstimate d_vio_full_asymptotic(int outer, int inner) {
  if (outer < 2 || inner < 2) {
    throw ConfigurationError("full protocol needs outer, inner >= 2");
  }
  AsymptoticEstimate out;
  out.value = kPi * kPi / (4.0 * outer) * (inner / 2.0);
  out.regime_valid = outer >= 10 && inner >= 10LL * outer;
  return out;
}

ViolationReport d_vio_full_simulated(int outer, int inner, BitProcess bit, const FullSimulationOptions& options) {
  const bool small = outer <= kMaxFisherOuter && inner <= kMaxFisherInner;
  SimulationMode mode = options.mode;
  if (mode == SimulationMode::kAuto) {
    mode = small ? SimulationMode::kFisher : SimulationMode::kFlux;
  }
  if (mode == SimulationMode::kFisher && !small) {
    throw ConfigurationError("per-site Fisher simulation is limited to N <= " + std::to_string(kMaxFisherOuter) +
                             ", M <= " + std::to_string(kMaxFisherInner) + "; use flux mode");
  }

  const Circuit circuit = build_full({outer, inner, bit});
  const OutcomeDistribution at_zero = propagate(circuit, circuit.zero_thetas());

  ViolationReport report;
  report.method = mode == SimulationMode::kFisher ? "fisher" : "flux";

  // Success statistics always come from the 0-bit process.
  double p_d0 = at_zero.role_probability(BinRole::kD0);
  if (bit != BitProcess::kZeroBit) {
    const Circuit zero = build_full({outer, inner, BitProcess::kZeroBit});
    p_d0 = propagate(zero, zero.zero_thetas()).role_probability(BinRole::kD0);
  }
  report.repetitions = plan_repetitions(p_d0, options.epsilon);

  std::unordered_map<std::string_view, double> flux_by_site;
  for (const auto& f : at_zero.site_flux) {
    flux_by_site[f.param] += f.flux;
  }
  const std::vector<std::string>& params = circuit.params();
  std::vector<SiteContribution> sites(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    sites[i].site = params[i];
    const double flux = flux_by_site.at(params[i]);
    (bit == BitProcess::kZeroBit ? sites[i].flux_zero : sites[i].flux_one) = flux;
    sites[i].contribution = flux;
  }

  if (mode == SimulationMode::kFisher) {
    const Circuit reference = build_reference();
    const LimitOptions plain{options.limit.grid, options.limit.tolerance, std::nullopt};
    const LimitEstimate f_ref =
        fisher_limit(reference, std::string(kReferenceParam), isolate(reference, std::string(kReferenceParam)), plain);
    report.f_ref = f_ref.value;
    report.converged = f_ref.converged;
    parallel_for(params.size(), [&](std::size_t i) {
      LimitEstimate est = fisher_limit(circuit, params[i], isolate(circuit, params[i]), plain);
      sites[i].contribution = est.value / f_ref.value;
      (bit == BitProcess::kZeroBit ? sites[i].fisher_zero : sites[i].fisher_one) = std::move(est);
    });
    for (const auto& s : sites) {
      const auto& est = bit == BitProcess::kZeroBit ? s.fisher_zero : s.fisher_one;
      report.converged = report.converged && est->converged;
    }
  }

  for (const auto& s : sites) {
    report.raw_sum += s.contribution;
  }
  report.sites = std::move(sites);
  report.d_vio = report.repetitions.n_gamma * report.raw_sum;
  return report;
}

nlohmann::json to_json(const LimitEstimate& estimate) {
  return {{"value", estimate.value},
          {"residual", estimate.residual},
          {"converged", estimate.converged},
          {"grid", estimate.grid},
          {"samples", estimate.samples}};
}

nlohmann::json to_json(const FisherReport& report) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : report.sites) {
    sites.push_back({{"site", s.site},
                     {"theta0", s.theta0},
                     {"fisher_at_theta0", s.fisher_at_theta0},
                     {"limit", to_json(s.limit)}});
  }
  std::vector<std::string> roles;
  for (BinRole r : report.conditioning) {
    roles.emplace_back(to_string(r));
  }
  return {{"post_selected", report.post_selected},
          {"conditioning", roles},
          {"converged", report.converged()},
          {"sites", std::move(sites)}};
}

nlohmann::json to_json(const ViolationReport& report) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : report.sites) {
    nlohmann::json j{{"site", s.site}, {"contribution", s.contribution}};
    j["fisher_zero"] = s.fisher_zero ? to_json(*s.fisher_zero) : nlohmann::json(nullptr);
    j["fisher_one"] = s.fisher_one ? to_json(*s.fisher_one) : nlohmann::json(nullptr);
    j["flux_zero"] = s.flux_zero ? nlohmann::json(*s.flux_zero) : nlohmann::json(nullptr);
    j["flux_one"] = s.flux_one ? nlohmann::json(*s.flux_one) : nlohmann::json(nullptr);
    sites.push_back(std::move(j));
  }
  return {{"d_vio", report.d_vio},
          {"raw_sum", report.raw_sum},
          {"f_ref", report.f_ref},
          {"n_gamma", report.repetitions.n_gamma},
          {"p_success", report.repetitions.p_success},
          {"epsilon", report.repetitions.epsilon},
          {"converged", report.converged},
          {"method", report.method},
          {"sites", std::move(sites)}};
}

nlohmann::json to_json(const OutcomeDistribution& dist) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& o : dist.outcomes) {
    bins.push_back({{"bin", o.name},
                    {"role", std::string(to_string(o.role))},
                    {"polarization", std::string(to_string(o.pol))},
                    {"p", o.p},
                    {"dp", o.dp}});
  }
  return {{"active_param", dist.active_param ? nlohmann::json(*dist.active_param) : nlohmann::json(nullptr)},
          {"bins", std::move(bins)}};
}

}  // namespace cfc
