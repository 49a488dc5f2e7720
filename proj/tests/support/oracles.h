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

#ifndef CFC_TESTS_SUPPORT_ORACLES_H_
#define CFC_TESTS_SUPPORT_ORACLES_H_

// Independent reference computations. None of these call into the
// propagation or Fisher code paths they are used to check, except
// central_difference, which only uses propagate's probabilities.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cfc/optics.h"

namespace cfc::oracle {

inline constexpr double kPi = std::numbers::pi;

// sum_{n=1}^{N-1} c^{2(n-1)} s^2 telescopes to 1 - c^{2(N-1)}; the inner sum
// pairs m with M - m (sin^2 + cos^2 = 1) to give (M - 1) / 2. The outer factor
// is evaluated as -expm1((N - 1) log1p(-s^2)) to avoid cancellation near c = 1.
inline double full_sum_closed_form(int outer, int inner) {
  const double s2 = std::pow(std::sin(kPi / (2.0 * outer)), 2);
  return -std::expm1((outer - 1) * std::log1p(-s2)) * (inner - 1) / 2.0;
}

// Probability reaching Bob's tagging (n, m) of the 0-bit chain at theta = 0.
inline double crossing_flux(int outer, int inner, int n, int m) {
  const double a = kPi / (2.0 * outer);
  return std::pow(std::cos(a), 2 * (n - 1)) * std::pow(std::sin(a), 2) *
         std::pow(std::sin(m * kPi / (2.0 * inner)), 2);
}

// p = (cos^2, sin^2), dp = (-sin 2t, sin 2t), summed by hand.
inline double reference_fisher(double theta) {
  const double c2 = std::pow(std::cos(theta), 2);
  const double s2 = std::pow(std::sin(theta), 2);
  const double d = std::sin(2.0 * theta);
  return d * d / c2 + d * d / s2;
}

// Smallest n with (1 - p)^n < eps by direct iteration.
inline int n_gamma_by_iteration(double p, double eps) {
  double miss = 1.0;
  int n = 0;
  do {
    miss *= 1.0 - p;
    ++n;
  } while (!(miss < eps));
  return n;
}

// Central difference of every outcome probability with respect to `param`.
inline std::vector<double> central_difference(const Circuit& circuit, const ThetaValues& thetas,
                                              const std::string& param, double h) {
  ThetaValues plus = thetas;
  ThetaValues minus = thetas;
  plus[param] += h;
  minus[param] -= h;
  const OutcomeDistribution up = propagate(circuit, plus);
  const OutcomeDistribution down = propagate(circuit, minus);
  std::vector<double> out(up.outcomes.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (up.outcomes[i].p - down.outcomes[i].p) / (2.0 * h);
  }
  return out;
}

}  // namespace cfc::oracle

#endif  // CFC_TESTS_SUPPORT_ORACLES_H_
