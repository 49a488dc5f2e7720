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

#ifndef CFC_CIRCUITS_H_
#define CFC_CIRCUITS_H_

#include <string>
#include <string_view>

#include "cfc/optics.h"
#include "json.hpp"

namespace cfc {

// Bob's action: mirrors in his arms (0-bit) or absorbing detectors (1-bit).
enum class BitProcess { kZeroBit, kOneBit };
std::string_view to_string(BitProcess bit);

inline constexpr std::string_view kReferenceParam = "theta";
inline constexpr std::string_view kTheta1 = "theta1";
inline constexpr std::string_view kTheta2 = "theta2";

// Tagging angles for the doubly nested interferometer. Both must lie in [0, pi/2).
struct ReducedParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  BitProcess bit = BitProcess::kZeroBit;
};

// Chained protocol: `outer` beam splitters with crossing probability
// sin^2(pi / 2 outer), and an `inner`-splitter Zeno chain after each of the
// first outer - 1 of them with crossing probability sin^2(pi / 2 inner).
struct FullParams {
  int outer = 2;
  int inner = 2;
  BitProcess bit = BitProcess::kZeroBit;
};

inline constexpr long long kMaxFullSize = 1'000'000;

// Free propagation through one tagging into a polarization-resolving detector.
Circuit build_reference();

// Doubly nested Mach-Zehnder network. Modes: "lower" (input, outer arm that
// never enters Bob's side), "upper" (outer arm hosting the inner
// interferometers), "bob1"/"bob2" (Bob's arms). Bins: D0, D1, D2 (bright port
// of inner interferometer 1, loss role), D3 (bright port of inner
// interferometer 2) and, for the 1-bit process, Bob's detectors B1, B2.
Circuit build_reduced(const ReducedParams& params);

// Angle assignment matching `params`.
ThetaValues reduced_thetas(const ReducedParams& params);

// Name of the tagging on the far arm of inner chain `n` after inner splitter `m`.
std::string full_site_param(int n, int m);

// Throws ConfigurationError unless outer, inner >= 2 and outer * inner <= kMaxFullSize.
Circuit build_full(const FullParams& params);

// Deterministic description: modes, elements in order, bins with roles.
nlohmann::json circuit_to_json(const Circuit& circuit);

}  // namespace cfc

#endif  // CFC_CIRCUITS_H_
