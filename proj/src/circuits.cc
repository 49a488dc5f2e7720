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

#include "cfc/circuits.h"

#include <cmath>
#include <numbers>

#include "cfc/errors.h"

namespace cfc {
namespace {

constexpr double kPi = std::numbers::pi;

// Outer splitters: 4/5 of the input crosses into the upper arm.
constexpr double kReducedOuterStay = 1.0 / 5.0;
constexpr double kReducedInnerStay = 1.0 / 2.0;

// One inner Mach-Zehnder on (upper, bob) with Bob's arm tagged. The upper
// output is the dark port when Bob's mirror is in and the tagging is off.
void add_inner_mzi(CircuitBuilder& b, ModeId upper, ModeId bob, std::string_view param, BitProcess bit,
                   std::string bob_bin, std::string bright_bin, BinRole bright_role) {
  b.beam_splitter(upper, bob, kReducedInnerStay);
  b.tagging(bob, std::string(param));
  if (bit == BitProcess::kZeroBit) {
    b.mirror(bob);
  } else {
    b.detector(bob, std::move(bob_bin), BinRole::kBobDetector);
  }
  b.beam_splitter(upper, bob, kReducedInnerStay);
  b.detector(bob, std::move(bright_bin), bright_role);
}

void check_angle(double theta, std::string_view name) {
  if (!(theta >= 0.0 && theta < kPi / 2)) {
    throw ConfigurationError(std::string(name) + " must lie in [0, pi/2)");
  }
}

std::string element_type(const Element& elem) {
  switch (elem.index()) {
    case 0:
      return "beam_splitter";
    case 1:
      return "tagging";
    case 2:
      return "phase_plate";
    case 3:
      return "mirror";
    case 4:
      return "detector";
    default:
      return "swap";
  }
}

}  // namespace

std::string_view to_string(BitProcess bit) { return bit == BitProcess::kZeroBit ? "0" : "1"; }

Circuit build_reference() {
  CircuitBuilder b;
  const ModeId path = b.add_mode("path");
  b.set_input(path);
  b.tagging(path, std::string(kReferenceParam));
  b.detector(path, "D", BinRole::kOther);
  return b.build();
}

Circuit build_reduced(const ReducedParams& params) {
  check_angle(params.theta1, "theta1");
  check_angle(params.theta2, "theta2");

  CircuitBuilder b;
  const ModeId lower = b.add_mode("lower");
  const ModeId upper = b.add_mode("upper");
  const ModeId bob1 = b.add_mode("bob1");
  const ModeId bob2 = b.add_mode("bob2");
  b.set_input(lower);

  b.beam_splitter(lower, upper, kReducedOuterStay);
  add_inner_mzi(b, upper, bob1, kTheta1, params.bit, "B1", "D2", BinRole::kLoss);
  add_inner_mzi(b, upper, bob2, kTheta2, params.bit, "B2", "D3", BinRole::kOther);
  b.beam_splitter(lower, upper, kReducedOuterStay);
  b.detector(lower, "D0", BinRole::kD0);
  b.detector(upper, "D1", BinRole::kD1);
  return b.build();
}

ThetaValues reduced_thetas(const ReducedParams& params) {
  check_angle(params.theta1, "theta1");
  check_angle(params.theta2, "theta2");
  return ThetaValues{{std::string(kTheta1), params.theta1}, {std::string(kTheta2), params.theta2}};
}

std::string full_site_param(int n, int m) { return "t" + std::to_string(n) + "_" + std::to_string(m); }

Circuit build_full(const FullParams& params) {
  if (params.outer < 2 || params.inner < 2) {
    throw ConfigurationError("full protocol needs at least 2 outer and 2 inner beam splitters");
  }
  if (static_cast<long long>(params.outer) * params.inner > kMaxFullSize) {
    throw ConfigurationError("full protocol size N*M exceeds " + std::to_string(kMaxFullSize));
  }
  const double outer_angle = kPi / (2.0 * params.outer);
  const double inner_angle = kPi / (2.0 * params.inner);
  // Stay probabilities; the crossing probabilities are sin^2 of the angles.
  const double outer_stay = std::pow(std::cos(outer_angle), 2);
  const double inner_stay = std::pow(std::cos(inner_angle), 2);

  CircuitBuilder b;
  const ModeId alice = b.add_mode("alice");
  const ModeId arm = b.add_mode("arm");
  const ModeId far = b.add_mode("far");
  b.set_input(alice);

  for (int n = 1; n <= params.outer; ++n) {
    b.beam_splitter(alice, arm, outer_stay);
    if (n == params.outer) {
      break;
    }
    for (int m = 1; m <= params.inner; ++m) {
      b.beam_splitter(arm, far, inner_stay);
      if (m == params.inner) {
        break;
      }
      b.tagging(far, full_site_param(n, m));
      if (params.bit == BitProcess::kZeroBit) {
        b.mirror(far);
      } else {
        b.detector(far, "bob_" + std::to_string(n) + "_" + std::to_string(m), BinRole::kBobDetector);
      }
    }
    b.detector(far, "loss_" + std::to_string(n), BinRole::kLoss);
  }
  b.detector(alice, "D0", BinRole::kD0);
  b.detector(arm, "D1", BinRole::kD1);
  return b.build();
}

nlohmann::json circuit_to_json(const Circuit& circuit) {
  const auto& modes = circuit.modes();
  auto name = [&](ModeId m) { return modes.at(m.index); };

  nlohmann::json elements = nlohmann::json::array();
  for (const auto& elem : circuit.elements()) {
    nlohmann::json e;
    e["type"] = element_type(elem);
    if (const auto* bs = std::get_if<BeamSplitter>(&elem)) {
      e["lo"] = name(bs->lo);
      e["hi"] = name(bs->hi);
      e["transmission"] = bs->transmission;
    } else if (const auto* tag = std::get_if<Tagging>(&elem)) {
      e["mode"] = name(tag->mode);
      e["param"] = tag->param;
    } else if (const auto* plate = std::get_if<PhasePlate>(&elem)) {
      e["mode"] = name(plate->mode);
      e["phase"] = plate->phase;
    } else if (const auto* mirror = std::get_if<Mirror>(&elem)) {
      e["mode"] = name(mirror->mode);
    } else if (const auto* det = std::get_if<DetectorBin>(&elem)) {
      e["mode"] = name(det->mode);
      e["bin"] = circuit.bins().at(det->bin.index).name;
    } else if (const auto* sw = std::get_if<Swap>(&elem)) {
      e["a"] = name(sw->a);
      e["b"] = name(sw->b);
    }
    elements.push_back(std::move(e));
  }

  nlohmann::json bins = nlohmann::json::array();
  for (const auto& bin : circuit.bins()) {
    bins.push_back({{"name", bin.name}, {"role", std::string(to_string(bin.role))}});
  }

  return {{"input_mode", name(circuit.input_mode())},
          {"modes", modes},
          {"elements", std::move(elements)},
          {"bins", std::move(bins)}};
}

}  // namespace cfc
