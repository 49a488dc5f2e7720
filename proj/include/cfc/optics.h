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

#ifndef CFC_OPTICS_H_
#define CFC_OPTICS_H_

// Single-photon states on (spatial mode x polarization) and their
// propagation through lossless linear optics with absorbing detectors.
//
// Every state carries, next to its amplitudes, the exact derivative of those
// amplitudes with respect to one tagging angle (the "active" parameter).
// Each element acts linearly on both, so derivatives of all detector
// probabilities come out of a single forward pass.

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cfc {

using Amplitude = std::complex<double>;

enum class Polarization : std::uint8_t { kH = 0, kV = 1 };
inline constexpr std::array<Polarization, 2> kPolarizations{Polarization::kH, Polarization::kV};
std::string_view to_string(Polarization pol);

// Amplitude pair indexed by Polarization (H -> 0, V -> 1).
using PolarizedAmplitude = std::array<Amplitude, 2>;

struct ModeId {
  std::uint32_t index = 0;
  auto operator<=>(const ModeId&) const = default;
};

struct BinId {
  std::uint32_t index = 0;
  auto operator<=>(const BinId&) const = default;
};

enum class BinRole : std::uint8_t { kD0, kD1, kLoss, kBobDetector, kOther };
std::string_view to_string(BinRole role);
std::optional<BinRole> parse_bin_role(std::string_view text);

// Tagging angles in radians, keyed by parameter name.
using ThetaValues = std::map<std::string, double, std::less<>>;

// On (lo, hi): lo' = sqrt(T) lo + i sqrt(1-T) hi, hi' = i sqrt(1-T) lo + sqrt(T) hi.
// T is the probability of staying in the same mode.
struct BeamSplitter {
  ModeId lo;
  ModeId hi;
  double transmission = 0.5;
};

// Polarization rotation H -> cos H + sin V, V -> cos V - sin H.
struct Tagging {
  ModeId mode;
  std::string param;
};

struct PhasePlate {
  ModeId mode;
  double phase = 0.0;
};

// Bob's reflector. Acts as the identity on amplitudes.
struct Mirror {
  ModeId mode;
};

// Absorbs everything in `mode` into a polarization-resolving bin. The mode is
// left in vacuum and may be reused by later elements.
struct DetectorBin {
  ModeId mode;
  BinId bin;
};

struct Swap {
  ModeId a;
  ModeId b;
};

using Element = std::variant<BeamSplitter, Tagging, PhasePlate, Mirror, DetectorBin, Swap>;

class PhotonState {
 public:
  PhotonState(std::size_t num_modes, std::size_t num_bins);

  // One photon with unit amplitude in `input`.
  static PhotonState single_photon(std::size_t num_modes, std::size_t num_bins, ModeId input,
                                   Polarization pol = Polarization::kH);

  std::size_t num_modes() const { return amplitudes_.size(); }
  std::size_t num_bins() const { return bin_probability_.size(); }

  PolarizedAmplitude& amplitude(ModeId mode) { return amplitudes_.at(mode.index); }
  const PolarizedAmplitude& amplitude(ModeId mode) const { return amplitudes_.at(mode.index); }
  PolarizedAmplitude& tangent(ModeId mode) { return tangents_.at(mode.index); }
  const PolarizedAmplitude& tangent(ModeId mode) const { return tangents_.at(mode.index); }

  double bin_probability(BinId bin, Polarization pol) const;
  double bin_derivative(BinId bin, Polarization pol) const;
  void absorb(ModeId mode, BinId bin);

  const std::optional<std::string>& active_param() const { return active_param_; }
  void set_active_param(std::optional<std::string> param) { active_param_ = std::move(param); }

  // Probability still travelling in modes.
  double mode_norm() const;
  // Probability collected in bins so far.
  double absorbed_probability() const;
  double total_probability() const { return mode_norm() + absorbed_probability(); }

 private:
  std::vector<PolarizedAmplitude> amplitudes_;
  std::vector<PolarizedAmplitude> tangents_;
  std::vector<std::array<double, 2>> bin_probability_;
  std::vector<std::array<double, 2>> bin_derivative_;
  std::optional<std::string> active_param_;
};

// Mutates `state` by one element. Throws ConfigurationError for modes or bins
// outside the state and for taggings whose angle is not in `thetas`.
void apply_element_in_place(PhotonState& state, const Element& elem, const ThetaValues& thetas);

PhotonState apply_element(PhotonState state, const Element& elem, const ThetaValues& thetas);

struct BinInfo {
  std::string name;
  BinRole role = BinRole::kOther;
};

// Immutable validated network. Construct through CircuitBuilder.
class Circuit {
 public:
  const std::vector<std::string>& modes() const { return modes_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<BinInfo>& bins() const { return bins_; }
  ModeId input_mode() const { return input_; }
  // Distinct tagging parameters in order of first appearance.
  const std::vector<std::string>& params() const { return params_; }

  std::optional<ModeId> find_mode(std::string_view name) const;
  std::optional<BinId> find_bin(std::string_view name) const;
  std::vector<BinId> bins_with_role(BinRole role) const;

  // Every tagging parameter set to zero.
  ThetaValues zero_thetas() const;

 private:
  friend class CircuitBuilder;
  Circuit() = default;

  std::vector<std::string> modes_;
  std::vector<Element> elements_;
  std::vector<BinInfo> bins_;
  std::vector<std::string> params_;
  ModeId input_;
};

class CircuitBuilder {
 public:
  ModeId add_mode(std::string name);
  // Looks up a mode by name; throws ConfigurationError if absent.
  ModeId mode(std::string_view name) const;
  void set_input(ModeId mode) { input_ = mode; }

  CircuitBuilder& add(Element elem);
  CircuitBuilder& beam_splitter(ModeId lo, ModeId hi, double transmission);
  CircuitBuilder& tagging(ModeId mode, std::string param);
  CircuitBuilder& phase_plate(ModeId mode, double phase);
  CircuitBuilder& mirror(ModeId mode);
  CircuitBuilder& swap(ModeId a, ModeId b);
  // Registers a new bin and terminates `mode` into it.
  CircuitBuilder& detector(ModeId mode, std::string bin_name, BinRole role);

  std::size_t element_count() const { return elements_.size(); }

  // Validates and freezes. Throws ConfigurationError for dangling references
  // or out-of-range parameters, StructuralError when a used mode does not end
  // in a detector.
  Circuit build() const;

 private:
  std::vector<std::string> modes_;
  std::map<std::string, ModeId, std::less<>> mode_index_;
  std::vector<Element> elements_;
  std::vector<BinInfo> bins_;
  std::map<std::string, BinId, std::less<>> bin_index_;
  std::optional<ModeId> input_;
};

struct BinOutcome {
  BinId bin;
  std::string name;
  BinRole role = BinRole::kOther;
  Polarization pol = Polarization::kH;
  double p = 0.0;
  double dp = 0.0;
};

// Probability passing through one Tagging element (evaluated before rotation).
struct SiteFlux {
  std::string param;
  double flux = 0.0;
};

struct OutcomeDistribution {
  // Two entries per bin (H then V), in bin registration order.
  std::vector<BinOutcome> outcomes;
  std::optional<std::string> active_param;
  std::vector<SiteFlux> site_flux;

  double total_probability() const;
  double total_derivative() const;
  // Both polarizations of one bin.
  double bin_probability(BinId bin) const;
  double role_probability(BinRole role) const;
  double flux_at(std::string_view param) const;
};

// Injects an H photon into the circuit's input mode and runs every element.
// Throws StructuralError if amplitude above 1e-12 remains in any mode.
OutcomeDistribution propagate(const Circuit& circuit, const ThetaValues& thetas,
                              std::optional<std::string> active_param = std::nullopt);

// Runs the circuit on an arbitrary initial state and returns the final state.
PhotonState evolve(const Circuit& circuit, PhotonState initial, const ThetaValues& thetas);

}  // namespace cfc

#endif  // CFC_OPTICS_H_
