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

#include "cfc/optics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "cfc/errors.h"

namespace cfc {
namespace {

constexpr Amplitude kI{0.0, 1.0};
constexpr double kResidualTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_mode(const PhotonState& state, ModeId mode) {
  if (mode.index >= state.num_modes()) {
    throw ConfigurationError("element references unknown mode index " + std::to_string(mode.index));
  }
}

double lookup_theta(const ThetaValues& thetas, const std::string& param) {
  auto it = thetas.find(param);
  if (it == thetas.end()) {
    throw ConfigurationError("no tagging angle supplied for parameter '" + param + "'");
  }
  return it->second;
}

void mix(PolarizedAmplitude& lo, PolarizedAmplitude& hi, double transmission) {
  const double t = std::sqrt(transmission);
  const double r = std::sqrt(1.0 - transmission);
  for (std::size_t k = 0; k < 2; ++k) {
    const Amplitude a = lo[k];
    const Amplitude b = hi[k];
    lo[k] = t * a + kI * r * b;
    hi[k] = kI * r * a + t * b;
  }
}

PolarizedAmplitude rotate(const PolarizedAmplitude& v, double c, double s) {
  return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

double norm2(const PolarizedAmplitude& v) { return std::norm(v[0]) + std::norm(v[1]); }

}  // namespace

std::string_view to_string(Polarization pol) { return pol == Polarization::kH ? "H" : "V"; }

std::string_view to_string(BinRole role) {
  switch (role) {
    case BinRole::kD0:
      return "D0";
    case BinRole::kD1:
      return "D1";
    case BinRole::kLoss:
      return "loss";
    case BinRole::kBobDetector:
      return "bob";
    case BinRole::kOther:
      return "other";
  }
  return "other";
}

std::optional<BinRole> parse_bin_role(std::string_view text) {
  for (BinRole role : {BinRole::kD0, BinRole::kD1, BinRole::kLoss, BinRole::kBobDetector, BinRole::kOther}) {
    if (to_string(role) == text) {
      return role;
    }
  }
  return std::nullopt;
}

PhotonState::PhotonState(std::size_t num_modes, std::size_t num_bins)
    : amplitudes_(num_modes, PolarizedAmplitude{}),
      tangents_(num_modes, PolarizedAmplitude{}),
      bin_probability_(num_bins, {0.0, 0.0}),
      bin_derivative_(num_bins, {0.0, 0.0}) {}

PhotonState PhotonState::single_photon(std::size_t num_modes, std::size_t num_bins, ModeId input,
                                       Polarization pol) {
  PhotonState state(num_modes, num_bins);
  check_mode(state, input);
  state.amplitude(input)[static_cast<std::size_t>(pol)] = 1.0;
  return state;
}

double PhotonState::bin_probability(BinId bin, Polarization pol) const {
  return bin_probability_.at(bin.index)[static_cast<std::size_t>(pol)];
}

double PhotonState::bin_derivative(BinId bin, Polarization pol) const {
  return bin_derivative_.at(bin.index)[static_cast<std::size_t>(pol)];
}

void PhotonState::absorb(ModeId mode, BinId bin) {
  if (bin.index >= num_bins()) {
    throw ConfigurationError("detector references unknown bin index " + std::to_string(bin.index));
  }
  auto& amp = amplitudes_.at(mode.index);
  auto& tan = tangents_.at(mode.index);
  for (std::size_t k = 0; k < 2; ++k) {
    bin_probability_[bin.index][k] += std::norm(amp[k]);
    bin_derivative_[bin.index][k] += 2.0 * std::real(std::conj(amp[k]) * tan[k]);
  }
  amp = {};
  tan = {};
}

double PhotonState::mode_norm() const {
  return std::accumulate(amplitudes_.begin(), amplitudes_.end(), 0.0,
                         [](double acc, const PolarizedAmplitude& v) { return acc + norm2(v); });
}

double PhotonState::absorbed_probability() const {
  double total = 0.0;
  for (const auto& p : bin_probability_) {
    total += p[0] + p[1];
  }
  return total;
}

void apply_element_in_place(PhotonState& state, const Element& elem, const ThetaValues& thetas) {
  std::visit(
      Overloaded{
          [&](const BeamSplitter& bs) {
            check_mode(state, bs.lo);
            check_mode(state, bs.hi);
            if (bs.lo == bs.hi) {
              throw ConfigurationError("beam splitter needs two distinct modes");
            }
            if (!(bs.transmission >= 0.0 && bs.transmission <= 1.0)) {
              throw ConfigurationError("beam splitter transmission outside [0, 1]");
            }
            mix(state.amplitude(bs.lo), state.amplitude(bs.hi), bs.transmission);
            mix(state.tangent(bs.lo), state.tangent(bs.hi), bs.transmission);
          },
          [&](const Tagging& tag) {
            check_mode(state, tag.mode);
            const double theta = lookup_theta(thetas, tag.param);
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            const PolarizedAmplitude amp = state.amplitude(tag.mode);
            PolarizedAmplitude tan = rotate(state.tangent(tag.mode), c, s);
            if (state.active_param() == tag.param) {
              // dR/dtheta = [[-s, -c], [c, -s]]
              tan[0] += -s * amp[0] - c * amp[1];
              tan[1] += c * amp[0] - s * amp[1];
            }
            state.amplitude(tag.mode) = rotate(amp, c, s);
            state.tangent(tag.mode) = tan;
          },
          [&](const PhasePlate& plate) {
            check_mode(state, plate.mode);
            const Amplitude phase = std::polar(1.0, plate.phase);
            for (auto* v : {&state.amplitude(plate.mode), &state.tangent(plate.mode)}) {
              (*v)[0] *= phase;
              (*v)[1] *= phase;
            }
          },
          [&](const Mirror& m) { check_mode(state, m.mode); },
          [&](const DetectorBin& det) {
            check_mode(state, det.mode);
            state.absorb(det.mode, det.bin);
          },
          [&](const Swap& sw) {
            check_mode(state, sw.a);
            check_mode(state, sw.b);
            std::swap(state.amplitude(sw.a), state.amplitude(sw.b));
            std::swap(state.tangent(sw.a), state.tangent(sw.b));
          },
      },
      elem);
}

PhotonState apply_element(PhotonState state, const Element& elem, const ThetaValues& thetas) {
  apply_element_in_place(state, elem, thetas);
  return state;
}

std::optional<ModeId> Circuit::find_mode(std::string_view name) const {
  auto it = std::find(modes_.begin(), modes_.end(), name);
  if (it == modes_.end()) {
    return std::nullopt;
  }
  return ModeId{static_cast<std::uint32_t>(it - modes_.begin())};
}

std::optional<BinId> Circuit::find_bin(std::string_view name) const {
  auto it = std::find_if(bins_.begin(), bins_.end(), [&](const BinInfo& b) { return b.name == name; });
  if (it == bins_.end()) {
    return std::nullopt;
  }
  return BinId{static_cast<std::uint32_t>(it - bins_.begin())};
}

std::vector<BinId> Circuit::bins_with_role(BinRole role) const {
  std::vector<BinId> out;
  for (std::size_t i = 0; i < bins_.size(); ++i) {
    if (bins_[i].role == role) {
      out.push_back(BinId{static_cast<std::uint32_t>(i)});
    }
  }
  return out;
}

ThetaValues Circuit::zero_thetas() const {
  ThetaValues out;
  for (const auto& p : params_) {
    out.emplace(p, 0.0);
  }
  return out;
}

ModeId CircuitBuilder::add_mode(std::string name) {
  if (mode_index_.contains(name)) {
    throw ConfigurationError("duplicate mode '" + name + "'");
  }
  ModeId id{static_cast<std::uint32_t>(modes_.size())};
  mode_index_.emplace(name, id);
  modes_.push_back(std::move(name));
  return id;
}

ModeId CircuitBuilder::mode(std::string_view name) const {
  auto it = mode_index_.find(name);
  if (it == mode_index_.end()) {
    throw ConfigurationError("unknown mode '" + std::string(name) + "'");
  }
  return it->second;
}

CircuitBuilder& CircuitBuilder::add(Element elem) {
  elements_.push_back(std::move(elem));
  return *this;
}

CircuitBuilder& CircuitBuilder::beam_splitter(ModeId lo, ModeId hi, double transmission) {
  return add(BeamSplitter{lo, hi, transmission});
}

CircuitBuilder& CircuitBuilder::tagging(ModeId mode, std::string param) {
  return add(Tagging{mode, std::move(param)});
}

CircuitBuilder& CircuitBuilder::phase_plate(ModeId mode, double phase) { return add(PhasePlate{mode, phase}); }

CircuitBuilder& CircuitBuilder::mirror(ModeId mode) { return add(Mirror{mode}); }

CircuitBuilder& CircuitBuilder::swap(ModeId a, ModeId b) { return add(Swap{a, b}); }

CircuitBuilder& CircuitBuilder::detector(ModeId mode, std::string bin_name, BinRole role) {
  if (bin_index_.contains(bin_name)) {
    throw ConfigurationError("duplicate bin '" + bin_name + "'");
  }
  BinId id{static_cast<std::uint32_t>(bins_.size())};
  bin_index_.emplace(bin_name, id);
  bins_.push_back(BinInfo{std::move(bin_name), role});
  return add(DetectorBin{mode, id});
}

Circuit CircuitBuilder::build() const {
  const std::size_t num_modes = modes_.size();
  if (!input_) {
    throw ConfigurationError("circuit has no input mode");
  }
  auto require_mode = [&](ModeId m) {
    if (m.index >= num_modes) {
      throw ConfigurationError("element references unknown mode index " + std::to_string(m.index));
    }
  };
  require_mode(*input_);

  // Last element touching each mode; an index of -1 means untouched.
  std::vector<std::ptrdiff_t> last_touch(num_modes, -1);
  std::vector<int> bin_uses(bins_.size(), 0);
  std::vector<std::string> params;
  std::set<std::string, std::less<>> seen_params;

  for (std::size_t i = 0; i < elements_.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    std::visit(Overloaded{
                   [&](const BeamSplitter& bs) {
                     require_mode(bs.lo);
                     require_mode(bs.hi);
                     if (bs.lo == bs.hi) {
                       throw ConfigurationError("beam splitter needs two distinct modes");
                     }
                     if (!(bs.transmission >= 0.0 && bs.transmission <= 1.0)) {
                       throw ConfigurationError("beam splitter transmission outside [0, 1]");
                     }
                     last_touch[bs.lo.index] = idx;
                     last_touch[bs.hi.index] = idx;
                   },
                   [&](const Tagging& tag) {
                     require_mode(tag.mode);
                     if (tag.param.empty()) {
                       throw ConfigurationError("tagging without parameter name");
                     }
                     if (seen_params.insert(tag.param).second) {
                       params.push_back(tag.param);
                     }
                     last_touch[tag.mode.index] = idx;
                   },
                   [&](const PhasePlate& plate) {
                     require_mode(plate.mode);
                     if (!std::isfinite(plate.phase)) {
                       throw ConfigurationError("phase plate with non-finite phase");
                     }
                     last_touch[plate.mode.index] = idx;
                   },
                   [&](const Mirror& m) {
                     require_mode(m.mode);
                     last_touch[m.mode.index] = idx;
                   },
                   [&](const DetectorBin& det) {
                     require_mode(det.mode);
                     if (det.bin.index >= bins_.size()) {
                       throw ConfigurationError("detector references unknown bin");
                     }
                     ++bin_uses[det.bin.index];
                     last_touch[det.mode.index] = idx;
                   },
                   [&](const Swap& sw) {
                     require_mode(sw.a);
                     require_mode(sw.b);
                     last_touch[sw.a.index] = idx;
                     last_touch[sw.b.index] = idx;
                   },
               },
               elements_[i]);
  }

  for (std::size_t b = 0; b < bins_.size(); ++b) {
    if (bin_uses[b] != 1) {
      throw ConfigurationError("bin '" + bins_[b].name + "' must be fed by exactly one detector");
    }
  }
  for (std::size_t m = 0; m < num_modes; ++m) {
    const bool is_input = m == input_->index;
    if (last_touch[m] < 0) {
      if (is_input) {
        throw StructuralError("input mode '" + modes_[m] + "' is never terminated by a detector");
      }
      continue;
    }
    // Only a detector leaves a mode provably empty.
    if (!std::holds_alternative<DetectorBin>(elements_[static_cast<std::size_t>(last_touch[m])])) {
      throw StructuralError("mode '" + modes_[m] + "' is not terminated by a detector");
    }
  }

  Circuit circuit;
  circuit.modes_ = modes_;
  circuit.elements_ = elements_;
  circuit.bins_ = bins_;
  circuit.params_ = std::move(params);
  circuit.input_ = *input_;
  return circuit;
}

double OutcomeDistribution::total_probability() const {
  double total = 0.0;
  for (const auto& o : outcomes) {
    total += o.p;
  }
  return total;
}

double OutcomeDistribution::total_derivative() const {
  double total = 0.0;
  for (const auto& o : outcomes) {
    total += o.dp;
  }
  return total;
}

double OutcomeDistribution::bin_probability(BinId bin) const {
  double total = 0.0;
  for (const auto& o : outcomes) {
    if (o.bin == bin) {
      total += o.p;
    }
  }
  return total;
}

double OutcomeDistribution::role_probability(BinRole role) const {
  double total = 0.0;
  for (const auto& o : outcomes) {
    if (o.role == role) {
      total += o.p;
    }
  }
  return total;
}

double OutcomeDistribution::flux_at(std::string_view param) const {
  double total = 0.0;
  for (const auto& s : site_flux) {
    if (s.param == param) {
      total += s.flux;
    }
  }
  return total;
}

PhotonState evolve(const Circuit& circuit, PhotonState state, const ThetaValues& thetas) {
  for (const auto& elem : circuit.elements()) {
    apply_element_in_place(state, elem, thetas);
  }
  return state;
}

OutcomeDistribution propagate(const Circuit& circuit, const ThetaValues& thetas,
                              std::optional<std::string> active_param) {
  PhotonState state =
      PhotonState::single_photon(circuit.modes().size(), circuit.bins().size(), circuit.input_mode());
  state.set_active_param(active_param);

  OutcomeDistribution dist;
  dist.active_param = std::move(active_param);
  for (const auto& elem : circuit.elements()) {
    if (const auto* tag = std::get_if<Tagging>(&elem)) {
      dist.site_flux.push_back(SiteFlux{tag->param, norm2(state.amplitude(tag->mode))});
    }
    apply_element_in_place(state, elem, thetas);
  }

  const double residual = state.mode_norm();
  if (residual > kResidualTolerance) {
    throw StructuralError("propagation left probability " + std::to_string(residual) +
                          " in non-terminated modes");
  }

  const auto& bins = circuit.bins();
  dist.outcomes.reserve(2 * bins.size());
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const BinId id{static_cast<std::uint32_t>(b)};
    for (Polarization pol : kPolarizations) {
      dist.outcomes.push_back(
          BinOutcome{id, bins[b].name, bins[b].role, pol, state.bin_probability(id, pol),
                     state.bin_derivative(id, pol)});
    }
  }
  return dist;
}

}  // namespace cfc
