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

#include <cmath>
#include <random>

#include "cfc/errors.h"
#include "gtest/gtest.h"
#include "support/oracles.h"
#include "support/random_circuit.h"

namespace cfc {
namespace {

TEST(apply_element, full_transmission_is_identity) {
  PhotonState s = PhotonState::single_photon(2, 0, ModeId{0});
  s = apply_element(s, BeamSplitter{ModeId{0}, ModeId{1}, 1.0}, {});
  EXPECT_EQ(s.amplitude(ModeId{0})[0], Amplitude(1.0, 0.0));
  EXPECT_EQ(s.amplitude(ModeId{1})[0], Amplitude(0.0, 0.0));
}

TEST(apply_element, balanced_splitter_puts_i_on_reflection) {
  PhotonState s = PhotonState::single_photon(2, 0, ModeId{0});
  s = apply_element(s, BeamSplitter{ModeId{0}, ModeId{1}, 0.5}, {});
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(s.amplitude(ModeId{0})[0] - Amplitude(r, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude(ModeId{1})[0] - Amplitude(0.0, r)), 0.0, 1e-15);
  EXPECT_NEAR(s.total_probability(), 1.0, 1e-15);
}

TEST(apply_element, tagging_at_zero_leaves_state_and_adds_generator_to_tangent) {
  PhotonState s(1, 0);
  s.amplitude(ModeId{0}) = {Amplitude(0.6, 0.1), Amplitude(-0.2, 0.3)};
  s.set_active_param("t");
  const PhotonState out = apply_element(s, Tagging{ModeId{0}, "t"}, {{"t", 0.0}});
  const auto& a = s.amplitude(ModeId{0});
  EXPECT_EQ(out.amplitude(ModeId{0}), a);
  // [[0, -1], [1, 0]] a
  EXPECT_NEAR(std::abs(out.tangent(ModeId{0})[0] - (-a[1])), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.tangent(ModeId{0})[1] - a[0]), 0.0, 1e-15);
}

TEST(apply_element, inactive_tagging_only_rotates_tangent) {
  PhotonState s(1, 0);
  s.amplitude(ModeId{0}) = {1.0, 0.0};
  s.set_active_param("other");
  const PhotonState out = apply_element(s, Tagging{ModeId{0}, "t"}, {{"t", 0.4}});
  EXPECT_EQ(out.tangent(ModeId{0})[0], Amplitude(0.0, 0.0));
  EXPECT_EQ(out.tangent(ModeId{0})[1], Amplitude(0.0, 0.0));
  EXPECT_NEAR(out.amplitude(ModeId{0})[1].real(), std::sin(0.4), 1e-15);
}

TEST(apply_element, rejects_unknown_mode_and_missing_theta) {
  PhotonState s = PhotonState::single_photon(2, 1, ModeId{0});
  EXPECT_THROW(apply_element(s, BeamSplitter{ModeId{0}, ModeId{5}, 0.5}, {}), ConfigurationError);
  EXPECT_THROW(apply_element(s, Tagging{ModeId{0}, "theta"}, {}), ConfigurationError);
  EXPECT_THROW(apply_element(s, DetectorBin{ModeId{0}, BinId{3}}, {}), ConfigurationError);
  EXPECT_THROW(apply_element(s, BeamSplitter{ModeId{0}, ModeId{1}, 1.5}, {}), ConfigurationError);
}

TEST(apply_element, detector_absorbs_and_reuses_mode) {
  PhotonState s = PhotonState::single_photon(2, 1, ModeId{0});
  s = apply_element(s, DetectorBin{ModeId{0}, BinId{0}}, {});
  EXPECT_DOUBLE_EQ(s.bin_probability(BinId{0}, Polarization::kH), 1.0);
  EXPECT_DOUBLE_EQ(s.mode_norm(), 0.0);
  s = apply_element(s, BeamSplitter{ModeId{0}, ModeId{1}, 0.3}, {});
  EXPECT_DOUBLE_EQ(s.total_probability(), 1.0);
}

TEST(propagate, bare_detector_catches_everything_in_h) {
  CircuitBuilder b;
  const ModeId in = b.add_mode("in");
  b.set_input(in);
  b.detector(in, "D", BinRole::kOther);
  const OutcomeDistribution d = propagate(b.build(), {});
  ASSERT_EQ(d.outcomes.size(), 2u);
  EXPECT_EQ(d.outcomes[0].pol, Polarization::kH);
  EXPECT_DOUBLE_EQ(d.outcomes[0].p, 1.0);
  EXPECT_DOUBLE_EQ(d.outcomes[1].p, 0.0);
}

TEST(propagate, single_tagging_matches_rotation_formula) {
  CircuitBuilder b;
  const ModeId in = b.add_mode("in");
  b.set_input(in);
  b.tagging(in, "t");
  b.detector(in, "D", BinRole::kOther);
  const OutcomeDistribution d = propagate(b.build(), {{"t", 0.3}}, "t");
  EXPECT_NEAR(d.outcomes[0].p, std::pow(std::cos(0.3), 2), 1e-15);
  EXPECT_NEAR(d.outcomes[1].p, std::pow(std::sin(0.3), 2), 1e-15);
  EXPECT_NEAR(d.outcomes[0].dp, -std::sin(0.6), 1e-15);
  EXPECT_NEAR(d.outcomes[1].dp, std::sin(0.6), 1e-15);
  ASSERT_EQ(d.site_flux.size(), 1u);
  EXPECT_DOUBLE_EQ(d.site_flux[0].flux, 1.0);
}

TEST(circuit_builder, rejects_unterminated_modes) {
  CircuitBuilder b;
  const ModeId a = b.add_mode("a");
  const ModeId c = b.add_mode("c");
  b.set_input(a);
  b.beam_splitter(a, c, 0.5);
  b.detector(a, "Da", BinRole::kD0);
  EXPECT_THROW(b.build(), StructuralError);

  CircuitBuilder never;
  never.set_input(never.add_mode("x"));
  EXPECT_THROW(never.build(), StructuralError);
}

TEST(circuit_builder, rejects_bad_configuration) {
  CircuitBuilder b;
  const ModeId a = b.add_mode("a");
  EXPECT_THROW(b.add_mode("a"), ConfigurationError);
  EXPECT_THROW(b.mode("nope"), ConfigurationError);
  b.detector(a, "D", BinRole::kD0);
  EXPECT_THROW(b.detector(a, "D", BinRole::kD1), ConfigurationError);
  EXPECT_THROW(b.build(), ConfigurationError);  // no input

  CircuitBuilder bad;
  const ModeId x = bad.add_mode("x");
  bad.set_input(x);
  bad.beam_splitter(x, ModeId{9}, 0.5);
  bad.detector(x, "D", BinRole::kD0);
  EXPECT_THROW(bad.build(), ConfigurationError);

  CircuitBuilder range;
  const ModeId y = range.add_mode("y");
  const ModeId z = range.add_mode("z");
  range.set_input(y);
  range.beam_splitter(y, z, -0.1);
  range.detector(y, "Dy", BinRole::kD0);
  range.detector(z, "Dz", BinRole::kD1);
  EXPECT_THROW(range.build(), ConfigurationError);
}

TEST(circuit, lists_params_in_first_appearance_order) {
  CircuitBuilder b;
  const ModeId a = b.add_mode("a");
  b.set_input(a);
  b.tagging(a, "z").tagging(a, "y").tagging(a, "z");
  b.detector(a, "D", BinRole::kD0);
  const Circuit c = b.build();
  EXPECT_EQ(c.params(), (std::vector<std::string>{"z", "y"}));
  EXPECT_EQ(c.zero_thetas().size(), 2u);
  EXPECT_EQ(c.find_bin("D")->index, 0u);
  EXPECT_FALSE(c.find_mode("b").has_value());
}

// Properties over random circuits.

TEST(optics_properties, isometry_holds_after_every_element) {
  std::mt19937_64 rng(20260101);
  for (int draw = 0; draw < 200; ++draw) {
    auto [circuit, thetas] = testing::random_circuit(rng, 3.0);
    PhotonState s = PhotonState::single_photon(circuit.modes().size(), circuit.bins().size(), circuit.input_mode());
    for (const auto& elem : circuit.elements()) {
      apply_element_in_place(s, elem, thetas);
      ASSERT_NEAR(s.total_probability(), 1.0, 1e-12) << "draw " << draw;
    }
    EXPECT_NEAR(propagate(circuit, thetas).total_probability(), 1.0, 1e-12);
  }
}

TEST(optics_properties, tangents_match_central_differences) {
  std::mt19937_64 rng(77);
  for (int draw = 0; draw < 100; ++draw) {
    auto [circuit, thetas] = testing::random_circuit(rng, 0.3);
    for (const auto& param : circuit.params()) {
      const OutcomeDistribution d = propagate(circuit, thetas, param);
      const std::vector<double> fd = oracle::central_difference(circuit, thetas, param, 1e-5);
      EXPECT_NEAR(d.total_derivative(), 0.0, 1e-12);
      for (std::size_t i = 0; i < fd.size(); ++i) {
        ASSERT_NEAR(d.outcomes[i].dp, fd[i], 1e-6) << "draw " << draw << " param " << param;
      }
    }
  }
}

TEST(optics_properties, evolution_is_linear) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int draw = 0; draw < 50; ++draw) {
    auto [circuit, thetas] = testing::random_circuit(rng, 1.0);
    const std::size_t modes = circuit.modes().size();
    const std::size_t bins = circuit.bins().size();
    // Drop the terminal detectors so the output amplitudes stay visible.
    std::vector<Element> body;
    for (const auto& e : circuit.elements()) {
      if (!std::holds_alternative<DetectorBin>(e)) {
        body.push_back(e);
      }
    }
    auto random_state = [&] {
      PhotonState s(modes, bins);
      for (std::uint32_t m = 0; m < 2; ++m) {
        s.amplitude(ModeId{m}) = {Amplitude(gauss(rng), gauss(rng)), Amplitude(gauss(rng), gauss(rng))};
      }
      return s;
    };
    const PhotonState x = random_state();
    const PhotonState y = random_state();
    const Amplitude alpha(gauss(rng), gauss(rng));
    const Amplitude beta(gauss(rng), gauss(rng));
    PhotonState mixed(modes, bins);
    for (std::uint32_t m = 0; m < modes; ++m) {
      for (std::size_t k = 0; k < 2; ++k) {
        mixed.amplitude(ModeId{m})[k] = alpha * x.amplitude(ModeId{m})[k] + beta * y.amplitude(ModeId{m})[k];
      }
    }
    auto run = [&](PhotonState s) {
      for (const auto& e : body) {
        apply_element_in_place(s, e, thetas);
      }
      return s;
    };
    const PhotonState fx = run(x);
    const PhotonState fy = run(y);
    const PhotonState fm = run(mixed);
    for (std::uint32_t m = 0; m < modes; ++m) {
      for (std::size_t k = 0; k < 2; ++k) {
        const Amplitude expect = alpha * fx.amplitude(ModeId{m})[k] + beta * fy.amplitude(ModeId{m})[k];
        ASSERT_NEAR(std::abs(fm.amplitude(ModeId{m})[k] - expect), 0.0, 1e-12);
      }
    }
  }
}

TEST(optics_properties, no_v_light_without_tagging) {
  std::mt19937_64 rng(9);
  for (int draw = 0; draw < 100; ++draw) {
    auto [circuit, thetas] = testing::random_circuit(rng, 1.0);
    const OutcomeDistribution d = propagate(circuit, circuit.zero_thetas());
    for (const auto& o : d.outcomes) {
      if (o.pol == Polarization::kV) {
        ASSERT_EQ(o.p, 0.0);
      }
    }
  }
}

}  // namespace
}  // namespace cfc
