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
#include <fstream>
#include <sstream>

#include "cfc/analysis.h"
#include "cfc/errors.h"
#include "cfc/json_io.h"
#include "gtest/gtest.h"
#include "support/oracles.h"

namespace cfc {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kGolden = CFC_GOLDEN_DIR;

double bin_p(const OutcomeDistribution& d, const Circuit& c, std::string_view name) {
  return d.bin_probability(*c.find_bin(name));
}

TEST(build_reference, fisher_is_four_at_every_angle) {
  const Circuit c = build_reference();
  const std::string p(kReferenceParam);
  for (double theta : {0.1, 0.7}) {
    EXPECT_NEAR(fisher_at(c, p, {{p, theta}}), 4.0, 1e-12);
    EXPECT_NEAR(oracle::reference_fisher(theta), 4.0, 1e-12);
  }
  const LimitEstimate limit = fisher_limit(c, p, isolate(c, p));
  EXPECT_TRUE(limit.converged);
  EXPECT_NEAR(limit.value, 4.0, 1e-12);
}

TEST(build_reduced, success_probabilities) {
  const Circuit zero = build_reduced({0.0, 0.0, BitProcess::kZeroBit});
  const Circuit one = build_reduced({0.0, 0.0, BitProcess::kOneBit});
  const OutcomeDistribution dz = propagate(zero, zero.zero_thetas());
  const OutcomeDistribution d1 = propagate(one, one.zero_thetas());
  EXPECT_NEAR(dz.role_probability(BinRole::kD0), 1.0 / 25.0, 1e-12);
  EXPECT_NEAR(d1.role_probability(BinRole::kD0), 0.0, 1e-12);
  EXPECT_NEAR(dz.total_probability(), 1.0, 1e-12);
  EXPECT_NEAR(d1.total_probability(), 1.0, 1e-12);
}

TEST(build_reduced, inner_dark_ports_are_dark_with_mirrors) {
  const Circuit zero = build_reduced({0.0, 0.0, BitProcess::kZeroBit});
  const ModeId upper = *zero.find_mode("upper");
  PhotonState s = PhotonState::single_photon(zero.modes().size(), zero.bins().size(), zero.input_mode());
  const ThetaValues thetas = zero.zero_thetas();
  int splitters_on_upper = 0;
  for (const auto& e : zero.elements()) {
    apply_element_in_place(s, e, thetas);
    const auto* bs = std::get_if<BeamSplitter>(&e);
    if (bs && bs->lo == upper) {
      ++splitters_on_upper;
      // Second splitter of each inner interferometer: upper is its lower (dark) output.
      if (splitters_on_upper == 2 || splitters_on_upper == 4) {
        const auto& a = s.amplitude(upper);
        EXPECT_LE(std::norm(a[0]) + std::norm(a[1]), 1e-24);
      }
    }
  }
  EXPECT_EQ(splitters_on_upper, 4);
}

TEST(build_reduced, matches_golden_circuits) {
  EXPECT_EQ(dump_json(circuit_to_json(build_reduced({0.0, 0.0, BitProcess::kZeroBit}))) + "\n",
            read_file(kGolden + "/reduced_zero_circuit.json"));
  EXPECT_EQ(dump_json(circuit_to_json(build_reduced({0.0, 0.0, BitProcess::kOneBit}))) + "\n",
            read_file(kGolden + "/reduced_one_circuit.json"));
}

TEST(build_reduced, matches_golden_bin_probabilities) {
  const auto golden = nlohmann::json::parse(read_file(kGolden + "/reduced_bins.json"));
  const double tol = golden["tolerance"].get<double>();
  for (auto [key, bit] : {std::pair{"zero_bit", BitProcess::kZeroBit}, std::pair{"one_bit", BitProcess::kOneBit}}) {
    const Circuit c = build_reduced({0.0, 0.0, bit});
    const OutcomeDistribution d = propagate(c, c.zero_thetas());
    ASSERT_EQ(golden[key].size(), c.bins().size());
    for (const auto& [name, p] : golden[key].items()) {
      EXPECT_NEAR(bin_p(d, c, name), p.get<double>(), tol) << key << " " << name;
    }
  }
}

TEST(build_reduced, rejects_angles_outside_range) {
  EXPECT_THROW(build_reduced({-0.1, 0.0, BitProcess::kZeroBit}), ConfigurationError);
  EXPECT_THROW(build_reduced({0.0, 1.6, BitProcess::kZeroBit}), ConfigurationError);
  EXPECT_THROW(reduced_thetas({0.0, 2.0, BitProcess::kOneBit}), ConfigurationError);
}

TEST(build_full, is_isometric) {
  for (BitProcess bit : {BitProcess::kZeroBit, BitProcess::kOneBit}) {
    const Circuit c = build_full({3, 4, bit});
    EXPECT_NEAR(propagate(c, c.zero_thetas()).total_probability(), 1.0, 1e-12);
    EXPECT_EQ(c.params().size(), 2u * 3u);
  }
}

TEST(build_full, smallest_instance_has_quarter_crossing_flux) {
  const Circuit c = build_full({2, 2, BitProcess::kZeroBit});
  const OutcomeDistribution d = propagate(c, c.zero_thetas());
  double total = 0.0;
  for (const auto& s : d.site_flux) {
    total += s.flux;
  }
  EXPECT_NEAR(total, 0.25, 1e-12);
}

TEST(build_full, crossing_flux_matches_factored_form) {
  for (int outer : {2, 3, 5, 7}) {
    for (int inner : {2, 3, 6, 9}) {
      const Circuit c = build_full({outer, inner, BitProcess::kZeroBit});
      const OutcomeDistribution d = propagate(c, c.zero_thetas());
      for (int n = 1; n < outer; ++n) {
        for (int m = 1; m < inner; ++m) {
          EXPECT_NEAR(d.flux_at(full_site_param(n, m)), oracle::crossing_flux(outer, inner, n, m), 1e-13)
              << outer << "x" << inner << " site " << n << "," << m;
        }
      }
    }
  }
}

TEST(build_full, zero_bit_chains_discard_everything_they_receive) {
  const Circuit c = build_full({4, 5, BitProcess::kZeroBit});
  const OutcomeDistribution d = propagate(c, c.zero_thetas());
  const double a = oracle::kPi / 8.0;
  EXPECT_NEAR(d.role_probability(BinRole::kD0), std::pow(std::cos(a), 8), 1e-12);
  EXPECT_NEAR(d.role_probability(BinRole::kLoss), 1.0 - std::pow(std::cos(a), 6), 1e-12);
}

TEST(build_full, one_bit_bob_detection_falls_with_n) {
  double previous = 1.0;
  for (int outer : {5, 10, 20, 40}) {
    const Circuit c = build_full({outer, outer * outer, BitProcess::kOneBit});
    const double bob = propagate(c, c.zero_thetas()).role_probability(BinRole::kBobDetector);
    EXPECT_LT(bob, previous);
    previous = bob;
  }
  EXPECT_LT(previous, 0.1);
}

TEST(build_full, enforces_size_guard) {
  EXPECT_THROW(build_full({1, 4, BitProcess::kZeroBit}), ConfigurationError);
  EXPECT_THROW(build_full({4, 1, BitProcess::kZeroBit}), ConfigurationError);
  EXPECT_THROW(build_full({2000, 1000, BitProcess::kZeroBit}), ConfigurationError);
}

TEST(circuit_to_json, is_deterministic_and_complete) {
  const Circuit c = build_full({2, 3, BitProcess::kOneBit});
  const nlohmann::json j = circuit_to_json(c);
  EXPECT_EQ(dump_json(j), dump_json(circuit_to_json(build_full({2, 3, BitProcess::kOneBit}))));
  EXPECT_EQ(j["elements"].size(), c.elements().size());
  EXPECT_EQ(j["bins"].size(), c.bins().size());
  EXPECT_EQ(j["input_mode"], "alice");
}

}  // namespace
}  // namespace cfc
