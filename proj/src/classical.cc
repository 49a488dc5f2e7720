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

#include "cfc/classical.h"

#include <random>

#include "cfc/errors.h"

namespace cfc {
namespace {

// Uniform draw in [0, bound) by rejection; std::uniform_int_distribution is
// not reproducible across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) {
    x = rng();
  }
  return x % bound;
}

}  // namespace

double ClassicalTranscript::discard_fraction() const {
  return minutes.empty() ? 0.0 : static_cast<double>(discard_count) / static_cast<double>(minutes.size());
}

bool ClassicalTranscript::post_selection_counterfactual() const {
  for (std::size_t k : kept_indices) {
    const MinuteRecord& r = minutes[k];
    if (r.channel_crossing || r.decoded != r.bit) {
      return false;
    }
  }
  return true;
}

ClassicalTranscript run_classical(const std::vector<bool>& message) {
  if (message.empty()) {
    throw ConfigurationError("message must contain at least one bit");
  }
  ClassicalTranscript t;
  t.minutes.reserve(message.size());
  t.decoded_bits.reserve(message.size());
  for (std::size_t k = 0; k < message.size(); ++k) {
    MinuteRecord r;
    r.minute = k;
    r.even = k % 2 == 0;
    r.bit = message[k];
    r.ball_sent = r.even ? r.bit : !r.bit;
    // The pipe is lossless and T_r < 1 min: every ball sent arrives in its slot.
    r.channel_crossing = r.ball_sent;
    r.ball_received = r.ball_sent;
    r.decoded = r.even ? r.ball_received : !r.ball_received;
    r.kept = !r.ball_received;
    if (r.kept) {
      t.kept_indices.push_back(k);
    } else {
      ++t.discard_count;
    }
    if (r.channel_crossing) {
      ++t.crossing_count;
    }
    t.decoded_bits.push_back(r.decoded);
    t.minutes.push_back(r);
  }
  return t;
}

std::vector<bool> balanced_message(std::size_t length, std::uint64_t seed) {
  std::vector<bool> bits(length, false);
  for (std::size_t i = 0; i < length / 2; ++i) {
    bits[i] = true;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = length; i > 1; --i) {
    const std::size_t j = draw_below(rng, i);
    const bool tmp = bits[i - 1];
    bits[i - 1] = bits[j];
    bits[j] = tmp;
  }
  return bits;
}

void write_transcript_csv(const ClassicalTranscript& transcript, std::ostream& out) {
  out << "minute,parity,bit,sent,received,kept\n";
  for (const auto& r : transcript.minutes) {
    out << r.minute << ',' << (r.even ? "even" : "odd") << ',' << int{r.bit} << ',' << int{r.ball_sent} << ','
        << int{r.ball_received} << ',' << int{r.kept} << '\n';
  }
}

}  // namespace cfc
