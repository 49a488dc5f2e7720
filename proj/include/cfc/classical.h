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

#ifndef CFC_CLASSICAL_H_
#define CFC_CLASSICAL_H_

// Ball-and-pipe protocol: one bit per minute. On even minutes Bob rolls a
// ball for a 1 and stays idle for a 0; on odd minutes the roles swap. Alice
// decodes from whether a ball arrived. Keeping only the minutes in which no
// ball arrived leaves bits that were delivered without any crossing.

#include <cstdint>
#include <ostream>
#include <vector>

namespace cfc {

struct MinuteRecord {
  std::size_t minute = 0;
  bool even = true;
  bool bit = false;
  bool ball_sent = false;
  bool ball_received = false;
  bool channel_crossing = false;
  bool decoded = false;
  bool kept = false;
};

struct ClassicalTranscript {
  std::vector<MinuteRecord> minutes;
  std::vector<bool> decoded_bits;
  std::vector<std::size_t> kept_indices;
  std::size_t discard_count = 0;
  std::size_t crossing_count = 0;

  double discard_fraction() const;
  // Every kept minute decoded correctly with no crossing.
  bool post_selection_counterfactual() const;
};

// Throws ConfigurationError for an empty message.
ClassicalTranscript run_classical(const std::vector<bool>& message);

// Exactly floor(length / 2) ones, shuffled with a seeded mt19937_64.
std::vector<bool> balanced_message(std::size_t length, std::uint64_t seed);

// minute,parity,bit,sent,received,kept
void write_transcript_csv(const ClassicalTranscript& transcript, std::ostream& out);

}  // namespace cfc

#endif  // CFC_CLASSICAL_H_
