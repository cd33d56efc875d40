// Copyright 2026 The qrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>

namespace qrec {

/// Outcome of one recognition attempt against a stored set.
///
/// `score` is on the fidelity scale in [0, 1]. For the beam recognizer,
/// `accepted` holds exactly when score > 1 - epsilon; the single-shot
/// recognizer accepts exactly when the measurement lands on a stored state,
/// in which case best_index is that state and score is its outcome
/// probability. A rejected single-shot result has no best_index and score 0.
struct RecognitionResult {
  std::optional<std::size_t> best_index;
  double score = 0.0;
  double epsilon = 0.1;
  bool accepted = false;
};

}  // namespace qrec
