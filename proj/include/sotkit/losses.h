// include/sotkit/losses.h

// Copyright 2026  The sotkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Joint training objective evaluated on explicit probability tables.

#ifndef SOTKIT_LOSSES_H_
#define SOTKIT_LOSSES_H_

#include <array>
#include <vector>

namespace sotkit {

/// Per-step log-probabilities over a vocabulary and the target index.
struct TokenLogProbs {
  std::vector<std::vector<double>> rows;
  std::vector<int> targets;
};

/// Per-frame log-probabilities over (child, adult, silence) and the index of
/// the active class.
struct FrameLogProbs {
  std::vector<std::array<double, 3>> rows;
  std::vector<int> labels;
};

struct LossValue {
  double value = 0.0;
  // A target had probability exactly 0.  value then uses a 1e-10 floor.
  bool degenerate = false;
};

/// Mean negative log-likelihood of the targets.  Throws kInvalidInput on
/// empty or unnormalized input.
LossValue SerializedCrossEntropy(const TokenLogProbs &p);
LossValue FrameCrossEntropy(const FrameLogProbs &p);

inline double TotalLoss(double asr, double diar, double lambda_diar = 1.0) {
  return asr + lambda_diar * diar;
}

}  // namespace sotkit

#endif  // SOTKIT_LOSSES_H_
