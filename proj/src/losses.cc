// src/losses.cc

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

#include "sotkit/losses.h"

#include <cmath>
#include <span>

#include <fmt/format.h>

#include "sotkit/core.h"

namespace sotkit {

namespace {

const double kLogFloor = std::log(1e-10);

void CheckRow(std::span<const double> row, size_t index) {
  double sum = 0.0;
  for (double lp : row) {
    if (std::isnan(lp) || lp > 1e-12)
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("row {} holds an invalid log-probability", index));
    sum += std::exp(lp);
  }
  if (std::fabs(sum - 1.0) > 1e-6)
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("row {} sums to {} instead of 1", index, sum));
}

// Accumulates -log p for one target.
void Accumulate(double lp, LossValue &acc) {
  if (lp == -INFINITY) acc.degenerate = true;
  acc.value -= std::max(lp, kLogFloor);
}

}  // namespace

LossValue SerializedCrossEntropy(const TokenLogProbs &p) {
  if (p.rows.empty() || p.rows.size() != p.targets.size())
    throw Error(ErrorCode::kInvalidInput, "need one target per step and T >= 1");
  LossValue acc;
  for (size_t t = 0; t < p.rows.size(); ++t) {
    CheckRow(p.rows[t], t);
    const int y = p.targets[t];
    if (y < 0 || y >= static_cast<int>(p.rows[t].size()))
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("target {} outside the vocabulary at step {}", y, t));
    Accumulate(p.rows[t][static_cast<size_t>(y)], acc);
  }
  acc.value /= static_cast<double>(p.rows.size());
  return acc;
}

LossValue FrameCrossEntropy(const FrameLogProbs &p) {
  if (p.rows.empty() || p.rows.size() != p.labels.size())
    throw Error(ErrorCode::kInvalidInput, "need one label per frame and N >= 1");
  LossValue acc;
  for (size_t n = 0; n < p.rows.size(); ++n) {
    CheckRow(p.rows[n], n);
    const int c = p.labels[n];
    if (c < 0 || c > 2)
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("frame {} has class {} outside 0..2", n, c));
    Accumulate(p.rows[n][static_cast<size_t>(c)], acc);
  }
  acc.value /= static_cast<double>(p.rows.size());
  return acc;
}

}  // namespace sotkit
