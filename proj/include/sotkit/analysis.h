// include/sotkit/analysis.h

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

#ifndef SOTKIT_ANALYSIS_H_
#define SOTKIT_ANALYSIS_H_

#include <span>
#include <vector>

#include "sotkit/core.h"

namespace sotkit {

struct LabeledVectors {
  std::vector<std::vector<double>> vectors;
  std::vector<SpeakerRole> labels;

  size_t size() const { return vectors.size(); }
  size_t dim() const { return vectors.empty() ? 0 : vectors.front().size(); }
};

/// 1 - cosine similarity; 2 (the maximum) when either vector is zero.
double CosineDistance(std::span<const double> a, std::span<const double> b);

/// Predicted role of one query by majority vote of its k nearest training
/// vectors (distance ties resolved by training order).  Vote ties go to the
/// role with the smaller summed distance, then to the child.
SpeakerRole KnnPredict(const LabeledVectors &train, std::span<const double> query,
                       int k);

/// Fraction of test vectors whose prediction matches their label.  Parallel
/// over test vectors.  Throws kDimensionMismatch or kInvalidInput.
double KnnProbe(const LabeledVectors &train, const LabeledVectors &test,
                int k = 5, int jobs = 0);
/// Single-threaded reference for KnnProbe.
double KnnProbeSerial(const LabeledVectors &train, const LabeledVectors &test,
                      int k = 5);

/// Sample Pearson correlation.  Throws kInsufficientData for fewer than two
/// points or unequal lengths and kZeroVariance for a constant input.
double Pearson(std::span<const double> x, std::span<const double> y);

}  // namespace sotkit

#endif  // SOTKIT_ANALYSIS_H_
