// src/analysis.cc

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

#include "sotkit/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "parallel.h"

namespace sotkit {

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 2.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

SpeakerRole KnnPredict(const LabeledVectors &train, std::span<const double> query,
                       int k) {
  std::vector<std::pair<double, size_t>> dist(train.size());
  for (size_t i = 0; i < train.size(); ++i)
    dist[i] = {CosineDistance(train.vectors[i], query), i};
  const size_t kk = std::min(static_cast<size_t>(k), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(kk), dist.end());
  int votes[2] = {0, 0};
  double summed[2] = {0.0, 0.0};
  for (size_t i = 0; i < kk; ++i) {
    const int r = RoleIndex(train.labels[dist[i].second]);
    ++votes[r];
    summed[r] += dist[i].first;
  }
  if (votes[0] != votes[1])
    return votes[0] > votes[1] ? SpeakerRole::kChild : SpeakerRole::kAdult;
  return summed[1] < summed[0] ? SpeakerRole::kAdult : SpeakerRole::kChild;
}

namespace {

void CheckProbe(const LabeledVectors &train, const LabeledVectors &test, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidInput, "k must be at least 1");
  if (train.vectors.size() != train.labels.size() ||
      test.vectors.size() != test.labels.size())
    throw Error(ErrorCode::kInvalidInput, "one label per vector is required");
  if (train.size() < static_cast<size_t>(k))
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("training set has {} vectors, fewer than k = {}",
                            train.size(), k));
  if (test.size() == 0) throw Error(ErrorCode::kInvalidInput, "test set is empty");
  const size_t d = train.dim();
  if (d == 0) throw Error(ErrorCode::kInvalidInput, "vectors must have dimension >= 1");
  for (const auto *set : {&train, &test})
    for (const auto &v : set->vectors)
      if (v.size() != d)
        throw Error(ErrorCode::kDimensionMismatch,
                    fmt::format("vector of dimension {} where {} was expected",
                                v.size(), d));
}

}  // namespace

double KnnProbe(const LabeledVectors &train, const LabeledVectors &test, int k,
                int jobs) {
  CheckProbe(train, test, k);
  const long n = static_cast<long>(test.size());
  long correct = 0;
#pragma omp parallel for reduction(+ : correct) num_threads(internal::ResolveJobs(jobs))
  for (long i = 0; i < n; ++i)
    correct += KnnPredict(train, test.vectors[i], k) == test.labels[i];
  return static_cast<double>(correct) / static_cast<double>(n);
}

double KnnProbeSerial(const LabeledVectors &train, const LabeledVectors &test,
                      int k) {
  CheckProbe(train, test, k);
  long correct = 0;
  for (size_t i = 0; i < test.size(); ++i)
    correct += KnnPredict(train, test.vectors[i], k) == test.labels[i];
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::kInsufficientData,
                "pearson needs two equal-length inputs of at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::kZeroVariance, "pearson input has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace sotkit
