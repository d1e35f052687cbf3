// src/metrics_diar.cc

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

#include "sotkit/metrics_diar.h"

#include <algorithm>

#include "parallel.h"

namespace sotkit {

std::vector<RoleSegment> MergeSameRole(std::span<const RoleSegment> segments) {
  std::vector<RoleSegment> out;
  for (SpeakerRole role : kRoles) {
    std::vector<TimeInterval> spans;
    for (const RoleSegment &s : segments) {
      if (!s.span.valid())
        throw Error(ErrorCode::kInvalidInput, "segment with invalid span");
      if (s.role == role && s.span.duration() > 0.0) spans.push_back(s.span);
    }
    std::sort(spans.begin(), spans.end(),
              [](const TimeInterval &a, const TimeInterval &b) {
                return a.start < b.start;
              });
    const size_t first = out.size();
    for (const TimeInterval &t : spans) {
      if (out.size() > first && t.start <= out.back().span.end)
        out.back().span.end = std::max(out.back().span.end, t.end);
      else
        out.push_back({role, t});
    }
  }
  return out;
}

namespace {

bool Active(const std::vector<RoleSegment> &segs, SpeakerRole role, double t) {
  for (const RoleSegment &s : segs)
    if (s.role == role && s.span.start <= t && t < s.span.end) return true;
  return false;
}

}  // namespace

DerBreakdown Der(std::span<const RoleSegment> ref_in,
                 std::span<const RoleSegment> hyp_in, double collar) {
  if (!(collar >= 0.0))
    throw Error(ErrorCode::kInvalidInput, "collar must be non-negative");
  const std::vector<RoleSegment> ref = MergeSameRole(ref_in);
  const std::vector<RoleSegment> hyp = MergeSameRole(hyp_in);

  std::vector<TimeInterval> excised;
  std::vector<double> points;
  for (const RoleSegment &s : ref) {
    points.push_back(s.span.start);
    points.push_back(s.span.end);
    if (collar > 0.0) {
      for (double b : {s.span.start, s.span.end}) {
        excised.push_back({std::max(0.0, b - collar), b + collar});
        points.push_back(excised.back().start);
        points.push_back(excised.back().end);
      }
    }
  }
  for (const RoleSegment &s : hyp) {
    points.push_back(s.span.start);
    points.push_back(s.span.end);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  DerBreakdown out;
  for (size_t k = 0; k + 1 < points.size(); ++k) {
    const double a = points[k], b = points[k + 1];
    const double mid = 0.5 * (a + b);
    bool skip = false;
    for (const TimeInterval &e : excised)
      if (e.start <= mid && mid < e.end) {
        skip = true;
        break;
      }
    if (skip) continue;
    int n_ref = 0, n_hyp = 0, n_both = 0;
    for (SpeakerRole role : kRoles) {
      const bool r = Active(ref, role, mid);
      const bool h = Active(hyp, role, mid);
      n_ref += r;
      n_hyp += h;
      n_both += r && h;
    }
    const double dur = b - a;
    out.total += n_ref * dur;
    out.missed += std::max(0, n_ref - n_hyp) * dur;
    out.false_alarm += std::max(0, n_hyp - n_ref) * dur;
    out.confusion += (std::min(n_ref, n_hyp) - n_both) * dur;
  }
  if (!(out.total > 0.0))
    throw Error(ErrorCode::kEmptyReference, "reference has no scored speech");
  return out;
}

std::vector<DerBreakdown> DerBatch(std::span<const DerInput> inputs,
                                   double collar, int jobs) {
  std::vector<DerBreakdown> out(inputs.size());
  internal::ExceptionSlot slot;
  const long n = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(dynamic) num_threads(internal::ResolveJobs(jobs))
  for (long i = 0; i < n; ++i)
    slot.Run([&] { out[i] = Der(inputs[i].ref, inputs[i].hyp, collar); });
  slot.Rethrow();
  return out;
}

std::vector<DerBreakdown> DerBatchSerial(std::span<const DerInput> inputs,
                                         double collar) {
  std::vector<DerBreakdown> out;
  out.reserve(inputs.size());
  for (const DerInput &in : inputs) out.push_back(Der(in.ref, in.hyp, collar));
  return out;
}

}  // namespace sotkit
