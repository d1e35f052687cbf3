// include/sotkit/metrics_diar.h

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

#ifndef SOTKIT_METRICS_DIAR_H_
#define SOTKIT_METRICS_DIAR_H_

#include <span>
#include <vector>

#include "sotkit/diarization.h"

namespace sotkit {

/// Durations in seconds.  total is reference speech time (after the collar).
struct DerBreakdown {
  double missed = 0.0;
  double false_alarm = 0.0;
  double confusion = 0.0;
  double total = 0.0;

  double der() const { return (missed + false_alarm + confusion) / total; }
  DerBreakdown &operator+=(const DerBreakdown &o) {
    missed += o.missed; false_alarm += o.false_alarm;
    confusion += o.confusion; total += o.total;
    return *this;
  }
};

/// Union of same-role segments (overlaps and touching segments merged).
std::vector<RoleSegment> MergeSameRole(std::span<const RoleSegment> segments);

/// Role diarization error by sweeping over all segment boundaries.  Roles are
/// fixed labels; no speaker mapping is searched.  Per elementary interval
/// with n_ref active reference roles, n_hyp hypothesis roles and n_both
/// shared roles:
///   missed += max(0, n_ref - n_hyp), false_alarm += max(0, n_hyp - n_ref),
///   confusion += min(n_ref, n_hyp) - n_both.
/// A collar c removes [b - c, b + c] around every reference boundary b.
/// Throws kEmptyReference when no reference speech remains.
DerBreakdown Der(std::span<const RoleSegment> ref, std::span<const RoleSegment> hyp,
                 double collar = 0.0);

struct DerInput {
  std::vector<RoleSegment> ref;
  std::vector<RoleSegment> hyp;
};

/// Per-recording breakdowns, parallel over recordings.
std::vector<DerBreakdown> DerBatch(std::span<const DerInput> inputs,
                                   double collar, int jobs = 0);
/// Single-threaded reference for DerBatch.
std::vector<DerBreakdown> DerBatchSerial(std::span<const DerInput> inputs,
                                         double collar);

}  // namespace sotkit

#endif  // SOTKIT_METRICS_DIAR_H_
