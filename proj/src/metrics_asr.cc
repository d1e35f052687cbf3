// src/metrics_asr.cc

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

#include "sotkit/metrics_asr.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "parallel.h"

namespace sotkit {

Alignment AlignWords(std::span<const Word> ref, std::span<const Word> hyp) {
  const size_t n = ref.size(), m = hyp.size();
  const int64_t k = CompositeWeight(n, m);
  // cost[i][j]: best composite cost aligning ref[0..i) with hyp[0..j).
  std::vector<int64_t> cost((n + 1) * (m + 1));
  auto at = [m](size_t i, size_t j) { return i * (m + 1) + j; };
  auto pair_cost = [&](size_t i, size_t j) {
    int64_t c = ref[i].text == hyp[j].text ? 0 : k;
    if (ref[i].role != hyp[j].role) c += 1;
    return c;
  };
  for (size_t i = 0; i <= n; ++i) cost[at(i, 0)] = static_cast<int64_t>(i) * k;
  for (size_t j = 0; j <= m; ++j) cost[at(0, j)] = static_cast<int64_t>(j) * k;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      cost[at(i, j)] = std::min({cost[at(i - 1, j - 1)] + pair_cost(i - 1, j - 1),
                                 cost[at(i - 1, j)] + k, cost[at(i, j - 1)] + k});
    }
  }
  // Backtrace.  On ties prefer a deletion, then an insertion, then a pair,
  // which leaves trailing unmatched words at the end of the alignment.
  Alignment out;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const int64_t c = cost[at(i, j)];
    if (i > 0 && cost[at(i - 1, j)] + k == c) {
      out.ops.push_back({AlignOpKind::kDel, static_cast<int>(i - 1), -1});
      --i;
    } else if (j > 0 && cost[at(i, j - 1)] + k == c) {
      out.ops.push_back({AlignOpKind::kIns, -1, static_cast<int>(j - 1)});
      --j;
    } else {
      const AlignOpKind kind = ref[i - 1].text == hyp[j - 1].text
                                   ? AlignOpKind::kMatch
                                   : AlignOpKind::kSub;
      out.ops.push_back({kind, static_cast<int>(i - 1), static_cast<int>(j - 1)});
      --i;
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

namespace {

void CheckAlignment(const Alignment &a, size_t n, size_t m) {
  int next_ref = 0, next_hyp = 0;
  auto fail = [](const std::string &why) {
    return Error(ErrorCode::kMismatchedAlignment, why);
  };
  for (const AlignOp &op : a.ops) {
    const bool has_ref = op.kind != AlignOpKind::kIns;
    const bool has_hyp = op.kind != AlignOpKind::kDel;
    if (has_ref) {
      if (op.ref != next_ref || op.ref >= static_cast<int>(n))
        throw fail(fmt::format("reference index {} out of order or range", op.ref));
      ++next_ref;
    }
    if (has_hyp) {
      if (op.hyp != next_hyp || op.hyp >= static_cast<int>(m))
        throw fail(fmt::format("hypothesis index {} out of order or range", op.hyp));
      ++next_hyp;
    }
  }
  if (next_ref != static_cast<int>(n) || next_hyp != static_cast<int>(m))
    throw fail("alignment does not cover every word");
}

}  // namespace

std::pair<int64_t, int64_t> AlignmentCost(const Alignment &a,
                                          std::span<const Word> ref,
                                          std::span<const Word> hyp) {
  CheckAlignment(a, ref.size(), hyp.size());
  int64_t edits = 0, attr = 0;
  for (const AlignOp &op : a.ops) {
    if (op.kind == AlignOpKind::kIns || op.kind == AlignOpKind::kDel) {
      ++edits;
      continue;
    }
    if (ref[op.ref].text != hyp[op.hyp].text) ++edits;
    if (ref[op.ref].role != hyp[op.hyp].role) ++attr;
  }
  return {edits, attr};
}

RoleErrorCounts ClassifyErrors(const Alignment &a, std::span<const Word> ref,
                               std::span<const Word> hyp) {
  CheckAlignment(a, ref.size(), hyp.size());
  RoleErrorCounts counts;
  for (const Word &w : ref) ++counts[w.role].nref;
  for (const AlignOp &op : a.ops) {
    switch (op.kind) {
      case AlignOpKind::kDel:
        ++counts[ref[op.ref].role].del;
        break;
      case AlignOpKind::kIns:
        ++counts[hyp[op.hyp].role].ins;
        break;
      case AlignOpKind::kSub:
      case AlignOpKind::kMatch: {
        const Word &r = ref[op.ref];
        const Word &h = hyp[op.hyp];
        if (r.text != h.text) ++counts[r.role].sub;
        if (r.role != h.role) ++counts[r.role].attr;
        break;
      }
    }
  }
  return counts;
}

Ratio Ratio::Of(int64_t num, int64_t den) {
  if (den <= 0) throw Error(ErrorCode::kInvalidInput, "ratio denominator must be positive");
  const int64_t g = std::gcd(num, den);
  return g > 1 ? Ratio{num / g, den / g} : Ratio{num, den};
}

Ratio Ratio::operator+(const Ratio &o) const {
  const int64_t l = std::lcm(den, o.den);
  return Of(num * (l / den) + o.num * (l / o.den), l);
}

ScoreReport Score(const RoleErrorCounts &counts) {
  ScoreReport report;
  int included = 0;
  Ratio sum_mt, sum_wer, sum_aer;
  for (SpeakerRole role : kRoles) {
    const RoleCounts &c = counts[role];
    RoleScore &s = report.roles[RoleIndex(role)];
    s.nref = c.nref;
    if (c.nref <= 0) continue;
    s.included = true;
    s.wer = Ratio::Of(c.ins + c.del + c.sub, c.nref);
    s.aer = Ratio::Of(c.attr, c.nref);
    s.mtwer = Ratio::Of(c.ins + c.del + c.sub + c.attr, c.nref);
    sum_mt = sum_mt + s.mtwer;
    sum_wer = sum_wer + s.wer;
    sum_aer = sum_aer + s.aer;
    ++included;
  }
  if (included == 0)
    throw Error(ErrorCode::kEmptyReference, "reference has no words");
  report.macro_mtwer = Ratio::Of(sum_mt.num, sum_mt.den * included);
  report.macro_wer = Ratio::Of(sum_wer.num, sum_wer.den * included);
  report.macro_aer = Ratio::Of(sum_aer.num, sum_aer.den * included);
  return report;
}

RoleErrorCounts CountErrors(const Transcript &ref, const Transcript &hyp) {
  const std::vector<Word> r = TranscriptWords(ref);
  const std::vector<Word> h = TranscriptWords(hyp);
  return ClassifyErrors(AlignWords(r, h), r, h);
}

RoleErrorCounts CountCorpusErrors(std::span<const TranscriptPair> pairs, int jobs) {
  std::vector<RoleErrorCounts> per_pair(pairs.size());
  internal::ExceptionSlot slot;
  const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic) num_threads(internal::ResolveJobs(jobs))
  for (long i = 0; i < n; ++i) {
    slot.Run([&] { per_pair[i] = CountErrors(pairs[i].first, pairs[i].second); });
  }
  slot.Rethrow();
  RoleErrorCounts total;
  for (const RoleErrorCounts &c : per_pair) total += c;
  return total;
}

RoleErrorCounts CountCorpusErrorsSerial(std::span<const TranscriptPair> pairs) {
  RoleErrorCounts total;
  for (const TranscriptPair &p : pairs) total += CountErrors(p.first, p.second);
  return total;
}

}  // namespace sotkit
