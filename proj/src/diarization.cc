// src/diarization.cc

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

#include "sotkit/diarization.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace sotkit {

namespace {
constexpr double kProbFloor = 1e-10;
constexpr double kSumTolerance = 1e-6;
}  // namespace

FrameProbSequence::FrameProbSequence(double frame_period,
                                     std::vector<FrameProbs> probs)
    : frame_period_(frame_period), probs_(std::move(probs)) {
  if (!(frame_period_ > 0.0))
    throw Error(ErrorCode::kInvalidInput, "frame period must be positive");
  for (size_t n = 0; n < probs_.size(); ++n) {
    const FrameProbs &p = probs_[n];
    if (p.child < 0.0 || p.adult < 0.0 || p.silence < 0.0 ||
        std::fabs(p.child + p.adult + p.silence - 1.0) > kSumTolerance)
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("frame {} is not a probability triple", n));
  }
}

SuppressionSet SilenceRegions(const FrameProbSequence &frames, double threshold,
                              double shrink) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw Error(ErrorCode::kInvalidInput, "threshold must lie in (0, 1)");
  if (!(shrink >= 0.0))
    throw Error(ErrorCode::kInvalidInput, "shrink must be non-negative");
  const auto &probs = frames.probs();
  const double period = frames.frame_period();
  std::vector<TimeInterval> regions;
  size_t n = 0;
  while (n < probs.size()) {
    if (probs[n].silence < threshold) {
      ++n;
      continue;
    }
    size_t m = n;
    while (m < probs.size() && probs[m].silence >= threshold) ++m;
    const double a = n * period + shrink;
    const double b = m * period - shrink;
    if (b - a > kTimeEps) regions.push_back({a, b});
    n = m;
  }
  return SuppressionSet(std::move(regions));
}

FrameLabelSequence RasterizeLabels(const Transcript &transcript,
                                   double frame_period, TimeInterval span) {
  if (!(frame_period > 0.0) || !span.valid())
    throw Error(ErrorCode::kInvalidInput, "invalid rasterization grid");
  FrameLabelSequence out;
  out.frame_period = frame_period;
  out.origin = span.start;
  const size_t n_frames =
      static_cast<size_t>(std::llround(span.duration() / frame_period));
  out.labels.assign(n_frames, FrameLabel::kSilence);
  const auto &utts = transcript.utterances();
  size_t u = 0;
  for (size_t n = 0; n < n_frames; ++n) {
    const double centre = span.start + (n + 0.5) * frame_period;
    while (u < utts.size() && utts[u].span.end <= centre) ++u;
    if (u < utts.size() && utts[u].span.start <= centre)
      out.labels[n] = utts[u].role == SpeakerRole::kChild ? FrameLabel::kChild
                                                          : FrameLabel::kAdult;
  }
  return out;
}

std::vector<RoleSegment> LabelsToSegments(const FrameLabelSequence &labels) {
  std::vector<RoleSegment> out;
  const auto &l = labels.labels;
  size_t n = 0;
  while (n < l.size()) {
    size_t m = n + 1;
    while (m < l.size() && l[m] == l[n]) ++m;
    if (l[n] != FrameLabel::kSilence) {
      out.push_back({l[n] == FrameLabel::kChild ? SpeakerRole::kChild
                                                : SpeakerRole::kAdult,
                     {labels.origin + n * labels.frame_period,
                      labels.origin + m * labels.frame_period}});
    }
    n = m;
  }
  return out;
}

FrameLabelSequence ArgmaxLabels(const FrameProbSequence &frames) {
  FrameLabelSequence out;
  out.frame_period = frames.frame_period();
  out.labels.reserve(frames.size());
  for (const FrameProbs &p : frames.probs()) {
    if (p.silence >= p.child && p.silence >= p.adult)
      out.labels.push_back(FrameLabel::kSilence);
    else if (p.child >= p.adult)
      out.labels.push_back(FrameLabel::kChild);
    else
      out.labels.push_back(FrameLabel::kAdult);
  }
  return out;
}

std::vector<Word> AttributeWords(const std::vector<TimedText> &words,
                                 const FrameProbSequence &frames) {
  if (frames.size() == 0)
    throw Error(ErrorCode::kInvalidInput, "no frames to attribute words from");
  const double period = frames.frame_period();
  const long last = static_cast<long>(frames.size()) - 1;
  std::vector<Word> out;
  out.reserve(words.size());
  for (const TimedText &w : words) {
    if (!w.span.valid())
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("word '{}' has an invalid span", w.text));
    if (w.span.end > frames.duration() + kTimeEps)
      throw Error(ErrorCode::kOutOfRange,
                  fmt::format("word '{}' ends at {} s, after the last frame ({} s)",
                              w.text, w.span.end, frames.duration()));
    // Frames whose centre lies in [start, end).
    long lo = static_cast<long>(std::ceil(w.span.start / period - 0.5 - kTimeEps));
    long hi = static_cast<long>(std::ceil(w.span.end / period - 0.5 - kTimeEps)) - 1;
    lo = std::max(lo, 0L);
    hi = std::min(hi, last);
    if (lo > hi) {
      const double mid = 0.5 * (w.span.start + w.span.end);
      lo = hi = std::clamp(static_cast<long>(std::floor(mid / period)), 0L, last);
    }
    double child = 0.0, adult = 0.0;
    for (long n = lo; n <= hi; ++n) {
      const FrameProbs &p = frames.probs()[static_cast<size_t>(n)];
      child += std::log(std::max(p.child, kProbFloor));
      adult += std::log(std::max(p.adult, kProbFloor));
    }
    const double count = static_cast<double>(hi - lo + 1);
    const SpeakerRole role = child / count >= adult / count ? SpeakerRole::kChild
                                                            : SpeakerRole::kAdult;
    out.push_back(Word{w.text, w.span, role});
  }
  return out;
}

std::vector<RoleSegment> PostprocessSegments(std::vector<RoleSegment> segments,
                                             double merge_gap, double min_dur) {
  std::vector<RoleSegment> out;
  for (SpeakerRole role : kRoles) {
    std::vector<RoleSegment> mine;
    for (const RoleSegment &s : segments)
      if (s.role == role) mine.push_back(s);
    std::stable_sort(mine.begin(), mine.end(),
                     [](const RoleSegment &a, const RoleSegment &b) {
                       return a.span.start < b.span.start;
                     });
    std::vector<RoleSegment> merged;
    for (const RoleSegment &s : mine) {
      if (!merged.empty() &&
          s.span.start - merged.back().span.end < merge_gap - kTimeEps) {
        merged.back().span.end = std::max(merged.back().span.end, s.span.end);
      } else {
        merged.push_back(s);
      }
    }
    for (const RoleSegment &s : merged)
      if (s.span.duration() >= min_dur - kTimeEps) out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RoleSegment &a, const RoleSegment &b) {
                     if (a.span.start != b.span.start)
                       return a.span.start < b.span.start;
                     return RoleIndex(a.role) < RoleIndex(b.role);
                   });
  return out;
}

}  // namespace sotkit
