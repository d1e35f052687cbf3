// src/sessions.cc

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

#include "sotkit/sessions.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "sotkit/analysis.h"

namespace sotkit {

std::vector<Word> CleanWords(std::span<const Word> words, double max_dur) {
  std::vector<Word> out;
  for (const Word &w : words)
    if (w.span.duration() <= max_dur + kTimeEps) out.push_back(w);
  return out;
}

Transcript MergeWordsToUtterances(std::span<const Word> words, double gap) {
  std::vector<Utterance> utts;
  for (size_t i = 0; i < words.size(); ++i) {
    const Word &w = words[i];
    if (i > 0 && w.span.start < words[i - 1].span.start)
      throw Error(ErrorCode::kInvalidInput, "words must be time-ordered");
    if (!utts.empty() && utts.back().role == w.role &&
        w.span.start - utts.back().span.end < gap - kTimeEps) {
      utts.back().span.end = std::max(utts.back().span.end, w.span.end);
      utts.back().words.push_back(w.text);
      continue;
    }
    utts.push_back(Utterance{w.role, w.span, {w.text}});
  }
  return Transcript(std::move(utts));
}

std::vector<Word> ExplodeUtterances(const Transcript &transcript) {
  std::vector<Word> out;
  for (const Utterance &u : transcript.utterances()) {
    const size_t n = u.words.size();
    const double step = n == 0 ? 0.0 : u.span.duration() / static_cast<double>(n);
    for (size_t k = 0; k < n; ++k) {
      const double start = u.span.start + step * static_cast<double>(k);
      const double end = k + 1 == n ? u.span.end : start + step;
      out.push_back(Word{u.words[k], {start, end}, u.role});
    }
  }
  return out;
}

namespace {

Segment MakeSegment(const std::vector<const Utterance *> &utts, double begin,
                    double end) {
  std::vector<Utterance> rel;
  rel.reserve(utts.size());
  for (const Utterance *u : utts) {
    Utterance r = *u;
    r.span.start = std::max(0.0, u->span.start - begin);
    r.span.end = std::max(r.span.start, u->span.end - begin);
    rel.push_back(std::move(r));
  }
  return Segment{{begin, end}, Transcript(std::move(rel), {0.0, end - begin})};
}

}  // namespace

WindowResult WindowSegments(const Transcript &transcript, double max_dur) {
  if (!(max_dur > 0.0))
    throw Error(ErrorCode::kInvalidInput, "window length must be positive");
  WindowResult result;
  std::vector<const Utterance *> utts;
  const auto &all = transcript.utterances();
  for (size_t i = 0; i < all.size(); ++i) {
    if (all[i].span.duration() > max_dur + kTimeEps)
      result.oversized.push_back(i);
    else
      utts.push_back(&all[i]);
  }
  const double session_end = transcript.session_span().end;
  double boundary = transcript.session_span().start;
  size_t i = 0;
  while (i < utts.size()) {
    if (utts[i]->span.end - boundary > max_dur + kTimeEps)
      boundary = utts[i]->span.end - max_dur;
    size_t j = i;
    while (j < utts.size() && utts[j]->span.end - boundary <= max_dur + kTimeEps)
      ++j;
    std::vector<const Utterance *> window(utts.begin() + static_cast<long>(i),
                                          utts.begin() + static_cast<long>(j));
    double end, next;
    if (j < utts.size()) {
      next = 0.5 * (utts[j - 1]->span.end + utts[j]->span.start);
      end = std::min(next, boundary + max_dur);
    } else {
      end = std::max(std::min(session_end, boundary + max_dur),
                     utts[j - 1]->span.end);
      next = end;
    }
    result.segments.push_back(MakeSegment(window, boundary, end));
    boundary = next;
    i = j;
  }
  return result;
}

std::string_view MeasureKey(Measure m) {
  switch (m) {
    case Measure::kWordsPerMinute: return "words_per_minute";
    case Measure::kUtterancesPerMinute: return "utterances_per_minute";
    case Measure::kMeanWordsPerUtterance: return "mean_words_per_utterance";
    case Measure::kMeanUtteranceDuration: return "mean_utterance_duration_s";
    case Measure::kSpeakingRate: return "speaking_rate_wpm";
  }
  return "";
}

std::string_view MeasureLabel(Measure m) {
  switch (m) {
    case Measure::kWordsPerMinute: return "Words per minute";
    case Measure::kUtterancesPerMinute: return "Utterances per minute";
    case Measure::kMeanWordsPerUtterance: return "Mean words per utterance";
    case Measure::kMeanUtteranceDuration: return "Mean utterance duration (s)";
    case Measure::kSpeakingRate: return "Speaking rate (words/min of speech)";
  }
  return "";
}

double MeasureSet::Get(Measure m) const {
  switch (m) {
    case Measure::kWordsPerMinute: return words_per_minute;
    case Measure::kUtterancesPerMinute: return utterances_per_minute;
    case Measure::kMeanWordsPerUtterance: return mean_words_per_utterance;
    case Measure::kMeanUtteranceDuration: return mean_utterance_duration_s;
    case Measure::kSpeakingRate: return speaking_rate;
  }
  return 0.0;
}

MeasureSet SpeechMeasures(std::span<const Segment> segments, SpeakerRole role) {
  MeasureSet m;
  for (const Segment &seg : segments) {
    m.session_seconds += seg.span.duration();
    for (const Utterance &u : seg.transcript.utterances()) {
      if (u.role != role) continue;
      ++m.utterances;
      m.total_words += static_cast<long>(u.words.size());
      m.speaking_seconds += u.span.duration();
    }
  }
  if (m.utterances == 0)
    throw Error(ErrorCode::kNoSpeech,
                fmt::format("no {} utterances", RoleName(role)));
  if (!(m.speaking_seconds > 0.0) || !(m.session_seconds > 0.0))
    throw Error(ErrorCode::kNoSpeech,
                fmt::format("{} speech has zero duration", RoleName(role)));
  const double session_min = m.session_seconds / 60.0;
  const double speaking_min = m.speaking_seconds / 60.0;
  const double words = static_cast<double>(m.total_words);
  const double utts = static_cast<double>(m.utterances);
  m.words_per_minute = words / session_min;
  m.utterances_per_minute = utts / session_min;
  m.mean_words_per_utterance = words / utts;
  m.mean_utterance_duration_s = m.speaking_seconds / utts;
  m.speaking_rate = words / speaking_min;
  return m;
}

std::vector<AgreementRow> Agreement(const std::map<std::string, MeasureSet> &gt,
                                    const std::map<std::string, MeasureSet> &pred) {
  std::vector<const MeasureSet *> g, p;
  for (const auto &[child, set] : gt) {
    auto it = pred.find(child);
    if (it == pred.end()) continue;
    g.push_back(&set);
    p.push_back(&it->second);
  }
  if (g.size() < 2)
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("agreement needs at least 2 shared children, got {}",
                            g.size()));
  std::vector<AgreementRow> rows;
  for (Measure m : kMeasures) {
    std::vector<double> x, y;
    for (size_t i = 0; i < g.size(); ++i) {
      x.push_back(g[i]->Get(m));
      y.push_back(p[i]->Get(m));
    }
    AgreementRow row{m, 0.0, 0.0, 0.0};
    for (size_t i = 0; i < x.size(); ++i) {
      row.gt_mean += x[i];
      row.pred_mean += y[i];
    }
    row.gt_mean /= static_cast<double>(x.size());
    row.pred_mean /= static_cast<double>(y.size());
    try {
      row.pcc = Pearson(x, y);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kZeroVariance) throw;
      row.pcc = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sotkit
