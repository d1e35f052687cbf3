// src/decode_sim.cc

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

#include "sotkit/decode_sim.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "parallel.h"

namespace sotkit {

uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void SimConfig::Check() const {
  auto prob = [](double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("{} must lie in [0, 1], got {}", name, p));
  };
  prob(p_drop_speaker, "p_drop_speaker");
  prob(p_drop_timestamp, "p_drop_timestamp");
  prob(p_loop, "p_loop");
  if (n_utterances < 0)
    throw Error(ErrorCode::kInvalidInput, "n_utterances must be non-negative");
  if (vocab.empty()) throw Error(ErrorCode::kInvalidInput, "vocabulary is empty");
  if (!(silence_gap_range.first > 0.0 &&
        silence_gap_range.first <= silence_gap_range.second))
    throw Error(ErrorCode::kInvalidInput, "silence gaps must be positive and ordered");
  if (!(words_per_utterance.first >= 1 &&
        words_per_utterance.first <= words_per_utterance.second))
    throw Error(ErrorCode::kInvalidInput, "invalid words-per-utterance range");
  if (!(word_duration.first > 0.0 && word_duration.first <= word_duration.second))
    throw Error(ErrorCode::kInvalidInput, "invalid word duration range");
}

namespace {

int Ticks(double seconds) {
  return std::max(1, static_cast<int>(std::lround(seconds / kTimestampStep)));
}

}  // namespace

SynthDialogue SynthesizeDialogue(const SimConfig &config) {
  config.Check();
  SimRng rng(config.seed);
  std::vector<Utterance> utts;
  std::vector<std::pair<int, int>> ticks;  // utterance spans in grid units
  int cursor = Ticks(rng.Uniform(config.silence_gap_range.first,
                                 config.silence_gap_range.second));
  size_t tokens = 2;  // header and end of transcript
  SpeakerRole role = SpeakerRole::kChild;
  for (int k = 0; k < config.n_utterances; ++k) {
    const int n_words = rng.UniformInt(config.words_per_utterance.first,
                                       config.words_per_utterance.second);
    std::vector<std::string> words;
    double dur = 0.0;
    for (int w = 0; w < n_words; ++w) {
      words.push_back(config.vocab[static_cast<size_t>(
          rng.UniformInt(0, static_cast<int>(config.vocab.size()) - 1))]);
      dur += rng.Uniform(config.word_duration.first, config.word_duration.second);
    }
    const int gap = Ticks(rng.Uniform(config.silence_gap_range.first,
                                      config.silence_gap_range.second));
    const int start = cursor, end = cursor + Ticks(dur);
    if (end > kMaxTimestamp || tokens + words.size() + 3 > kMaxDecodeTokens) break;
    utts.push_back(Utterance{role, {GridTime(start), GridTime(end)}, std::move(words)});
    ticks.emplace_back(start, end);
    tokens += utts.back().words.size() + 3;
    cursor = end + gap;
    role = OtherRole(role);
  }
  const int session_end = std::min(cursor, kMaxTimestamp);

  std::vector<FrameProbs> probs(static_cast<size_t>(session_end),
                                FrameProbs{0.05, 0.05, 0.9});
  for (size_t u = 0; u < utts.size(); ++u) {
    const FrameProbs speech = utts[u].role == SpeakerRole::kChild
                                  ? FrameProbs{0.9, 0.05, 0.05}
                                  : FrameProbs{0.05, 0.9, 0.05};
    for (int n = ticks[u].first; n < ticks[u].second && n < session_end; ++n)
      probs[static_cast<size_t>(n)] = speech;
  }
  return SynthDialogue{
      Transcript(std::move(utts), {0.0, GridTime(session_end)}),
      FrameProbSequence(kTimestampStep, std::move(probs))};
}

MockScorer::MockScorer(TokenStream truth, const SimConfig &config, uint64_t seed)
    : truth_(std::move(truth.tokens)), vocab_(config.vocab) {
  config.Check();
  SimRng rng(seed);
  dropped_.assign(truth_.size(), 0);
  loop_start_.assign(truth_.size(), 0);
  for (size_t i = 0; i < truth_.size(); ++i) {
    const Token &tok = truth_[i];
    if (tok.is_speaker()) {
      dropped_[i] = rng.Bernoulli(config.p_drop_speaker);
      if (rng.Bernoulli(config.p_loop) && i + 1 < truth_.size() &&
          truth_[i + 1].kind == TokenKind::kText)
        loop_start_[i + 1] = 1;
    } else if (tok.kind == TokenKind::kTimestamp) {
      dropped_[i] = rng.Bernoulli(config.p_drop_timestamp);
    }
  }
  for (const Token &tok : truth_)
    if (tok.kind == TokenKind::kText &&
        std::find(vocab_.begin(), vocab_.end(), tok.word) == vocab_.end())
      vocab_.push_back(tok.word);
}

size_t MockScorer::NextKept(size_t from) const {
  while (from < truth_.size() && dropped_[from]) ++from;
  return from;
}

void MockScorer::Observe(const Token &emitted) {
  if (looping_) return;
  const size_t next = NextKept(cursor_);
  size_t matched;
  if (next < truth_.size() && emitted == truth_[next])
    matched = next;
  else if (cursor_ < truth_.size() && emitted == truth_[cursor_])
    matched = cursor_;
  else
    return;  // forced or stray token; keep waiting for the intended one
  cursor_ = matched + 1;
  if (loop_start_[matched]) {
    looping_ = true;
    loop_word_ = emitted.word;
  }
}

void MockScorer::Score(std::span<const Token> prefix,
                       std::span<const Token> candidates,
                       std::span<double> scores) {
  for (; seen_ < prefix.size(); ++seen_) Observe(prefix[seen_]);
  if (looping_) {
    for (size_t i = 0; i < candidates.size(); ++i)
      scores[i] = candidates[i].kind == TokenKind::kText &&
                          candidates[i].word == loop_word_
                      ? 1.0
                      : 0.0;
    return;
  }
  const size_t next = NextKept(cursor_);
  const Token intended = next < truth_.size() ? truth_[next] : Token::Eot();
  const Token *residual =
      cursor_ < next && cursor_ < truth_.size() ? &truth_[cursor_] : nullptr;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const Token &c = candidates[i];
    if (c.kind == intended.kind && c == intended)
      scores[i] = 1.0;
    else if (residual && c.kind == residual->kind && c == *residual)
      scores[i] = 0.1;
    else
      scores[i] = 0.0;
  }
}

ConditionCounts &ConditionCounts::operator+=(const ConditionCounts &o) {
  miss_speaker += o.miss_speaker;
  miss_timestamp += o.miss_timestamp;
  miss_both += o.miss_both;
  loops += o.loops;
  utterances += o.utterances;
  decodes += o.decodes;
  suppression_violations += o.suppression_violations;
  return *this;
}

namespace {
double Rate(long num, long den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

ConditionCounts Tally(const TokenStream &stream, const SuppressionSet &supp) {
  const StructuralErrorReport r = ValidateStructure(stream);
  ConditionCounts c;
  c.miss_speaker = r.miss_speaker;
  c.miss_timestamp = r.miss_timestamp;
  c.miss_both = r.miss_both;
  c.loops = r.infinite_loop ? 1 : 0;
  c.utterances = r.utterances;
  c.decodes = 1;
  for (const Token &tok : stream.tokens)
    if (tok.kind == TokenKind::kTimestamp && supp.Suppresses(tok.value))
      ++c.suppression_violations;
  return c;
}
}  // namespace

double ConditionCounts::miss_speaker_rate() const { return Rate(miss_speaker, utterances); }
double ConditionCounts::miss_timestamp_rate() const { return Rate(miss_timestamp, utterances); }
double ConditionCounts::miss_both_rate() const { return Rate(miss_both, utterances); }
double ConditionCounts::loop_rate() const { return Rate(loops, decodes); }

ErrorStudyResult RunTrial(const SimConfig &config, uint64_t trial_seed) {
  SimConfig c = config;
  c.seed = trial_seed;
  const SynthDialogue dialogue = SynthesizeDialogue(c);
  const TokenStream truth = SerializeTranscript(dialogue.transcript);
  const SuppressionSet supp = SilenceRegions(dialogue.frames);
  const uint64_t scorer_seed = MixSeed(trial_seed, 1);

  ErrorStudyResult result;
  MockScorer free_scorer(truth, c, scorer_seed);
  result.free = Tally(RunUnconstrainedDecode(free_scorer), supp);
  MockScorer forced_scorer(truth, c, scorer_seed);
  result.forced = Tally(RunForcedDecode(forced_scorer, supp), supp);
  return result;
}

ErrorStudyResult RunErrorStudy(const SimConfig &config, int n_trials, int jobs) {
  config.Check();
  if (n_trials < 1) throw Error(ErrorCode::kInvalidInput, "n_trials must be >= 1");
  std::vector<ErrorStudyResult> trials(static_cast<size_t>(n_trials));
  internal::ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic) num_threads(internal::ResolveJobs(jobs))
  for (int t = 0; t < n_trials; ++t)
    slot.Run([&] {
      trials[static_cast<size_t>(t)] =
          RunTrial(config, MixSeed(config.seed, static_cast<uint64_t>(t)));
    });
  slot.Rethrow();
  ErrorStudyResult total;
  for (const ErrorStudyResult &r : trials) {
    total.free += r.free;
    total.forced += r.forced;
  }
  return total;
}

ErrorStudyResult RunErrorStudySerial(const SimConfig &config, int n_trials) {
  config.Check();
  if (n_trials < 1) throw Error(ErrorCode::kInvalidInput, "n_trials must be >= 1");
  ErrorStudyResult total;
  for (int t = 0; t < n_trials; ++t) {
    const ErrorStudyResult r =
        RunTrial(config, MixSeed(config.seed, static_cast<uint64_t>(t)));
    total.free += r.free;
    total.forced += r.forced;
  }
  return total;
}

}  // namespace sotkit
