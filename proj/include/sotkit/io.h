// include/sotkit/io.h

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

// Readers and writers for the on-disk formats.  Readers take the text of a
// file and throw Error(kParseError) with a line number on malformed input.
//
//   transcript JSONL  {"start": 0.5, "end": 1.24, "speaker": "child", "text": "hi there"}
//   token JSON        {"tokens": [{"class": "header"}, {"class": "ts", "value": 25},
//                      {"class": "child"}, {"class": "text", "word": "hi"}, ...,
//                      {"class": "eot"}], "truncated": false}
//   RTTM              SPEAKER <uri> 1 <tbeg> <tdur> <NA> <NA> <child|adult> <NA> <NA>
//   frame CSV         t,p_child,p_adult,p_sil
//   embedding CSV     id,label,v0,...,vD
//   measures CSV      child_id,words_per_minute,...,speaking_rate_wpm
//   vocabulary JSON   {"header_ids": [...], "child_id": n, "adult_id": n,
//                      "eot_id": n, "timestamp_id_base": n, "vocab_size": n}

#ifndef SOTKIT_IO_H_
#define SOTKIT_IO_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sotkit/analysis.h"
#include "sotkit/core.h"
#include "sotkit/decode_fsm.h"
#include "sotkit/diarization.h"
#include "sotkit/losses.h"
#include "sotkit/sessions.h"
#include "sotkit/sot.h"

namespace sotkit::io {

std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view content);

/// Utterances are sorted by start time.  The session span is [0, last end]
/// unless `session_end` is given.
Transcript ParseTranscriptJsonl(std::string_view text, double session_end = -1.0);
std::string FormatTranscriptJsonl(const Transcript &transcript);

/// One word per line; "speaker" may be omitted when `need_role` is false (the
/// role then defaults to child).  Order is preserved.
std::vector<Word> ParseWordsJsonl(std::string_view text, bool need_role = true);
std::string FormatWordsJsonl(const std::vector<Word> &words);

TokenStream ParseTokenJson(std::string_view text);
std::string FormatTokenJson(const TokenStream &stream);

/// Segments grouped by recording id, in file order within a recording.
std::map<std::string, std::vector<RoleSegment>> ParseRttm(std::string_view text);
std::string FormatRttm(const std::string &uri, const std::vector<RoleSegment> &segments);

/// Frame period comes from the spacing of `t` (0.02 s for a single row).
FrameProbSequence ParseFrameCsv(std::string_view text);

LabeledVectors ParseEmbeddingCsv(std::string_view text);

std::map<std::string, MeasureSet> ParseMeasuresCsv(std::string_view text);
std::string FormatMeasuresCsv(const std::map<std::string, MeasureSet> &measures);

VocabularyMap ParseVocabularyJson(std::string_view text);

/// Rows "target,p_0,...,p_{V-1}" of probabilities (not logs).
TokenLogProbs ParseTokenProbCsv(std::string_view text);
/// Rows "label,p_child,p_adult,p_sil" with label child|adult|sil.
FrameLogProbs ParseFrameLabelCsv(std::string_view text);

}  // namespace sotkit::io

#endif  // SOTKIT_IO_H_
