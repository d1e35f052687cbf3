// src/io.cc

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

#include "sotkit/io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace sotkit::io {

using nlohmann::json;

namespace {

Error ParseFailure(size_t line, const std::string &why) {
  return Error(ErrorCode::kParseError, fmt::format("line {}: {}", line, why));
}

// Non-empty, non-comment lines with their 1-based line numbers.
std::vector<std::pair<size_t, std::string>> Lines(std::string_view text) {
  std::vector<std::pair<size_t, std::string>> out;
  size_t lineno = 0, pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++lineno;
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] != '#') out.emplace_back(lineno, line);
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string> SplitCsv(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const size_t b = field.find_first_not_of(" \t");
    const size_t e = field.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool ToDouble(const std::string &s, double &out) {
  if (s.empty()) return false;
  try {
    size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception &) {
    return false;
  }
}

double NeedDouble(const std::string &s, size_t line, std::string_view what) {
  double v;
  if (!ToDouble(s, v)) throw ParseFailure(line, fmt::format("bad {} '{}'", what, s));
  return v;
}

json ParseJson(std::string_view text, size_t line) {
  try {
    return json::parse(text);
  } catch (const json::exception &e) {
    throw ParseFailure(line, e.what());
  }
}

SpeakerRole RoleAt(const std::string &name, size_t line) {
  try {
    return ParseRole(name);
  } catch (const Error &) {
    throw ParseFailure(line, fmt::format("unknown speaker '{}'", name));
  }
}

std::string Escape(const std::string &s) { return json(s).dump(); }

}  // namespace

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::kInvalidInput, fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string &path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::kInvalidInput, fmt::format("cannot write '{}'", path));
  out << content;
}

Transcript ParseTranscriptJsonl(std::string_view text, double session_end) {
  std::vector<Utterance> utts;
  for (const auto &[lineno, line] : Lines(text)) {
    const json obj = ParseJson(line, lineno);
    try {
      Utterance u;
      u.span = {obj.at("start").get<double>(), obj.at("end").get<double>()};
      if (!u.span.valid()) throw ParseFailure(lineno, "invalid start/end");
      u.role = RoleAt(obj.at("speaker").get<std::string>(), lineno);
      std::istringstream words(obj.at("text").get<std::string>());
      for (std::string w; words >> w;) u.words.push_back(w);
      utts.push_back(std::move(u));
    } catch (const json::exception &e) {
      throw ParseFailure(lineno, e.what());
    }
  }
  std::stable_sort(utts.begin(), utts.end(), [](const Utterance &a, const Utterance &b) {
    return a.span.start < b.span.start;
  });
  if (session_end < 0.0) return Transcript(std::move(utts));
  return Transcript(std::move(utts), {0.0, session_end});
}

std::string FormatTranscriptJsonl(const Transcript &transcript) {
  std::string out;
  for (const Utterance &u : transcript.utterances())
    out += fmt::format("{{\"start\": {:.3f}, \"end\": {:.3f}, \"speaker\": \"{}\", "
                       "\"text\": {}}}\n",
                       u.span.start, u.span.end, RoleName(u.role), Escape(u.Text()));
  return out;
}

std::vector<Word> ParseWordsJsonl(std::string_view text, bool need_role) {
  std::vector<Word> words;
  for (const auto &[lineno, line] : Lines(text)) {
    const json obj = ParseJson(line, lineno);
    try {
      Word w;
      w.span = {obj.at("start").get<double>(), obj.at("end").get<double>()};
      if (!w.span.valid()) throw ParseFailure(lineno, "invalid start/end");
      if (need_role || obj.contains("speaker"))
        w.role = RoleAt(obj.at("speaker").get<std::string>(), lineno);
      w.text = obj.at("text").get<std::string>();
      if (w.text.empty() ||
          std::any_of(w.text.begin(), w.text.end(),
                      [](unsigned char c) { return std::isspace(c); }))
        throw ParseFailure(lineno, "a word must be non-empty without whitespace");
      words.push_back(std::move(w));
    } catch (const json::exception &e) {
      throw ParseFailure(lineno, e.what());
    }
  }
  return words;
}

std::string FormatWordsJsonl(const std::vector<Word> &words) {
  std::string out;
  for (const Word &w : words)
    out += fmt::format("{{\"start\": {:.3f}, \"end\": {:.3f}, \"speaker\": \"{}\", "
                       "\"text\": {}}}\n",
                       w.span.start, w.span.end, RoleName(w.role), Escape(w.text));
  return out;
}

TokenStream ParseTokenJson(std::string_view text) {
  const json doc = ParseJson(text, 1);
  TokenStream stream;
  const json *tokens = &doc;
  if (doc.is_object()) {
    if (!doc.contains("tokens")) throw ParseFailure(1, "missing \"tokens\"");
    tokens = &doc.at("tokens");
    if (doc.contains("truncated")) stream.truncated = doc.at("truncated").get<bool>();
  }
  if (!tokens->is_array()) throw ParseFailure(1, "\"tokens\" must be an array");
  try {
    for (const json &t : *tokens) {
      const std::string cls = t.at("class").get<std::string>();
      if (cls == "header") {
        stream.tokens.push_back(Token::Header());
      } else if (cls == "ts") {
        const int v = t.at("value").get<int>();
        if (v < 0 || v > kMaxTimestamp)
          throw ParseFailure(1, fmt::format("timestamp value {} outside 0..1500", v));
        stream.tokens.push_back(Token::Timestamp(v));
      } else if (cls == "child") {
        stream.tokens.push_back(Token::Speaker(SpeakerRole::kChild));
      } else if (cls == "adult") {
        stream.tokens.push_back(Token::Speaker(SpeakerRole::kAdult));
      } else if (cls == "text") {
        stream.tokens.push_back(Token::Text(t.at("word").get<std::string>()));
      } else if (cls == "eot") {
        stream.tokens.push_back(Token::Eot());
      } else {
        throw ParseFailure(1, fmt::format("unknown token class '{}'", cls));
      }
    }
  } catch (const json::exception &e) {
    throw ParseFailure(1, e.what());
  }
  return stream;
}

std::string FormatTokenJson(const TokenStream &stream) {
  std::string out = "{\"tokens\": [";
  for (size_t i = 0; i < stream.tokens.size(); ++i) {
    const Token &t = stream.tokens[i];
    if (i > 0) out += ", ";
    switch (t.kind) {
      case TokenKind::kHeader: out += "{\"class\": \"header\"}"; break;
      case TokenKind::kTimestamp:
        out += fmt::format("{{\"class\": \"ts\", \"value\": {}}}", t.value);
        break;
      case TokenKind::kSpeakerChild: out += "{\"class\": \"child\"}"; break;
      case TokenKind::kSpeakerAdult: out += "{\"class\": \"adult\"}"; break;
      case TokenKind::kText:
        out += fmt::format("{{\"class\": \"text\", \"word\": {}}}", Escape(t.word));
        break;
      case TokenKind::kEndOfTranscript: out += "{\"class\": \"eot\"}"; break;
    }
  }
  out += fmt::format("], \"truncated\": {}}}\n", stream.truncated ? "true" : "false");
  return out;
}

std::map<std::string, std::vector<RoleSegment>> ParseRttm(std::string_view text) {
  std::map<std::string, std::vector<RoleSegment>> out;
  for (const auto &[lineno, line] : Lines(text)) {
    std::istringstream in(line);
    std::vector<std::string> f;
    for (std::string tok; in >> tok;) f.push_back(tok);
    if (f.size() < 8) throw ParseFailure(lineno, "RTTM lines need at least 8 fields");
    if (f[0] != "SPEAKER") continue;
    const double beg = NeedDouble(f[3], lineno, "onset");
    const double dur = NeedDouble(f[4], lineno, "duration");
    if (beg < 0.0 || dur < 0.0) throw ParseFailure(lineno, "negative onset or duration");
    out[f[1]].push_back({RoleAt(f[7], lineno), {beg, beg + dur}});
  }
  return out;
}

std::string FormatRttm(const std::string &uri, const std::vector<RoleSegment> &segments) {
  std::string out;
  for (const RoleSegment &s : segments)
    out += fmt::format("SPEAKER {} 1 {:.3f} {:.3f} <NA> <NA> {} <NA> <NA>\n", uri,
                       s.span.start, s.span.duration(), RoleName(s.role));
  return out;
}

FrameProbSequence ParseFrameCsv(std::string_view text) {
  std::vector<double> times;
  std::vector<size_t> linenos;
  std::vector<FrameProbs> probs;
  for (const auto &[lineno, line] : Lines(text)) {
    const std::vector<std::string> f = SplitCsv(line);
    double t;
    if (!ToDouble(f.empty() ? "" : f[0], t)) {
      if (times.empty() && !f.empty() && f[0] == "t") continue;  // header
      throw ParseFailure(lineno, "expected t,p_child,p_adult,p_sil");
    }
    if (f.size() != 4) throw ParseFailure(lineno, "expected 4 columns");
    times.push_back(t);
    linenos.push_back(lineno);
    probs.push_back({NeedDouble(f[1], lineno, "p_child"),
                     NeedDouble(f[2], lineno, "p_adult"),
                     NeedDouble(f[3], lineno, "p_sil")});
  }
  double period = 0.02;
  if (times.size() >= 2) period = times[1] - times[0];
  if (!(period > 0.0)) throw ParseFailure(linenos[1], "frame times must increase");
  for (size_t n = 0; n < times.size(); ++n)
    if (std::fabs(times[n] - n * period) > 1e-6 * std::max(1.0, n * period))
      throw ParseFailure(linenos[n], fmt::format("frame {} is off the {} s grid from 0", n,
                                            period));
  try {
    return FrameProbSequence(period, std::move(probs));
  } catch (const Error &e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

LabeledVectors ParseEmbeddingCsv(std::string_view text) {
  LabeledVectors out;
  for (const auto &[lineno, line] : Lines(text)) {
    const std::vector<std::string> f = SplitCsv(line);
    if (f.size() >= 2 && f[0] == "id" && f[1] == "label" && out.size() == 0) continue;
    if (f.size() < 3) throw ParseFailure(lineno, "expected id,label,v0,...");
    out.labels.push_back(RoleAt(f[1], lineno));
    std::vector<double> v;
    for (size_t i = 2; i < f.size(); ++i) v.push_back(NeedDouble(f[i], lineno, "value"));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

std::map<std::string, MeasureSet> ParseMeasuresCsv(std::string_view text) {
  std::map<std::string, MeasureSet> out;
  for (const auto &[lineno, line] : Lines(text)) {
    const std::vector<std::string> f = SplitCsv(line);
    if (!f.empty() && f[0] == "child_id") continue;
    if (f.size() != 1 + kMeasures.size())
      throw ParseFailure(lineno, "expected child_id and five measures");
    MeasureSet m;
    m.words_per_minute = NeedDouble(f[1], lineno, "measure");
    m.utterances_per_minute = NeedDouble(f[2], lineno, "measure");
    m.mean_words_per_utterance = NeedDouble(f[3], lineno, "measure");
    m.mean_utterance_duration_s = NeedDouble(f[4], lineno, "measure");
    m.speaking_rate = NeedDouble(f[5], lineno, "measure");
    if (!out.emplace(f[0], m).second)
      throw ParseFailure(lineno, fmt::format("duplicate child '{}'", f[0]));
  }
  return out;
}

std::string FormatMeasuresCsv(const std::map<std::string, MeasureSet> &measures) {
  std::string out = "child_id";
  for (Measure m : kMeasures) out += fmt::format(",{}", MeasureKey(m));
  out += '\n';
  for (const auto &[child, set] : measures) {
    out += child;
    for (Measure m : kMeasures) out += fmt::format(",{:.4f}", set.Get(m));
    out += '\n';
  }
  return out;
}

VocabularyMap ParseVocabularyJson(std::string_view text) {
  const json doc = ParseJson(text, 1);
  VocabularyMap v;
  try {
    v.header_ids = doc.at("header_ids").get<std::vector<int>>();
    v.child_id = doc.at("child_id").get<int>();
    v.adult_id = doc.at("adult_id").get<int>();
    v.eot_id = doc.at("eot_id").get<int>();
    v.timestamp_id_base = doc.at("timestamp_id_base").get<int>();
    v.vocab_size = doc.at("vocab_size").get<int>();
  } catch (const json::exception &e) {
    throw ParseFailure(1, e.what());
  }
  v.Check();
  return v;
}

TokenLogProbs ParseTokenProbCsv(std::string_view text) {
  TokenLogProbs out;
  for (const auto &[lineno, line] : Lines(text)) {
    const std::vector<std::string> f = SplitCsv(line);
    if (f.size() < 2) throw ParseFailure(lineno, "expected target,p_0,...");
    double target;
    if (!ToDouble(f[0], target) || target != std::floor(target)) {
      if (out.rows.empty() && f[0] == "target") continue;
      throw ParseFailure(lineno, fmt::format("bad target '{}'", f[0]));
    }
    out.targets.push_back(static_cast<int>(target));
    std::vector<double> row;
    for (size_t i = 1; i < f.size(); ++i)
      row.push_back(std::log(NeedDouble(f[i], lineno, "probability")));
    out.rows.push_back(std::move(row));
  }
  return out;
}

FrameLogProbs ParseFrameLabelCsv(std::string_view text) {
  FrameLogProbs out;
  for (const auto &[lineno, line] : Lines(text)) {
    const std::vector<std::string> f = SplitCsv(line);
    if (!f.empty() && f[0] == "label" && out.rows.empty()) continue;
    if (f.size() != 4) throw ParseFailure(lineno, "expected label,p_child,p_adult,p_sil");
    int label;
    if (f[0] == "child") label = 0;
    else if (f[0] == "adult") label = 1;
    else if (f[0] == "sil") label = 2;
    else throw ParseFailure(lineno, fmt::format("unknown label '{}'", f[0]));
    out.labels.push_back(label);
    out.rows.push_back({std::log(NeedDouble(f[1], lineno, "probability")),
                        std::log(NeedDouble(f[2], lineno, "probability")),
                        std::log(NeedDouble(f[3], lineno, "probability"))});
  }
  return out;
}

}  // namespace sotkit::io
