// tools/sotkit.cc

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

// Command-line front end.  Exit status: 0 success, 1 data error (JSON
// description on stderr), 2 usage error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sotkit/analysis.h"
#include "sotkit/decode_sim.h"
#include "sotkit/io.h"
#include "sotkit/losses.h"
#include "sotkit/metrics_asr.h"
#include "sotkit/metrics_diar.h"
#include "sotkit/sessions.h"

namespace {

using namespace sotkit;

struct Globals {
  int jobs = 0;
  bool raw = false;
  uint64_t seed = 0;
  std::string output;
};

void Emit(const Globals &g, const std::string &text) {
  if (g.output.empty() || g.output == "-")
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    io::WriteFile(g.output, text);
}

std::string Percent(const Ratio &r) { return fmt::format("{:.1f}", 100.0 * r.value()); }
std::string Percent(double r) { return fmt::format("{:.1f}", 100.0 * r); }

// ".975" style used by correlation tables.
std::string Correlation(double r) {
  if (std::isnan(r)) return "nan";
  std::string s = fmt::format("{:.3f}", r);
  if (s.rfind("0.", 0) == 0) return s.substr(1);
  if (s.rfind("-0.", 0) == 0) return "-" + s.substr(2);
  return s;
}

void Warn(const std::string &kind, const std::string &message) {
  nlohmann::json j = {{"warning", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

// ---- validate / parse / serialize ----

std::string ReportJson(const StructuralErrorReport &r) {
  return fmt::format(
      "{{\"miss_speaker\": {}, \"miss_timestamp\": {}, \"miss_both\": {}, "
      "\"infinite_loop\": {}, \"utterances\": {}}}\n",
      r.miss_speaker, r.miss_timestamp, r.miss_both, r.infinite_loop ? "true" : "false",
      r.utterances);
}

// ---- score-asr ----

std::string ScoreAsrOutput(const RoleErrorCounts &counts, bool raw) {
  const ScoreReport rep = Score(counts);
  auto fmt_ratio = [raw](const Ratio &r) {
    return raw ? fmt::format("{}", r.value()) : Percent(r);
  };
  std::string out = "role,mtWER,WER,AER,NREF\n";
  int64_t nref = 0;
  for (SpeakerRole role : kRoles) {
    const RoleScore &s = rep[role];
    nref += s.nref;
    if (!s.included) {
      out += fmt::format("{},NA,NA,NA,0\n", RoleName(role));
      continue;
    }
    out += fmt::format("{},{},{},{},{}\n", RoleName(role), fmt_ratio(s.mtwer),
                       fmt_ratio(s.wer), fmt_ratio(s.aer), s.nref);
  }
  out += fmt::format("macro,{},{},{},{}\n", fmt_ratio(rep.macro_mtwer),
                     fmt_ratio(rep.macro_wer), fmt_ratio(rep.macro_aer), nref);
  return out;
}

// ---- score-der ----

std::string DerRow(const std::string &uri, const DerBreakdown &b, bool raw) {
  return fmt::format("{},{:.3f},{:.3f},{:.3f},{:.3f},{}\n", uri, b.missed,
                     b.false_alarm, b.confusion, b.total,
                     raw ? fmt::format("{}", b.der()) : Percent(b.der()));
}

// ---- segment ----

std::string SegmentsJsonl(const WindowResult &w) {
  std::string out;
  for (const Segment &seg : w.segments) {
    std::string utts;
    for (const Utterance &u : seg.transcript.utterances()) {
      if (!utts.empty()) utts += ", ";
      utts += fmt::format("{{\"start\": {:.3f}, \"end\": {:.3f}, \"speaker\": \"{}\", "
                          "\"text\": {}}}",
                          u.span.start, u.span.end, RoleName(u.role),
                          nlohmann::json(u.Text()).dump());
    }
    out += fmt::format("{{\"start\": {:.3f}, \"end\": {:.3f}, \"utterances\": [{}]}}\n",
                       seg.span.start, seg.span.end, utts);
  }
  return out;
}

// ---- speech-metrics ----

// "id=path" pairs; repeated ids pool several sessions of one child.
std::map<std::string, std::vector<std::string>> SessionsById(
    const std::vector<std::string> &specs) {
  std::map<std::string, std::vector<std::string>> out;
  for (const std::string &s : specs) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("expected CHILD_ID=PATH, got '{}'", s));
    out[s.substr(0, eq)].push_back(s.substr(eq + 1));
  }
  return out;
}

// ---- agreement ----

std::string AgreementTable(const std::vector<AgreementRow> &rows, size_t n) {
  std::string out = fmt::format("{:<38}{:>10}{:>11}{:>8}\n", "Metric", "G.T. Mean",
                                "Pred Mean", "PCC");
  auto group = [&](const char *title) { out += fmt::format("{}\n", title); };
  for (const AgreementRow &r : rows) {
    if (r.measure == Measure::kWordsPerMinute) group("Speech Quantity");
    if (r.measure == Measure::kMeanWordsPerUtterance) group("Utterance Length");
    if (r.measure == Measure::kSpeakingRate) group("Fluency");
    out += fmt::format("{:<38}{:>10.2f}{:>11.2f}{:>8}\n", MeasureLabel(r.measure),
                       r.gt_mean, r.pred_mean, Correlation(r.pcc));
  }
  out += fmt::format("N={}\n", n);
  return out;
}

// ---- simulate ----

std::string SimulateTable(const ErrorStudyResult &r, bool raw) {
  if (raw) {
    std::string out =
        "condition,miss_speaker,miss_timestamp,miss_both,infinite_loop,utterances,"
        "decodes,suppression_violations\n";
    auto row = [&](const char *name, const ConditionCounts &c) {
      out += fmt::format("{},{},{},{},{},{},{},{}\n", name, c.miss_speaker_rate(),
                         c.miss_timestamp_rate(), c.miss_both_rate(), c.loop_rate(),
                         c.utterances, c.decodes, c.suppression_violations);
    };
    row("free", r.free);
    row("forced", r.forced);
    return out;
  }
  std::string out = fmt::format("{:<16}{:>10}{:>10}\n", "Error Type", "w/o F.D.", "w/ F.D.");
  auto row = [&](const char *name, double a, double b) {
    out += fmt::format("{:<16}{:>10}{:>10}\n", name, Percent(a) + "%", Percent(b) + "%");
  };
  row("Miss Speaker", r.free.miss_speaker_rate(), r.forced.miss_speaker_rate());
  row("Miss Timestamp", r.free.miss_timestamp_rate(), r.forced.miss_timestamp_rate());
  row("Miss Both", r.free.miss_both_rate(), r.forced.miss_both_rate());
  row("Infinite Loop", r.free.loop_rate(), r.forced.loop_rate());
  return out;
}

int Run(int argc, char **argv) {
  CLI::App app{"Toolkit for speaker-attributed child-adult transcripts"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--jobs", g.jobs, "Worker threads (0 = OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--raw", g.raw, "Print raw ratios instead of percentages");
  app.add_option("--seed", g.seed, "Seed for all randomness");
  app.add_option("-o,--output", g.output, "Output file (default stdout)");

  // validate
  std::string tokens_path;
  auto *validate = app.add_subcommand(
      "validate", "Structural error report of a token JSON stream");
  validate->add_option("--tokens", tokens_path, "Token JSON")->required();

  auto *parse = app.add_subcommand("parse", "Token JSON to transcript JSONL");
  parse->add_option("--tokens", tokens_path, "Token JSON")->required();
  std::string report_path;
  parse->add_option("--report", report_path, "Also write the structural report here");

  std::string transcript_path;
  auto *serialize = app.add_subcommand("serialize", "Transcript JSONL to token JSON");
  serialize->add_option("--transcript", transcript_path, "Transcript JSONL")->required();

  // score-asr
  std::vector<std::string> ref_paths, hyp_paths;
  auto *score_asr = app.add_subcommand(
      "score-asr", "mtWER/WER/AER per role; repeated --ref/--hyp pairs are pooled");
  score_asr->add_option("--ref", ref_paths, "Reference transcript JSONL")->required();
  score_asr->add_option("--hyp", hyp_paths, "Hypothesis transcript JSONL")->required();

  // score-der
  std::string ref_rttm, hyp_rttm;
  double collar = 0.0;
  auto *score_der = app.add_subcommand("score-der", "Role DER per recording from RTTM");
  score_der->add_option("--ref", ref_rttm, "Reference RTTM")->required();
  score_der->add_option("--hyp", hyp_rttm, "Hypothesis RTTM")->required();
  score_der->add_option("--collar", collar, "Collar in seconds")
      ->check(CLI::NonNegativeNumber);

  // segment
  std::string words_path;
  double max_word = 2.0, gap = 0.3, window = 30.0;
  auto *segment = app.add_subcommand(
      "segment", "Clean words, merge into utterances and cut 30 s windows");
  auto *seg_words = segment->add_option("--words", words_path, "Word JSONL");
  auto *seg_tr = segment->add_option("--transcript", transcript_path,
                                     "Transcript JSONL (skips word cleanup)");
  seg_words->excludes(seg_tr);
  segment->add_option("--max-word-dur", max_word, "Longest kept word (s)")
      ->check(CLI::PositiveNumber);
  segment->add_option("--gap", gap, "Utterance merge gap (s)")->check(CLI::PositiveNumber);
  segment->add_option("--window", window, "Window length (s)")->check(CLI::PositiveNumber);

  // frames
  std::string probs_path, uri = "rec";
  double period = 0.02, span_end = -1.0, min_dur = 0.2;
  auto *frames = app.add_subcommand(
      "frames",
      "Transcript to frame labels (CSV), or frame probabilities to RTTM segments");
  auto *fr_tr = frames->add_option("--transcript", transcript_path, "Transcript JSONL");
  auto *fr_pr = frames->add_option("--probs", probs_path, "Frame probability CSV");
  fr_tr->excludes(fr_pr);
  frames->add_option("--period", period, "Frame period (s)")->check(CLI::PositiveNumber);
  frames->add_option("--end", span_end, "Span end (s); default session end");
  frames->add_option("--uri", uri, "Recording id for RTTM output");
  frames->add_option("--gap", gap, "Segment merge gap (s)")->check(CLI::NonNegativeNumber);
  frames->add_option("--min-dur", min_dur, "Shortest kept segment (s)")
      ->check(CLI::NonNegativeNumber);

  // suppress
  double threshold = 0.7, shrink = 0.2;
  auto *suppress = app.add_subcommand("suppress", "Silence regions from frame CSV");
  suppress->add_option("--probs", probs_path, "Frame probability CSV")->required();
  suppress->add_option("--threshold", threshold, "Silence probability threshold")
      ->check(CLI::Range(0.0, 1.0));
  suppress->add_option("--shrink", shrink, "Shrink per side (s)")
      ->check(CLI::NonNegativeNumber);

  // attribute
  auto *attribute = app.add_subcommand("attribute", "Assign roles to timed words");
  attribute->add_option("--words", words_path, "Word JSONL (speaker ignored)")->required();
  attribute->add_option("--probs", probs_path, "Frame probability CSV")->required();

  // loss
  std::string token_probs, frame_probs;
  double lambda = 1.0;
  auto *loss = app.add_subcommand("loss", "Cross-entropy losses from CSV tables");
  loss->add_option("--tokens", token_probs, "CSV target,p_0,...,p_{V-1}");
  loss->add_option("--frames", frame_probs, "CSV label,p_child,p_adult,p_sil");
  loss->add_option("--lambda", lambda, "Diarization loss weight");

  // speech-metrics
  std::vector<std::string> session_specs;
  std::string role_name = "child";
  auto *metrics = app.add_subcommand("speech-metrics", "Per-child speech measures CSV");
  metrics->add_option("--session", session_specs, "CHILD_ID=transcript.jsonl (repeatable)")
      ->required();
  metrics->add_option("--role", role_name, "Role to measure")
      ->check(CLI::IsMember({"child", "adult"}));
  metrics->add_option("--window", window, "Window length (s)")->check(CLI::PositiveNumber);

  // agreement
  std::string gt_path, pred_path;
  auto *agreement = app.add_subcommand("agreement", "Compare measure CSVs across children");
  agreement->add_option("--gt", gt_path, "Ground-truth measures CSV")->required();
  agreement->add_option("--pred", pred_path, "Predicted measures CSV")->required();

  // knn
  std::string train_path, test_path;
  int k = 5;
  auto *knn = app.add_subcommand("knn", "kNN probe accuracy under cosine distance");
  knn->add_option("--train", train_path, "Embedding CSV")->required();
  knn->add_option("--test", test_path, "Embedding CSV")->required();
  knn->add_option("-k", k, "Neighbours")->check(CLI::PositiveNumber);

  // simulate
  SimConfig sim;
  int trials = 1000;
  auto *simulate = app.add_subcommand(
      "simulate", "Structural error study with and without forced decoding");
  simulate->add_option("--p-drop-speaker", sim.p_drop_speaker)->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--p-drop-timestamp", sim.p_drop_timestamp)
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--p-loop", sim.p_loop)->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--trials", trials)->check(CLI::PositiveNumber);
  simulate->add_option("--utterances", sim.n_utterances)->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) {
      Emit(g, ReportJson(ValidateStructure(io::ParseTokenJson(io::ReadFile(tokens_path)))));
    } else if (*parse) {
      const ParseResult r = ParseTokenStream(io::ParseTokenJson(io::ReadFile(tokens_path)));
      if (!report_path.empty()) io::WriteFile(report_path, ReportJson(r.report));
      Emit(g, io::FormatTranscriptJsonl(r.transcript));
    } else if (*serialize) {
      Emit(g, io::FormatTokenJson(
                  SerializeTranscript(io::ParseTranscriptJsonl(io::ReadFile(transcript_path)))));
    } else if (*score_asr) {
      if (ref_paths.size() != hyp_paths.size())
        throw Error(ErrorCode::kInvalidInput, "--ref and --hyp must pair up");
      std::vector<TranscriptPair> pairs;
      for (size_t i = 0; i < ref_paths.size(); ++i)
        pairs.emplace_back(io::ParseTranscriptJsonl(io::ReadFile(ref_paths[i])),
                           io::ParseTranscriptJsonl(io::ReadFile(hyp_paths[i])));
      Emit(g, ScoreAsrOutput(CountCorpusErrors(pairs, g.jobs), g.raw));
    } else if (*score_der) {
      const auto ref = io::ParseRttm(io::ReadFile(ref_rttm));
      const auto hyp = io::ParseRttm(io::ReadFile(hyp_rttm));
      std::vector<std::string> uris;
      std::vector<DerInput> inputs;
      for (const auto &[id, segs] : ref) {
        uris.push_back(id);
        auto it = hyp.find(id);
        inputs.push_back({segs, it == hyp.end() ? std::vector<RoleSegment>{} : it->second});
      }
      for (const auto &[id, segs] : hyp)
        if (!ref.count(id)) Warn("UnmatchedRecording", fmt::format("'{}' has no reference", id));
      if (inputs.empty()) throw Error(ErrorCode::kEmptyReference, "no reference recordings");
      const std::vector<DerBreakdown> res = DerBatch(inputs, collar, g.jobs);
      std::string out = "uri,MD,FA,SC,TOTAL,DER\n";
      DerBreakdown total;
      for (size_t i = 0; i < res.size(); ++i) {
        out += DerRow(uris[i], res[i], g.raw);
        total += res[i];
      }
      out += DerRow("ALL", total, g.raw);
      Emit(g, out);
    } else if (*segment) {
      Transcript t;
      if (!words_path.empty()) {
        const std::vector<Word> words = io::ParseWordsJsonl(io::ReadFile(words_path));
        std::vector<Word> sorted = CleanWords(words, max_word);
        std::stable_sort(sorted.begin(), sorted.end(), [](const Word &a, const Word &b) {
          return a.span.start < b.span.start;
        });
        t = MergeWordsToUtterances(sorted, gap);
      } else if (!transcript_path.empty()) {
        t = io::ParseTranscriptJsonl(io::ReadFile(transcript_path));
      } else {
        throw CLI::RequiredError("--words or --transcript");
      }
      const WindowResult w = WindowSegments(t, window);
      for (size_t idx : w.oversized)
        Warn("OversizedUtterance",
             fmt::format("utterance {} longer than {} s skipped", idx, window));
      Emit(g, SegmentsJsonl(w));
    } else if (*frames) {
      if (!transcript_path.empty()) {
        const Transcript t = io::ParseTranscriptJsonl(io::ReadFile(transcript_path));
        const double end = span_end >= 0.0 ? span_end : t.session_span().end;
        const FrameLabelSequence labels = RasterizeLabels(t, period, {0.0, end});
        std::string out = "t,label\n";
        for (size_t n = 0; n < labels.labels.size(); ++n) {
          const FrameLabel l = labels.labels[n];
          out += fmt::format("{:.3f},{}\n", labels.origin + n * labels.frame_period,
                             l == FrameLabel::kSilence ? "sil"
                             : l == FrameLabel::kChild ? "child"
                                                       : "adult");
        }
        Emit(g, out);
      } else if (!probs_path.empty()) {
        const FrameProbSequence f = io::ParseFrameCsv(io::ReadFile(probs_path));
        Emit(g, io::FormatRttm(uri, PostprocessSegments(LabelsToSegments(ArgmaxLabels(f)),
                                                        gap, min_dur)));
      } else {
        throw CLI::RequiredError("--transcript or --probs");
      }
    } else if (*suppress) {
      const SuppressionSet s =
          SilenceRegions(io::ParseFrameCsv(io::ReadFile(probs_path)), threshold, shrink);
      std::string out = "start,end\n";
      for (const TimeInterval &r : s.regions())
        out += fmt::format("{:.3f},{:.3f}\n", r.start, r.end);
      Emit(g, out);
    } else if (*attribute) {
      const std::vector<Word> in = io::ParseWordsJsonl(io::ReadFile(words_path), false);
      std::vector<TimedText> timed;
      for (const Word &w : in) timed.push_back({w.text, w.span});
      Emit(g, io::FormatWordsJsonl(
                  AttributeWords(timed, io::ParseFrameCsv(io::ReadFile(probs_path)))));
    } else if (*loss) {
      if (token_probs.empty() && frame_probs.empty())
        throw CLI::RequiredError("--tokens or --frames");
      nlohmann::ordered_json j;
      double total = 0.0;
      bool degenerate = false;
      if (!token_probs.empty()) {
        const LossValue v = SerializedCrossEntropy(io::ParseTokenProbCsv(io::ReadFile(token_probs)));
        j["asr"] = v.value;
        total += v.value;
        degenerate |= v.degenerate;
      }
      if (!frame_probs.empty()) {
        const LossValue v = FrameCrossEntropy(io::ParseFrameLabelCsv(io::ReadFile(frame_probs)));
        j["diar"] = v.value;
        total = TotalLoss(total, v.value, lambda);
        degenerate |= v.degenerate;
      }
      j["lambda"] = lambda;
      j["total"] = total;
      j["degenerate"] = degenerate;
      Emit(g, j.dump() + "\n");
    } else if (*metrics) {
      const SpeakerRole role = ParseRole(role_name);
      std::map<std::string, MeasureSet> out;
      for (const auto &[child, paths] : SessionsById(session_specs)) {
        std::vector<Segment> pooled;
        for (const std::string &p : paths) {
          WindowResult w = WindowSegments(io::ParseTranscriptJsonl(io::ReadFile(p)), window);
          for (size_t idx : w.oversized)
            Warn("OversizedUtterance",
                 fmt::format("{}: utterance {} longer than {} s skipped", p, idx, window));
          for (Segment &s : w.segments) pooled.push_back(std::move(s));
        }
        out[child] = SpeechMeasures(pooled, role);
      }
      Emit(g, io::FormatMeasuresCsv(out));
    } else if (*agreement) {
      const auto gt = io::ParseMeasuresCsv(io::ReadFile(gt_path));
      const auto pred = io::ParseMeasuresCsv(io::ReadFile(pred_path));
      const std::vector<AgreementRow> rows = Agreement(gt, pred);
      size_t shared = 0;
      for (const auto &kv : gt) shared += pred.count(kv.first);
      if (g.raw) {
        std::string out = "measure,gt_mean,pred_mean,pcc\n";
        for (const AgreementRow &r : rows)
          out += fmt::format("{},{},{},{}\n", MeasureKey(r.measure), r.gt_mean, r.pred_mean,
                             r.pcc);
        Emit(g, out);
      } else {
        Emit(g, AgreementTable(rows, shared));
      }
    } else if (*knn) {
      const double acc = KnnProbe(io::ParseEmbeddingCsv(io::ReadFile(train_path)),
                                  io::ParseEmbeddingCsv(io::ReadFile(test_path)), k, g.jobs);
      Emit(g, fmt::format("k,accuracy\n{},{}\n", k,
                          g.raw ? fmt::format("{}", acc) : Percent(acc)));
    } else if (*simulate) {
      sim.seed = g.seed;
      Emit(g, SimulateTable(RunErrorStudy(sim, trials, g.jobs), g.raw));
    }
  } catch (const CLI::RequiredError &e) {
    std::cerr << e.what() << " is required\n";
    return 2;
  } catch (const Error &e) {
    nlohmann::ordered_json j;
    j["error"] = std::string(ErrorCodeName(e.code()));
    j["message"] = e.what();
    std::cerr << j.dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) { return Run(argc, argv); }
