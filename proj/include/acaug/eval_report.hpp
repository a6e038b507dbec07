#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "acaug/error.hpp"
#include "acaug/eval.hpp"

namespace acaug {

struct Transcript {
  std::string id;
  std::string text;
};

/// Two-column TSV: utterance id, tab, text. Lines without a tab are an id
/// with empty text. Blank lines are skipped; duplicate ids are rejected.
inline std::vector<Transcript> parse_transcript_tsv(std::istream& in, const std::string& name = "tsv") {
  std::vector<Transcript> rows;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    Transcript t{line.substr(0, tab), tab == std::string::npos ? "" : line.substr(tab + 1)};
    if (t.id.empty()) throw Error(name + " line " + std::to_string(line_no) + ": empty utterance id");
    if (!seen.emplace(t.id, line_no).second) {
      throw Error(name + " line " + std::to_string(line_no) + ": duplicate id '" + t.id + "'");
    }
    rows.push_back(std::move(t));
  }
  return rows;
}

inline std::vector<Transcript> load_transcript_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_transcript_tsv(in, path.string());
}

struct UtteranceScore {
  std::string id;
  WerBreakdown counts;       // wer field is meaningless when ref_words == 0
  bool missing_hypothesis = false;
};

struct CorpusScore {
  std::vector<UtteranceScore> utterances;  // reference order
  WerBreakdown pooled;
  std::vector<std::string> unmatched_hypotheses;
};

/// Scores every reference; a reference with no hypothesis counts as an
/// empty hypothesis. Hypotheses without a reference are listed, not scored.
inline CorpusScore score_corpus(const std::vector<Transcript>& refs, const std::vector<Transcript>& hyps) {
  std::unordered_map<std::string, const Transcript*> by_id;
  for (const auto& h : hyps) by_id.emplace(h.id, &h);
  CorpusScore out;
  std::vector<std::pair<Tokens, Tokens>> pairs;
  for (const auto& r : refs) {
    const auto it = by_id.find(r.id);
    UtteranceScore u;
    u.id = r.id;
    u.missing_hypothesis = it == by_id.end();
    Tokens ref = normalize_text(r.text);
    Tokens hyp = u.missing_hypothesis ? Tokens{} : normalize_text(it->second->text);
    if (ref.empty()) {
      u.counts.insertions = hyp.size();
    } else {
      u.counts = wer(ref, hyp);
    }
    pairs.emplace_back(std::move(ref), std::move(hyp));
    out.utterances.push_back(std::move(u));
  }
  std::unordered_map<std::string, bool> ref_ids;
  for (const auto& r : refs) ref_ids.emplace(r.id, true);
  for (const auto& h : hyps) {
    if (!ref_ids.count(h.id)) out.unmatched_hypotheses.push_back(h.id);
  }
  out.pooled = aggregate_wer(pairs);
  return out;
}

inline nlohmann::json to_json(const WerBreakdown& w) {
  return {{"substitutions", w.substitutions},
          {"deletions", w.deletions},
          {"insertions", w.insertions},
          {"ref_words", w.ref_words},
          {"wer", w.ref_words > 0 ? nlohmann::json(w.wer) : nlohmann::json()}};
}

/// One JSON object per utterance, then a final {"summary": ...} line.
inline std::string corpus_report_jsonl(const CorpusScore& score) {
  std::string out;
  for (const auto& u : score.utterances) {
    auto j = to_json(u.counts);
    j["id"] = u.id;
    if (u.missing_hypothesis) j["missing_hypothesis"] = true;
    out += j.dump() + "\n";
  }
  auto summary = to_json(score.pooled);
  summary["utterances"] = score.utterances.size();
  summary["unmatched_hypotheses"] = score.unmatched_hypotheses;
  out += nlohmann::json{{"summary", summary}}.dump() + "\n";
  return out;
}

}  // namespace acaug
