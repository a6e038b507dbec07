#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "acaug/error.hpp"
#include "acaug/params.hpp"

namespace acaug {

/// One utterance: audio, its transcription, and optional speaker metadata.
struct ManifestEntry {
  std::string id;
  std::filesystem::path audio_path;
  std::string text;
  std::optional<Gender> gender;
  std::optional<int> sample_rate_hz;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Parses JSON-lines records {"id", "audio", "text", "gender"?, "sample_rate"?}.
/// Blank lines are skipped. Relative audio paths resolve against `base_dir`.
/// Unrecognized genders are kept as unknown.
inline std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {}) {
  std::vector<ManifestEntry> entries;
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "manifest line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw Error(where + "malformed record");
    }
    if (!j.is_object()) throw Error(where + "record must be an object");
    ManifestEntry e;
    try {
      if (!j.contains("id") || !j["id"].is_string()) throw Error(where + "missing string field 'id'");
      if (!j.contains("audio") || !j["audio"].is_string()) throw Error(where + "missing string field 'audio'");
      if (!j.contains("text") || !j["text"].is_string()) throw Error(where + "missing string field 'text'");
      e.id = j["id"].get<std::string>();
      e.text = j["text"].get<std::string>();
      e.audio_path = j["audio"].get<std::string>();
      if (e.audio_path.is_relative() && !base_dir.empty()) e.audio_path = base_dir / e.audio_path;
      if (j.contains("gender") && j["gender"].is_string()) e.gender = parse_gender(j["gender"].get<std::string>());
      if (j.contains("sample_rate") && !j["sample_rate"].is_null()) {
        e.sample_rate_hz = j["sample_rate"].get<int>();
        if (*e.sample_rate_hz <= 0) throw Error(where + "sample_rate must be positive");
      }
    } catch (const nlohmann::json::exception&) {
      throw Error(where + "field has the wrong type");
    }
    if (e.id.empty()) throw Error(where + "empty id");
    if (!seen.emplace(e.id, line_no).second) {
      throw Error(where + "duplicate id '" + e.id + "' (first seen on line " + std::to_string(seen[e.id]) + ")");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  return parse_manifest(in, path.parent_path());
}

}  // namespace acaug
