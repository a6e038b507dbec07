#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "acaug/error.hpp"
#include "acaug/params.hpp"

namespace acaug {

using Json = nlohmann::json;

namespace policy_detail {

inline void reject_unknown(const Json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw Error(std::string("policy: ") + where + " must be an object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw Error(std::string("policy: unknown key '") + key + "' in " + where);
  }
}

template <typename T>
void read_if(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline Json range_json(const Range& r) { return Json::array({r.low, r.high}); }

inline Range range_from(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw Error(std::string("policy: ") + what + " must be [low, high]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace policy_detail

inline Json to_json(const MaskParams& p) {
  return Json{{"n_freq_masks", p.n_freq_masks}, {"max_freq_width", p.max_freq_width},
              {"n_time_masks", p.n_time_masks}, {"max_time_width", p.max_time_width},
              {"mask_value", p.mask_value}};
}

inline MaskParams mask_params_from_json(const Json& j) {
  policy_detail::reject_unknown(j, {"n_freq_masks", "max_freq_width", "n_time_masks", "max_time_width", "mask_value"},
                                "masks");
  MaskParams p;
  policy_detail::read_if(j, "n_freq_masks", p.n_freq_masks);
  policy_detail::read_if(j, "max_freq_width", p.max_freq_width);
  policy_detail::read_if(j, "n_time_masks", p.n_time_masks);
  policy_detail::read_if(j, "max_time_width", p.max_time_width);
  policy_detail::read_if(j, "mask_value", p.mask_value);
  return p;
}

inline Json to_json(const AugPolicy& p) {
  Json rules = Json::array();
  for (const auto& r : p.pitch_rules) {
    rules.push_back({{"gender", to_string(r.gender)},
                     {"probability", r.probability},
                     {"lower_semitones", r.lower_semitones},
                     {"upper_semitones", r.upper_semitones}});
  }
  Json stages = Json::array();
  for (Stage s : p.stages) stages.push_back(to_string(s));
  return Json{
      {"pitch_rules", rules},
      {"amplitude", {{"low", p.amplitude.low}, {"high", p.amplitude.high}}},
      {"vowel",
       {{"threshold", p.vowel.threshold},
        {"column_statistic", p.vowel.statistic == ColumnStatistic::mean ? "mean" : "max"},
        {"duration_prob", p.vowel.duration_prob},
        {"duration_factor_range", policy_detail::range_json(p.vowel.duration_factor_range)},
        {"swap_prob", p.vowel.swap_prob},
        {"swap_fraction", p.vowel.swap_fraction},
        {"intensity_range", policy_detail::range_json(p.vowel.intensity_range)}}},
      {"masks", to_json(p.masks)},
      {"mix", {{"alpha", p.mix.alpha}, {"masks", to_json(p.mix.masks)}}},
      {"stages", stages},
      {"copies_per_input", p.copies_per_input},
  };
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline AugPolicy policy_from_json(const Json& j) {
  using namespace policy_detail;
  reject_unknown(j, {"pitch_rules", "amplitude", "vowel", "masks", "mix", "stages", "copies_per_input"}, "policy");
  AugPolicy p;
  try {
    if (j.contains("pitch_rules")) {
      p.pitch_rules.clear();
      for (const auto& r : j.at("pitch_rules")) {
        reject_unknown(r, {"gender", "probability", "lower_semitones", "upper_semitones"}, "pitch rule");
        PitchRule rule;
        const auto g = parse_gender(r.at("gender").get<std::string>());
        if (!g) throw Error("policy: pitch rule gender must be male or female");
        rule.gender = *g;
        rule.probability = r.at("probability").get<double>();
        rule.lower_semitones = r.at("lower_semitones").get<double>();
        rule.upper_semitones = r.at("upper_semitones").get<double>();
        p.pitch_rules.push_back(rule);
      }
    }
    if (j.contains("amplitude")) {
      const auto& a = j.at("amplitude");
      reject_unknown(a, {"low", "high"}, "amplitude");
      read_if(a, "low", p.amplitude.low);
      read_if(a, "high", p.amplitude.high);
    }
    if (j.contains("vowel")) {
      const auto& v = j.at("vowel");
      reject_unknown(v, {"threshold", "column_statistic", "duration_prob", "duration_factor_range", "swap_prob",
                         "swap_fraction", "intensity_range"},
                     "vowel");
      read_if(v, "threshold", p.vowel.threshold);
      if (v.contains("column_statistic")) {
        const auto s = v.at("column_statistic").get<std::string>();
        if (s == "mean") {
          p.vowel.statistic = ColumnStatistic::mean;
        } else if (s == "max") {
          p.vowel.statistic = ColumnStatistic::max;
        } else {
          throw Error("policy: column_statistic must be mean or max");
        }
      }
      read_if(v, "duration_prob", p.vowel.duration_prob);
      if (v.contains("duration_factor_range")) {
        p.vowel.duration_factor_range = range_from(v.at("duration_factor_range"), "duration_factor_range");
      }
      read_if(v, "swap_prob", p.vowel.swap_prob);
      read_if(v, "swap_fraction", p.vowel.swap_fraction);
      if (v.contains("intensity_range")) p.vowel.intensity_range = range_from(v.at("intensity_range"), "intensity_range");
    }
    if (j.contains("masks")) p.masks = mask_params_from_json(j.at("masks"));
    if (j.contains("mix")) {
      const auto& m = j.at("mix");
      reject_unknown(m, {"alpha", "masks"}, "mix");
      read_if(m, "alpha", p.mix.alpha);
      if (m.contains("masks")) p.mix.masks = mask_params_from_json(m.at("masks"));
    }
    if (j.contains("stages")) {
      p.stages.clear();
      for (const auto& s : j.at("stages")) {
        const auto st = parse_stage(s.get<std::string>());
        if (!st) throw Error("policy: unknown stage '" + s.get<std::string>() + "'");
        if (!p.enabled(*st)) p.stages.push_back(*st);
      }
    }
    read_if(j, "copies_per_input", p.copies_per_input);
  } catch (const Json::exception& e) {
    throw Error(std::string("policy: ") + e.what());
  }
  p.validate();
  return p;
}

inline AugPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open policy " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("policy " + path.string() + ": " + e.what());
  }
  return policy_from_json(j);
}

/// FNV-1a 64 over the canonical (sorted-key, compact) serialization.
inline std::string policy_hash(const AugPolicy& p) {
  const std::string canonical = to_json(p).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace acaug
