#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "acaug/pipeline.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace acaug;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("acaug_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Synthetic "speech": a tone with a syllable-rate amplitude envelope.
void write_tone(const fs::path& p, double freq, double seconds) {
  auto x = oracle::sine(freq, seconds, 16000, 0.4);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= 0.5 + 0.5 * std::sin(2.0 * oracle::kPi * 3.0 * i / 16000.0);
  save_wav(p, testutil::make_waveform(x));
}

std::vector<ManifestEntry> tone_manifest(const fs::path& dir, std::size_t n) {
  std::ostringstream m;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = "tone" + std::to_string(i) + ".wav";
    write_tone(dir / name, 150.0 + 25.0 * i, 0.4 + 0.05 * (i % 3));
    nlohmann::json j{{"id", "utt" + std::to_string(i)}, {"audio", name}, {"text", "text number " + std::to_string(i)}};
    if (i % 3 != 2) j["gender"] = i % 3 == 0 ? "male" : "female";
    m << j.dump() << "\n";
  }
  std::istringstream in(m.str());
  return parse_manifest(in, dir);
}

std::map<std::string, std::string> tree_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto bytes = read_file_bytes(e.path());
    out[fs::relative(e.path(), dir).string()] = std::string(bytes.begin(), bytes.end());
  }
  return out;
}

}  // namespace

TEST_CASE("default policy serializes the published constants", "[policy]") {
  const std::string golden = R"({
  "amplitude": {
    "high": 1.5,
    "low": 0.5
  },
  "copies_per_input": 1,
  "masks": {
    "mask_value": 0.0,
    "max_freq_width": 27,
    "max_time_width": 40,
    "n_freq_masks": 2,
    "n_time_masks": 2
  },
  "mix": {
    "alpha": 0.2,
    "masks": {
      "mask_value": 0.0,
      "max_freq_width": 27,
      "max_time_width": 40,
      "n_freq_masks": 2,
      "n_time_masks": 2
    }
  },
  "pitch_rules": [
    {
      "gender": "male",
      "lower_semitones": -2.0,
      "probability": 0.2,
      "upper_semitones": 0.0
    },
    {
      "gender": "male",
      "lower_semitones": 0.0,
      "probability": 0.3,
      "upper_semitones": 4.0
    },
    {
      "gender": "female",
      "lower_semitones": -4.0,
      "probability": 0.3,
      "upper_semitones": 0.0
    },
    {
      "gender": "female",
      "lower_semitones": 2.0,
      "probability": 0.3,
      "upper_semitones": 6.0
    }
  ],
  "stages": [
    "pitch",
    "amplitude",
    "vowel"
  ],
  "vowel": {
    "column_statistic": "mean",
    "duration_factor_range": [
      0.8,
      1.25
    ],
    "duration_prob": 0.5,
    "intensity_range": [
      0.5,
      2.0
    ],
    "swap_fraction": 0.1,
    "swap_prob": 0.5,
    "threshold": 0.3
  }
})";
  CHECK(to_json(AugPolicy{}).dump(2) == golden);
  CHECK(policy_from_json(nlohmann::json::parse(golden)) == AugPolicy{});
}

TEST_CASE("policy parsing fills defaults and rejects typos", "[policy]") {
  const auto p = policy_from_json(nlohmann::json::parse(R"({"stages": ["spec_augment", "mixup"], "copies_per_input": 3})"));
  CHECK(p.copies_per_input == 3);
  CHECK(p.enabled(Stage::mixup));
  CHECK_FALSE(p.enabled(Stage::vowel));
  CHECK(p.pitch_rules == default_pitch_rules());
  CHECK_THROWS_WITH(policy_from_json(nlohmann::json::parse(R"({"vowel": {"treshold": 0.2}})")),
                    Catch::Matchers::ContainsSubstring("treshold"));
  CHECK_THROWS_AS(policy_from_json(nlohmann::json::parse(R"({"stages": ["reverb"]})")), Error);
  CHECK_THROWS_AS(policy_from_json(nlohmann::json::parse(
                      R"({"pitch_rules": [{"gender":"male","probability":0.7,"lower_semitones":0,"upper_semitones":1},
                                          {"gender":"male","probability":0.7,"lower_semitones":0,"upper_semitones":1}]})")),
                  Error);
  CHECK_THROWS_AS(policy_from_json(nlohmann::json::parse(R"({"amplitude": {"low": 2, "high": 1}})")), Error);
  CHECK(policy_hash(AugPolicy{}) == policy_hash(p == AugPolicy{} ? p : AugPolicy{}));
  CHECK(policy_hash(AugPolicy{}) != policy_hash(p));
}

TEST_CASE("manifest parsing", "[manifest]") {
  {
    std::istringstream empty("");
    CHECK(parse_manifest(empty).empty());
  }
  {
    std::istringstream two(
        R"({"id":"a","audio":"x.wav","text":"Hi there","gender":"female","sample_rate":16000})"
        "\n"
        R"({"id":"b","audio":"/abs/y.wav","text":"","gender":"robot"})"
        "\n");
    const auto m = parse_manifest(two, "/data");
    REQUIRE(m.size() == 2);
    CHECK(m[0].id == "a");
    CHECK(m[0].audio_path == fs::path("/data/x.wav"));
    CHECK(m[0].gender == Gender::female);
    CHECK(m[0].sample_rate_hz == 16000);
    CHECK(m[1].audio_path == fs::path("/abs/y.wav"));
    CHECK_FALSE(m[1].gender);
  }
  {
    std::ostringstream dup;
    for (int i = 0; i < 4; ++i) dup << R"({"id":"u)" << i << R"(","audio":"a.wav","text":"t"})" << "\n";
    dup << R"({"id":"u1","audio":"a.wav","text":"t"})" << "\n";
    std::istringstream in(dup.str());
    CHECK_THROWS_WITH(parse_manifest(in), Catch::Matchers::ContainsSubstring("line 5"));
  }
  {
    std::istringstream bad("{\"id\":\"a\",\"audio\":\"x\",\"text\":\"t\"}\n{not json\n");
    CHECK_THROWS_WITH(parse_manifest(bad), Catch::Matchers::ContainsSubstring("line 2"));
  }
  {
    std::istringstream missing(R"({"id":"a","text":"t"})");
    CHECK_THROWS_AS(parse_manifest(missing), Error);
  }
}

TEST_CASE("derive_seed is stable and separates copies", "[seed]") {
  CHECK(derive_seed(42, "utt1", 0) == derive_seed(42, "utt1", 0));
  CHECK(derive_seed(42, "utt1", 0) != derive_seed(42, "utt1", 1));
  CHECK(derive_seed(42, "utt1", 0) != derive_seed(43, "utt1", 0));
  CHECK(derive_seed(42, "a", 0) != derive_seed(42, std::string("a\0", 2), 0));
  std::set<std::uint64_t> seen;
  Rng rng(1);
  for (int i = 0; i < 1000000; ++i) {
    const std::string id = "utt" + std::to_string(rng.index(1000000));
    seen.insert(derive_seed(rng(), id, rng.index(8)));
  }
  CHECK(seen.size() == 1000000);
}

TEST_CASE("empty manifest produces an empty report", "[pipeline]") {
  TempDir dir("empty");
  PipelineOptions opt;
  opt.out_dir = dir.path / "out";
  const auto report = run_pipeline({}, AugPolicy{}, opt);
  CHECK(report.processed == 0);
  CHECK(report.failed == 0);
  CHECK(fs::exists(opt.out_dir / "manifest.jsonl"));
}

TEST_CASE("pipeline output is independent of worker count", "[pipeline]") {
  TempDir dir("workers");
  const auto entries = tone_manifest(dir.path, 8);
  AugPolicy policy;
  policy.copies_per_input = 2;
  policy.stages = {Stage::pitch, Stage::amplitude, Stage::vowel, Stage::spec_augment, Stage::mixup, Stage::spec_mix};
  PipelineOptions opt;
  opt.global_seed = 99;
  opt.emit = EmitMode::both;
  opt.out_dir = dir.path / "w1";
  opt.workers = 1;
  const auto r1 = run_pipeline(entries, policy, opt);
  opt.out_dir = dir.path / "w4";
  opt.workers = 4;
  const auto r4 = run_pipeline(entries, policy, opt);
  CHECK(r1.processed == 16);
  CHECK(r4.processed == 16);
  const auto a = tree_contents(dir.path / "w1");
  const auto b = tree_contents(dir.path / "w4");
  CHECK(a.size() == 16 * 2 + 3);
  CHECK(a == b);
}

TEST_CASE("output manifest pairs outputs with unchanged transcriptions", "[pipeline]") {
  TempDir dir("pairing");
  const auto entries = tone_manifest(dir.path, 5);
  AugPolicy policy;
  policy.copies_per_input = 3;
  PipelineOptions opt;
  opt.out_dir = dir.path / "out";
  opt.workers = 2;
  const auto report = run_pipeline(entries, policy, opt);
  REQUIRE(report.processed == 15);
  std::ifstream in(opt.out_dir / "manifest.jsonl");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    const auto& src = *std::find_if(entries.begin(), entries.end(),
                                    [&](const ManifestEntry& e) { return e.id == j["source_id"]; });
    CHECK(j["text"] == src.text);
    CHECK(j.contains("spec"));
    CHECK_FALSE(j.contains("audio"));
    const auto spec = load_spec(opt.out_dir / j["spec"].get<std::string>());
    CHECK(spec.spec.n_mels == 80);
    ++n;
  }
  CHECK(n == report.processed);
}

TEST_CASE("waveform-only policy writes WAV files of the source length", "[pipeline]") {
  TempDir dir("wav");
  const auto entries = tone_manifest(dir.path, 3);
  AugPolicy policy;
  policy.stages = {Stage::pitch, Stage::amplitude};
  PipelineOptions opt;
  opt.out_dir = dir.path / "out";
  const auto report = run_pipeline(entries, policy, opt);
  REQUIRE(report.processed == 3);
  for (const auto& rec : report.records) {
    REQUIRE(!rec.wav_file.empty());
    CHECK(rec.spec_file.empty());
    const auto src = load_wav(entries[0].audio_path.parent_path() / (entries[std::stoi(rec.entry_id.substr(3))].audio_path.filename()));
    CHECK(load_wav(opt.out_dir / rec.wav_file).size() == src.size());
  }
}

TEST_CASE("missing audio is recorded and the batch continues", "[pipeline]") {
  TempDir dir("missing");
  auto entries = tone_manifest(dir.path, 3);
  entries[1].audio_path = dir.path / "does_not_exist.wav";
  AugPolicy policy;
  policy.copies_per_input = 2;
  PipelineOptions opt;
  opt.out_dir = dir.path / "out";
  const auto report = run_pipeline(entries, policy, opt);
  CHECK(report.failed == 2);
  CHECK(report.processed == 4);
  CHECK(report.processed + report.failed == entries.size() * policy.copies_per_input);
  const auto j = nlohmann::json::parse(std::ifstream(opt.out_dir / "report.json"));
  CHECK(j["failed"] == 2);
  CHECK(j["tasks"][2]["status"] == "failed");
}

TEST_CASE("declared sample rate must match the file", "[pipeline]") {
  TempDir dir("rate");
  auto entries = tone_manifest(dir.path, 2);
  entries[0].sample_rate_hz = 22050;
  PipelineOptions opt;
  opt.out_dir = dir.path / "out";
  const auto report = run_pipeline(entries, AugPolicy{}, opt);
  CHECK(report.failed == 1);
  CHECK(report.records[0].error.find("sample rate") != std::string::npos);
}

TEST_CASE("mix partners are never the entry itself", "[pipeline]") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng.index(20);
    const std::size_t self = rng.index(n);
    const auto p = pipeline_detail::mix_partner(rng(), self, n);
    REQUIRE(p.has_value());
    REQUIRE(*p != self);
    REQUIRE(*p < n);
  }
  CHECK_FALSE(pipeline_detail::mix_partner(1, 0, 1));
}

TEST_CASE("file stems stay unique for awkward ids", "[pipeline]") {
  CHECK(pipeline_detail::file_stem("utt-1.a") == "utt-1.a");
  CHECK(pipeline_detail::file_stem("a/b") != pipeline_detail::file_stem("a_b"));
  CHECK(pipeline_detail::file_stem("../x").find('/') == std::string::npos);
}
