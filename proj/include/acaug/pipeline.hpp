#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "acaug/baseline_aug.hpp"
#include "acaug/manifest.hpp"
#include "acaug/mel.hpp"
#include "acaug/policy_json.hpp"
#include "acaug/rng.hpp"
#include "acaug/spec_io.hpp"
#include "acaug/spectrogram_aug.hpp"
#include "acaug/wav_io.hpp"
#include "acaug/waveform_aug.hpp"

namespace acaug {

/// Which artifacts each task writes. `automatic` writes a spectrogram when
/// any spectrogram stage is enabled and a WAV otherwise.
enum class EmitMode { automatic, wav, spec, both };

inline std::optional<EmitMode> parse_emit_mode(std::string_view s) {
  if (s == "auto") return EmitMode::automatic;
  if (s == "wav") return EmitMode::wav;
  if (s == "spec") return EmitMode::spec;
  if (s == "both") return EmitMode::both;
  return std::nullopt;
}

struct PipelineOptions {
  std::filesystem::path out_dir;
  std::uint64_t global_seed = 0;
  std::size_t workers = 1;
  EmitMode emit = EmitMode::automatic;
  MelConfig mel{};
};

/// Outcome of one (entry, copy) task.
struct TaskRecord {
  std::string entry_id;
  std::size_t copy = 0;
  bool ok = false;
  std::string error;
  std::string output_id;
  std::string wav_file;
  std::string spec_file;
  nlohmann::json augmentation;  // draws that produced this output
};

struct RunReport {
  std::size_t processed = 0;
  std::size_t failed = 0;
  std::vector<TaskRecord> records;  // entry order, then copy order
  std::uint64_t global_seed = 0;
  std::string policy_hash;
  double wall_seconds = 0.0;
};

namespace pipeline_detail {

/// File-system-safe stem; ids that had to be rewritten get a hash suffix so
/// distinct ids never share a file name.
inline std::string file_stem(const std::string& id) {
  std::string stem;
  bool rewritten = false;
  for (char c : id) {
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '_' || c == '.';
    stem.push_back(safe ? c : '_');
    rewritten |= !safe;
  }
  if (stem.empty() || stem[0] == '.') {
    stem.insert(stem.begin(), '_');
    rewritten = true;
  }
  if (rewritten) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(derive_seed(0, id, 0)));
    stem += "-";
    stem += buf;
  }
  return stem;
}

/// Partner for mixing: derived from the task seed, never the entry itself.
inline std::optional<std::size_t> mix_partner(std::uint64_t task_seed, std::size_t self, std::size_t n) {
  if (n < 2) return std::nullopt;
  const auto pick = static_cast<std::size_t>(splitmix64_mix(task_seed ^ 0x6d69787061727472ULL) % (n - 1));
  return pick >= self ? pick + 1 : pick;
}

inline Waveform load_entry_audio(const ManifestEntry& e, int target_rate) {
  Waveform w = decode_wav(read_file_bytes(e.audio_path));
  if (e.sample_rate_hz && w.sample_rate_hz != *e.sample_rate_hz) {
    throw Error("declared sample rate " + std::to_string(*e.sample_rate_hz) + " does not match file rate " +
                std::to_string(w.sample_rate_hz));
  }
  w = conform_sample_rate(std::move(w), target_rate);
  require_valid(w, "load");
  return w;
}

inline TaskRecord run_task(const std::vector<ManifestEntry>& entries, std::size_t entry_index, std::size_t copy,
                           const AugPolicy& policy, const PipelineOptions& opt) {
  const ManifestEntry& entry = entries[entry_index];
  TaskRecord rec;
  rec.entry_id = entry.id;
  rec.copy = copy;
  rec.output_id = entry.id + "#" + std::to_string(copy);
  try {
    const std::uint64_t seed = derive_seed(opt.global_seed, entry.id, copy);
    Rng rng(seed);
    nlohmann::json aug = nlohmann::json::object();

    WaveformTrace wtrace;
    Waveform w = apply_waveform_policy(load_entry_audio(entry, opt.mel.sample_rate_hz), entry.gender, policy, rng,
                                       &wtrace);
    if (policy.enabled(Stage::pitch)) aug["pitch_semitones"] = wtrace.semitones ? nlohmann::json(*wtrace.semitones) : nlohmann::json();
    if (wtrace.amplitude) aug["amplitude_factor"] = *wtrace.amplitude;

    const bool spec_stages = policy.has_spectrogram_stage();
    const bool want_wav = opt.emit == EmitMode::wav || opt.emit == EmitMode::both ||
                          (opt.emit == EmitMode::automatic && !spec_stages);
    const bool want_spec = opt.emit == EmitMode::spec || opt.emit == EmitMode::both ||
                           (opt.emit == EmitMode::automatic && spec_stages);
    const std::string stem = file_stem(entry.id) + "__c" + std::to_string(copy);

    if (want_wav) {
      rec.wav_file = stem + ".wav";
      save_wav(opt.out_dir / rec.wav_file, w);
    }
    if (want_spec) {
      MelSpectrogram spec = compute_log_mel(w, opt.mel);
      if (policy.enabled(Stage::vowel)) {
        VowelTrace vtrace;
        spec = vowel_augment(spec, policy.vowel, rng, &vtrace);
        aug["vowel_groups"] = vtrace.detected.size();
      }
      if (policy.enabled(Stage::spec_augment)) spec = spec_augment(spec, policy.masks, rng);
      if (policy.enabled(Stage::mixup) || policy.enabled(Stage::spec_mix)) {
        if (const auto partner = mix_partner(seed, entry_index, entries.size())) {
          const ManifestEntry& other = entries[*partner];
          const MelSpectrogram partner_spec = compute_log_mel(load_entry_audio(other, opt.mel.sample_rate_hz), opt.mel);
          aug["mix_partner"] = other.id;
          aug["partner_text"] = other.text;
          if (policy.enabled(Stage::mixup)) {
            const double raw = sample_mix_lambda(policy.mix.alpha, rng);
            const double lambda = std::max(raw, 1.0 - raw);  // keep this entry dominant
            spec = mixup(spec, partner_spec, lambda);
            aug["mix_lambda"] = lambda;
          }
          if (policy.enabled(Stage::spec_mix)) spec = spec_mix(spec, partner_spec, policy.mix, rng);
        }
      }
      rec.spec_file = stem + ".spec";
      save_spec(opt.out_dir / rec.spec_file, spec);
    }
    rec.augmentation = std::move(aug);
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
    rec.wav_file.clear();
    rec.spec_file.clear();
  }
  return rec;
}

}  // namespace pipeline_detail

/// Output manifest: one JSON line per successful task, text copied verbatim.
inline std::string output_manifest_jsonl(const std::vector<ManifestEntry>& entries, const RunReport& report) {
  std::string out;
  std::size_t ei = 0;
  for (const auto& rec : report.records) {
    while (ei < entries.size() && entries[ei].id != rec.entry_id) ++ei;
    if (!rec.ok) continue;
    const ManifestEntry& e = entries[ei];
    nlohmann::json j{{"id", rec.output_id}, {"source_id", e.id}, {"copy", rec.copy}, {"text", e.text}};
    j["gender"] = e.gender ? nlohmann::json(to_string(*e.gender)) : nlohmann::json();
    if (!rec.wav_file.empty()) j["audio"] = rec.wav_file;
    if (!rec.spec_file.empty()) j["spec"] = rec.spec_file;
    j["augmentation"] = rec.augmentation;
    out += j.dump();
    out += '\n';
  }
  return out;
}

/// Run summary without timing, so identical runs produce identical bytes.
inline nlohmann::json report_json(const RunReport& report) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& rec : report.records) {
    nlohmann::json t{{"id", rec.entry_id}, {"copy", rec.copy}, {"status", rec.ok ? "ok" : "failed"}};
    if (!rec.ok) t["error"] = rec.error;
    tasks.push_back(std::move(t));
  }
  return {{"processed", report.processed},
          {"failed", report.failed},
          {"global_seed", report.global_seed},
          {"policy_hash", report.policy_hash},
          {"tasks", tasks}};
}

/// Augments every entry copies_per_input times. Tasks are pulled from a
/// shared counter by `workers` threads; each task seeds its own Rng from
/// (global_seed, id, copy) and writes only its own files, so output bytes
/// do not depend on the worker count. Per-task failures are recorded and
/// never stop the batch.
inline RunReport run_pipeline(const std::vector<ManifestEntry>& entries, const AugPolicy& policy,
                              const PipelineOptions& opt) {
  policy.validate();
  opt.mel.validate();
  const auto started = std::chrono::steady_clock::now();
  std::filesystem::create_directories(opt.out_dir);

  const std::size_t copies = policy.copies_per_input;
  const std::size_t n_tasks = entries.size() * copies;
  RunReport report;
  report.global_seed = opt.global_seed;
  report.policy_hash = policy_hash(policy);
  report.records.resize(n_tasks);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) {
      report.records[t] = pipeline_detail::run_task(entries, t / copies, t % copies, policy, opt);
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(opt.workers, 1, std::max<std::size_t>(n_tasks, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
  }

  for (const auto& rec : report.records) (rec.ok ? report.processed : report.failed) += 1;

  write_file_bytes(opt.out_dir / "manifest.jsonl", output_manifest_jsonl(entries, report));
  write_file_bytes(opt.out_dir / "report.json", report_json(report).dump(2) + "\n");
  write_file_bytes(opt.out_dir / "policy.json", to_json(policy).dump(2) + "\n");
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace acaug
