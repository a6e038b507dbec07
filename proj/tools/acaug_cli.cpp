// Command-line front end: batch augmentation, WER scoring, spectrogram
// inspection and rendering.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "acaug/acaug.hpp"
#include "acaug/image_png.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("acaug");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  if (const char* level = std::getenv("ACAUG_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

int cmd_augment(const std::string& manifest_path, const std::string& policy_path, const std::string& out_dir,
                std::uint64_t seed, std::size_t workers, std::optional<std::size_t> copies,
                const std::string& emit) {
  const auto mode = acaug::parse_emit_mode(emit);
  if (!mode) throw acaug::Error("--emit must be one of auto, wav, spec, both");
  acaug::AugPolicy policy = policy_path.empty() ? acaug::AugPolicy{} : acaug::load_policy(policy_path);
  if (copies) policy.copies_per_input = *copies;
  policy.validate();
  const auto entries = acaug::load_manifest(manifest_path);
  spdlog::info("{} entries x {} copies, {} workers, seed {}", entries.size(), policy.copies_per_input, workers, seed);

  acaug::PipelineOptions opt;
  opt.out_dir = out_dir;
  opt.global_seed = seed;
  opt.workers = workers;
  opt.emit = *mode;
  const auto report = acaug::run_pipeline(entries, policy, opt);

  for (const auto& rec : report.records) {
    if (!rec.ok) spdlog::warn("{} copy {}: {}", rec.entry_id, rec.copy, rec.error);
  }
  nlohmann::json summary{{"processed", report.processed},
                         {"failed", report.failed},
                         {"global_seed", report.global_seed},
                         {"policy_hash", report.policy_hash},
                         {"wall_seconds", report.wall_seconds},
                         {"out_dir", out_dir}};
  std::cout << summary.dump() << "\n";
  return report.failed == 0 ? 0 : 1;
}

int cmd_eval_wer(const std::string& ref_path, const std::string& hyp_path, const std::string& out_path) {
  const auto score = acaug::score_corpus(acaug::load_transcript_tsv(ref_path), acaug::load_transcript_tsv(hyp_path));
  const std::string report = acaug::corpus_report_jsonl(score);
  if (out_path.empty()) {
    std::cout << report;
  } else {
    acaug::write_file_bytes(out_path, report);
  }
  for (const auto& id : score.unmatched_hypotheses) spdlog::warn("hypothesis '{}' has no reference", id);
  spdlog::info("pooled WER {:.4f} over {} reference words", score.pooled.wer, score.pooled.ref_words);
  return 0;
}

int cmd_render(const std::string& spec_path, const std::string& pgm_path, const std::string& png_path) {
  if (pgm_path.empty() && png_path.empty()) throw acaug::Error("render: give --pgm and/or --png");
  const auto file = acaug::load_spec(spec_path);
  const auto img = acaug::render_spectrogram(file.spec);
  if (!pgm_path.empty()) acaug::write_file_bytes(pgm_path, acaug::encode_pgm(img));
  if (!png_path.empty()) acaug::write_file_bytes(png_path, acaug::encode_png(img));
  return 0;
}

int cmd_inspect(const std::string& spec_path) {
  const auto bytes = acaug::read_file_bytes(spec_path);
  const auto header = acaug::decode_spec_header(bytes);
  const auto file = acaug::decode_spec(bytes);
  const auto [lo, hi] = file.spec.min_max();
  std::cout << "version " << header.version << "\n"
            << "n_mels " << header.n_mels << "\n"
            << "n_frames " << header.n_frames << "\n"
            << "normalized " << (header.normalized ? 1 : 0) << "\n"
            << "stats_min " << file.stats.min_val << "\n"
            << "stats_max " << file.stats.max_val << "\n"
            << "value_min " << lo << "\n"
            << "value_max " << hi << "\n";
  return 0;
}

int cmd_logmel(const std::string& wav_path, const std::string& out_path) {
  const auto spec = acaug::compute_log_mel(acaug::load_wav(wav_path));
  acaug::save_spec(out_path, spec);
  return 0;
}

int cmd_vowel_aug(const std::string& in_path, const std::string& out_path, std::uint64_t seed,
                  const std::string& policy_path) {
  const acaug::AugPolicy policy = policy_path.empty() ? acaug::AugPolicy{} : acaug::load_policy(policy_path);
  const auto file = acaug::load_spec(in_path);
  acaug::Rng rng(seed);
  acaug::VowelTrace trace;
  const auto out = acaug::vowel_augment(file.spec, policy.vowel, rng, &trace);
  spdlog::info("{} vowel groups, {} -> {} frames", trace.detected.size(), file.spec.n_frames, out.n_frames);
  acaug::save_spec(out_path, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Acoustic-centric speech data augmentation toolkit"};
  app.set_version_flag("--version", acaug::kVersion);
  app.require_subcommand(1);

  std::string manifest, policy, out_dir, emit = "auto";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::optional<std::size_t> copies;
  auto* augment = app.add_subcommand("augment", "Augment every manifest entry with a policy");
  augment->add_option("--manifest", manifest, "JSON-lines manifest")->required()->check(CLI::ExistingFile);
  augment->add_option("--policy", policy, "Policy JSON (defaults apply when omitted)")->check(CLI::ExistingFile);
  augment->add_option("--out", out_dir, "Output directory")->required();
  augment->add_option("--seed", seed, "Global seed");
  augment->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  augment->add_option("--copies", copies, "Override copies_per_input")->check(CLI::PositiveNumber);
  augment->add_option("--emit", emit, "auto | wav | spec | both");

  std::string ref, hyp, report_out;
  auto* eval = app.add_subcommand("eval-wer", "Pooled word error rate of hypotheses against references");
  eval->add_option("--ref", ref, "Reference TSV (id, text)")->required()->check(CLI::ExistingFile);
  eval->add_option("--hyp", hyp, "Hypothesis TSV (id, text)")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", report_out, "Write the JSON-lines report here instead of stdout");

  std::string spec_in, pgm_out, png_out;
  auto* render = app.add_subcommand("render", "Render a spectrogram file as a grayscale image");
  render->add_option("--spec", spec_in, "Spectrogram file")->required()->check(CLI::ExistingFile);
  render->add_option("--pgm", pgm_out, "PGM output path");
  render->add_option("--png", png_out, "PNG output path");

  std::string inspect_in;
  auto* inspect = app.add_subcommand("inspect", "Print a spectrogram file header");
  inspect->add_option("--spec", inspect_in, "Spectrogram file")->required()->check(CLI::ExistingFile);

  std::string wav_in, logmel_out;
  auto* logmel = app.add_subcommand("logmel", "Compute the log-mel spectrogram of a WAV file");
  logmel->add_option("--wav", wav_in, "Input WAV")->required()->check(CLI::ExistingFile);
  logmel->add_option("--out", logmel_out, "Spectrogram output path")->required();

  std::string vowel_in, vowel_out, vowel_policy;
  std::uint64_t vowel_seed = 0;
  auto* vowel = app.add_subcommand("vowel-aug", "Apply vowel augmentation to one spectrogram file");
  vowel->add_option("--spec", vowel_in, "Input spectrogram")->required()->check(CLI::ExistingFile);
  vowel->add_option("--out", vowel_out, "Output spectrogram")->required();
  vowel->add_option("--seed", vowel_seed, "Seed");
  vowel->add_option("--policy", vowel_policy, "Policy JSON (vowel section used)")->check(CLI::ExistingFile);

  auto* defaults = app.add_subcommand("default-policy", "Print the default policy as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*augment) return cmd_augment(manifest, policy, out_dir, seed, workers, copies, emit);
    if (*eval) return cmd_eval_wer(ref, hyp, report_out);
    if (*render) return cmd_render(spec_in, pgm_out, png_out);
    if (*inspect) return cmd_inspect(inspect_in);
    if (*logmel) return cmd_logmel(wav_in, logmel_out);
    if (*vowel) return cmd_vowel_aug(vowel_in, vowel_out, vowel_seed, vowel_policy);
    if (*defaults) {
      std::cout << acaug::to_json(acaug::AugPolicy{}).dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
