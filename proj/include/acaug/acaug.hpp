#pragma once

// Umbrella header for the augmentation toolkit (PNG export lives in
// acaug/image_png.hpp because it needs libpng).

#include "acaug/baseline_aug.hpp"
#include "acaug/error.hpp"
#include "acaug/eval.hpp"
#include "acaug/eval_report.hpp"
#include "acaug/fft.hpp"
#include "acaug/image.hpp"
#include "acaug/manifest.hpp"
#include "acaug/mel.hpp"
#include "acaug/params.hpp"
#include "acaug/pipeline.hpp"
#include "acaug/policy_json.hpp"
#include "acaug/resample.hpp"
#include "acaug/rng.hpp"
#include "acaug/spec_io.hpp"
#include "acaug/spectrogram_aug.hpp"
#include "acaug/version.hpp"
#include "acaug/wav_io.hpp"
#include "acaug/waveform.hpp"
#include "acaug/waveform_aug.hpp"
