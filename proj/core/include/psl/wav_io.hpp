#pragma once

// RIFF/WAVE reader, PCM 16-bit mono only. Samples are scaled by 1/32768
// into [-1, 1). Anything else (stereo, other bit depths, non-PCM) is an
// UnsupportedFormat error; resampling is out of scope.

#include <string>

#include "psl/types.hpp"

namespace psl {

Waveform read_wav(const std::string& path);

// Test/tooling helper: writes a PCM16 mono file from raw sample values.
void write_wav_pcm16_mono(const std::string& path, std::uint32_t sample_rate,
                          const std::vector<std::int16_t>& samples);

}  // namespace psl
