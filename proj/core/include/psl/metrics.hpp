#pragma once

#include <cstddef>
#include <string_view>

#include "psl/types.hpp"

namespace psl {

struct CerDetail {
  std::size_t distance = 0;
  std::size_t ref_len = 0;
  std::size_t hyp_len = 0;
  double percent = 0.0;
};

// Character error rate over NFC-normalized Unicode scalar values.
// ref_text must be non-empty after normalization.
CerDetail cer_detail(std::string_view hyp_text, std::string_view ref_text);
double cer(std::string_view hyp_text, std::string_view ref_text);

// Cap returned when the distortion energy is exactly zero, keeping reports
// finite.
inline constexpr double kSdrCapDb = 140.0;

// 10 * log10(sum(ref^2) / sum((ref - est)^2)) over aligned equal-length,
// equal-rate waveforms; no shift search.
double sdr(const Waveform& ref, const Waveform& est);

}  // namespace psl
