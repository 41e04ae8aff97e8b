#include "psl/metrics.hpp"

#include <cmath>

#include "edit_distance.hpp"
#include "psl/error.hpp"
#include "psl/text_norm.hpp"

namespace psl {

CerDetail cer_detail(std::string_view hyp_text, std::string_view ref_text) {
  std::u32string hyp = nfc_codepoints(hyp_text);
  std::u32string ref = nfc_codepoints(ref_text);
  if (ref.empty())
    raise(ErrorCode::EmptyReference,
          "CER reference text is empty after normalization");
  CerDetail d;
  d.distance = detail::edit_distance(hyp, ref);
  d.ref_len = ref.size();
  d.hyp_len = hyp.size();
  d.percent = 100.0 * static_cast<double>(d.distance) /
              static_cast<double>(d.ref_len);
  return d;
}

double cer(std::string_view hyp_text, std::string_view ref_text) {
  return cer_detail(hyp_text, ref_text).percent;
}

double sdr(const Waveform& ref, const Waveform& est) {
  if (ref.samples.size() != est.samples.size())
    raise(ErrorCode::LengthMismatch,
          "SDR needs equal-length waveforms (" +
              std::to_string(ref.samples.size()) + " vs " +
              std::to_string(est.samples.size()) + " samples)");
  if (ref.sample_rate != est.sample_rate)
    raise(ErrorCode::SampleRateMismatch,
          "SDR needs equal sample rates (" + std::to_string(ref.sample_rate) +
              " vs " + std::to_string(est.sample_rate) + " Hz)");

  double signal = 0.0, distortion = 0.0;
  for (std::size_t i = 0; i < ref.samples.size(); ++i) {
    signal += ref.samples[i] * ref.samples[i];
    const double e = ref.samples[i] - est.samples[i];
    distortion += e * e;
  }
  if (signal == 0.0)
    raise(ErrorCode::SilentReference, "SDR reference has zero energy");
  if (distortion == 0.0) return kSdrCapDb;
  return 10.0 * std::log10(signal / distortion);
}

}  // namespace psl
