#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace psl {

// One utterance worth of SSL features: n_frames x dim, row-major float32.
struct FeatureMatrix {
  std::size_t n_frames = 0;
  std::size_t dim = 0;
  std::vector<float> data;

  const float* frame(std::size_t i) const { return data.data() + i * dim; }
  float* frame(std::size_t i) { return data.data() + i * dim; }
};

struct Waveform {
  std::uint32_t sample_rate = 0;
  std::vector<double> samples;  // in [-1, 1]
};

// Discrete pseudo-language units (k-means cluster ids).
using UnitSequence = std::vector<std::uint32_t>;

struct RleRun {
  std::uint32_t unit = 0;
  std::uint32_t count = 0;
  bool operator==(const RleRun&) const = default;
};
using RleUnitSequence = std::vector<RleRun>;

// One manifest row. At least one optional field must be present.
struct Utterance {
  std::string id;
  std::optional<std::string> text;
  std::optional<std::string> feature_path;
  std::optional<std::string> audio_path;
  std::optional<UnitSequence> units;
};

}  // namespace psl
