#pragma once

// Pipeline configuration: strict JSON with unknown-key rejection so typos in
// experiment configs fail loudly. All randomness is controlled by the seeds
// in this file; nothing is ever seeded from the clock.

#include <cstdint>
#include <map>
#include <string>

#include "psl/kmeans.hpp"
#include "psl/model.hpp"
#include "psl/train.hpp"

namespace psl {

struct PipelineConfig {
  KmeansConfig kmeans;
  ModelConfig model;
  TrainConfig train;
  std::string workdir = ".";
  std::map<std::string, std::string> manifests;
};

PipelineConfig parse_pipeline_config(const std::string& json_text);
PipelineConfig load_pipeline_config(const std::string& path);

// Sets every seed (kmeans, model, shuffle) to the same value; used by the
// CLI --seed-override flag.
void apply_seed_override(PipelineConfig& cfg, std::uint64_t seed);

}  // namespace psl
