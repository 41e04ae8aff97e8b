#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "psl/model.hpp"
#include "psl/types.hpp"

namespace psl {

struct TrainConfig {
  double lr = 3e-4;
  std::size_t batch_size = 8;
  std::size_t max_steps = 0;
  std::uint64_t shuffle_seed = 0;
  std::size_t log_every = 100;
  double clip_norm = 1.0;
};

struct TrainPair {
  std::string id;
  std::string text;
  UnitSequence units;
};

struct StepLoss {
  std::size_t step = 0;
  double loss = 0.0;
  double wall_ms = 0.0;
};
using LossCurve = std::vector<StepLoss>;

// Teacher-forced training. Targets are deduplicated before encoding; batches
// are drawn from a SplitMix64-shuffled epoch order, gradients are averaged
// over the batch, clipped to clip_norm, and applied with Adam. Deterministic
// given (model seed, shuffle_seed, dataset order). When log_stream is given,
// one JSON line {"step":..,"loss":..,"wall_ms":..} is written per step.
LossCurve train(Seq2SeqModel& m, const std::vector<TrainPair>& dataset,
                const TrainConfig& cfg, std::ostream* log_stream = nullptr);

}  // namespace psl
