#pragma once

// k-means quantizer: trains the discrete-unit codebook over pooled SSL
// feature frames and assigns frames to nearest centroids.
//
// Reproducibility contract: centroids are stored float32, all distances and
// means accumulate in float64, every scan runs in ascending frame order, and
// all randomness comes from SplitMix64. Identical (data, config) therefore
// yields bit-identical codebooks.

#include <cstdint>
#include <string>
#include <vector>

#include "psl/types.hpp"

namespace psl {

struct Codebook {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<float> centroids;  // k x dim, row-major
  double trained_inertia = 0.0;
  std::uint64_t seed = 0;

  const float* centroid(std::size_t j) const {
    return centroids.data() + j * dim;
  }
};

struct KmeansConfig {
  std::size_t k = 500;
  std::size_t max_iters = 100;
  double tol = 1e-6;  // relative inertia improvement (prev - cur) / prev
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
};

struct FitStats {
  std::size_t iterations_run = 0;
  std::vector<double> inertia_per_iter;
  bool converged = false;
};

// k-means++ (D^2) seeding. Centroids are copies of distinct data rows.
// Restart r of a fit uses rng_seed = cfg.seed + r.
Codebook kmeans_pp_init(const FeatureMatrix& data, std::size_t k,
                        std::uint64_t rng_seed);

// Lloyd's algorithm. Empty clusters are reseeded to the frame farthest from
// its assigned centroid (ties toward the lowest frame index). Stops when the
// assignment stabilizes, relative inertia improvement drops below tol, or
// max_iters is reached. With restarts > 1 the run with the lowest final
// inertia wins (ties toward the lowest restart index).
std::pair<Codebook, FitStats> kmeans_fit(const FeatureMatrix& data,
                                         const KmeansConfig& cfg);

// Nearest centroid per frame, squared Euclidean, ties toward lowest index.
UnitSequence assign(const Codebook& cb, const FeatureMatrix& features);

// Sum of squared distances to nearest centroids.
double inertia(const Codebook& cb, const FeatureMatrix& data);

// Codebook file, version 1: magic "KMCB" | u32 version | u32 k | u32 dim |
// u64 seed | f64 trained_inertia | k*dim float32 LE. Bit-exact round trip.
Codebook read_codebook(const std::string& path);
void write_codebook(const std::string& path, const Codebook& cb);

}  // namespace psl
