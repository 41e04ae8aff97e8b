#include "psl/kmeans.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "binary_io.hpp"
#include "psl/error.hpp"
#include "psl/rng.hpp"

namespace psl {

namespace {

double sq_distance(const float* a, const float* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double diff = static_cast<double>(a[d]) - static_cast<double>(b[d]);
    acc += diff * diff;
  }
  return acc;
}

void check_finite(const FeatureMatrix& data) {
  for (float v : data.data)
    if (!std::isfinite(v))
      raise(ErrorCode::NonFiniteValue, "non-finite value in feature data");
}

// One E-step: nearest centroid per frame (ties toward lowest index).
// Fills per-frame squared distances and returns their sum.
double assign_step(const FeatureMatrix& data, const std::vector<float>& cents,
                   std::size_t k, std::vector<std::uint32_t>& labels,
                   std::vector<double>& dists) {
  const std::size_t dim = data.dim;
  double total = 0.0;
  for (std::size_t i = 0; i < data.n_frames; ++i) {
    const float* f = data.frame(i);
    std::uint32_t best = 0;
    double best_d = sq_distance(f, cents.data(), dim);
    for (std::size_t j = 1; j < k; ++j) {
      double d = sq_distance(f, cents.data() + j * dim, dim);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::uint32_t>(j);
      }
    }
    labels[i] = best;
    dists[i] = best_d;
    total += best_d;
  }
  return total;
}

}  // namespace

Codebook kmeans_pp_init(const FeatureMatrix& data, std::size_t k,
                        std::uint64_t rng_seed) {
  if (k == 0) raise(ErrorCode::DimZero, "k must be >= 1");
  if (data.n_frames < k)
    raise(ErrorCode::TooFewFrames,
          std::to_string(data.n_frames) + " frames < k=" + std::to_string(k));

  const std::size_t dim = data.dim;
  SplitMix64 rng(rng_seed);

  Codebook cb;
  cb.k = k;
  cb.dim = dim;
  cb.seed = rng_seed;
  cb.centroids.resize(k * dim);

  // First centroid: uniformly sampled data row.
  std::size_t first = static_cast<std::size_t>(rng.next_below(data.n_frames));
  std::memcpy(cb.centroids.data(), data.frame(first), dim * sizeof(float));

  // Remaining centroids: D^2 sampling over distance to nearest chosen one.
  std::vector<double> weight(data.n_frames);
  for (std::size_t i = 0; i < data.n_frames; ++i)
    weight[i] = sq_distance(data.frame(i), cb.centroids.data(), dim);

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double w : weight) total += w;
    if (total == 0.0)
      raise(ErrorCode::TooFewDistinctPoints,
            "fewer than k=" + std::to_string(k) + " distinct frames");

    double target = rng.next_real() * total;
    std::size_t chosen = data.n_frames;  // sentinel
    double cum = 0.0;
    for (std::size_t i = 0; i < data.n_frames; ++i) {
      cum += weight[i];
      if (cum > target) {
        chosen = i;
        break;
      }
    }
    if (chosen == data.n_frames) {
      // target landed on the accumulated total; take the last positive weight
      for (std::size_t i = data.n_frames; i-- > 0;) {
        if (weight[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    }

    float* dst = cb.centroids.data() + c * dim;
    std::memcpy(dst, data.frame(chosen), dim * sizeof(float));
    for (std::size_t i = 0; i < data.n_frames; ++i) {
      double d = sq_distance(data.frame(i), dst, dim);
      if (d < weight[i]) weight[i] = d;
    }
  }
  return cb;
}

namespace {

std::pair<Codebook, FitStats> lloyd_run(const FeatureMatrix& data,
                                        const KmeansConfig& cfg,
                                        std::uint64_t rng_seed) {
  const std::size_t n = data.n_frames;
  const std::size_t dim = data.dim;
  const std::size_t k = cfg.k;

  Codebook cb = kmeans_pp_init(data, k, rng_seed);
  FitStats stats;

  std::vector<std::uint32_t> labels(n), prev_labels;
  std::vector<double> dists(n);
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  double prev_inertia = 0.0;

  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    double cur = assign_step(data, cb.centroids, k, labels, dists);
    stats.inertia_per_iter.push_back(cur);
    stats.iterations_run = iter;

    // M-step: per-cluster means, float64 accumulation in frame order.
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const float* f = data.frame(i);
      double* s = sums.data() + labels[i] * dim;
      for (std::size_t d = 0; d < dim; ++d) s[d] += static_cast<double>(f[d]);
      ++counts[labels[i]];
    }
    std::vector<double> reseed_dists;
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) {
        // Reseed to the frame farthest from its assigned centroid, ties
        // toward the lowest frame index; each frame reseeds at most once.
        if (reseed_dists.empty()) reseed_dists = dists;
        std::size_t far = 0;
        double far_d = reseed_dists[0];
        for (std::size_t i = 1; i < n; ++i) {
          if (reseed_dists[i] > far_d) {
            far_d = reseed_dists[i];
            far = i;
          }
        }
        std::memcpy(cb.centroids.data() + j * dim, data.frame(far),
                    dim * sizeof(float));
        reseed_dists[far] = 0.0;
      } else {
        float* c = cb.centroids.data() + j * dim;
        const double* s = sums.data() + j * dim;
        double inv = 1.0 / static_cast<double>(counts[j]);
        for (std::size_t d = 0; d < dim; ++d)
          c[d] = static_cast<float>(s[d] * inv);
      }
    }

    if (iter > 1) {
      if (labels == prev_labels) {
        stats.converged = true;
        break;
      }
      if (prev_inertia == 0.0) {
        stats.converged = true;
        break;
      }
      double rel = (prev_inertia - cur) / prev_inertia;
      if (rel < cfg.tol) {
        stats.converged = true;
        break;
      }
    }
    prev_labels = labels;
    prev_inertia = cur;
  }

  cb.trained_inertia = stats.inertia_per_iter.back();
  cb.seed = cfg.seed;
  return {std::move(cb), std::move(stats)};
}

}  // namespace

std::pair<Codebook, FitStats> kmeans_fit(const FeatureMatrix& data,
                                         const KmeansConfig& cfg) {
  if (cfg.max_iters == 0) raise(ErrorCode::ConfigError, "max_iters must be >= 1");
  if (cfg.restarts == 0) raise(ErrorCode::ConfigError, "restarts must be >= 1");
  if (cfg.tol < 0.0) raise(ErrorCode::ConfigError, "tol must be >= 0");
  check_finite(data);

  std::pair<Codebook, FitStats> best;
  bool have_best = false;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    auto run = lloyd_run(data, cfg, cfg.seed + r);
    if (!have_best ||
        run.first.trained_inertia < best.first.trained_inertia) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

UnitSequence assign(const Codebook& cb, const FeatureMatrix& features) {
  if (features.dim != cb.dim)
    raise(ErrorCode::DimMismatch,
          "features dim " + std::to_string(features.dim) + " != codebook dim " +
              std::to_string(cb.dim));
  UnitSequence units(features.n_frames);
  for (std::size_t i = 0; i < features.n_frames; ++i) {
    const float* f = features.frame(i);
    std::uint32_t best = 0;
    double best_d = sq_distance(f, cb.centroid(0), cb.dim);
    for (std::size_t j = 1; j < cb.k; ++j) {
      double d = sq_distance(f, cb.centroid(j), cb.dim);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::uint32_t>(j);
      }
    }
    units[i] = best;
  }
  return units;
}

double inertia(const Codebook& cb, const FeatureMatrix& data) {
  if (data.dim != cb.dim)
    raise(ErrorCode::DimMismatch,
          "data dim " + std::to_string(data.dim) + " != codebook dim " +
              std::to_string(cb.dim));
  double total = 0.0;
  for (std::size_t i = 0; i < data.n_frames; ++i) {
    const float* f = data.frame(i);
    double best_d = sq_distance(f, cb.centroid(0), cb.dim);
    for (std::size_t j = 1; j < cb.k; ++j)
      best_d = std::min(best_d, sq_distance(f, cb.centroid(j), cb.dim));
    total += best_d;
  }
  return total;
}

namespace {
constexpr char kCodebookMagic[4] = {'K', 'M', 'C', 'B'};
constexpr std::uint32_t kCodebookVersion = 1;
}  // namespace

Codebook read_codebook(const std::string& path) {
  auto is = detail::open_input(path);
  detail::expect_magic(is, kCodebookMagic, path);
  auto version = detail::read_pod<std::uint32_t>(is, path + ": version");
  if (version != kCodebookVersion)
    raise(ErrorCode::UnknownVersion,
          path + ": codebook version " + std::to_string(version));
  Codebook cb;
  cb.k = detail::read_pod<std::uint32_t>(is, path + ": k");
  cb.dim = detail::read_pod<std::uint32_t>(is, path + ": dim");
  if (cb.k == 0 || cb.dim == 0)
    raise(ErrorCode::DimZero, path + ": k and dim must be >= 1");
  cb.seed = detail::read_pod<std::uint64_t>(is, path + ": seed");
  cb.trained_inertia = detail::read_pod<double>(is, path + ": inertia");
  cb.centroids.resize(cb.k * cb.dim);
  detail::read_bytes(is, cb.centroids.data(),
                     cb.centroids.size() * sizeof(float), path + ": centroids");
  detail::expect_eof(is, path);
  for (float v : cb.centroids)
    if (!std::isfinite(v))
      raise(ErrorCode::NonFiniteValue, path + ": non-finite centroid value");
  return cb;
}

void write_codebook(const std::string& path, const Codebook& cb) {
  if (cb.k == 0 || cb.dim == 0)
    raise(ErrorCode::DimZero, "codebook must have k >= 1 and dim >= 1");
  if (cb.centroids.size() != cb.k * cb.dim)
    raise(ErrorCode::DimMismatch, "centroid data length does not match k*dim");
  auto os = detail::open_output(path);
  detail::write_bytes(os, kCodebookMagic, 4);
  detail::write_pod<std::uint32_t>(os, kCodebookVersion);
  detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(cb.k));
  detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(cb.dim));
  detail::write_pod<std::uint64_t>(os, cb.seed);
  detail::write_pod<double>(os, cb.trained_inertia);
  detail::write_bytes(os, cb.centroids.data(),
                      cb.centroids.size() * sizeof(float));
}

}  // namespace psl
