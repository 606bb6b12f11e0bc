#pragma once

// Monte Carlo estimation of E max_i |a_i xi_i| and of the product-space
// double expectation E E max_{i,j} |a_ij xi_i eta_j|. Aggregation is
// median-of-means across replicates: maxima driven by Pareto-like tails have
// infinite variance, so plain-mean confidence intervals are invalid.

#include <cstdint>
#include <span>

#include "distributions.hpp"
#include "orlicz.hpp"

namespace om {

struct McConfig {
  std::uint64_t samples = 100'000;  // per replicate, >= 100
  std::uint32_t replicates = 15;    // odd, >= 1
  std::uint64_t master_seed = 0;
  std::uint32_t workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

enum class Estimator { Mean, MedianOfMeans };

struct McEstimate {
  double value = 0.0;
  double spread = 0.0;  // half-width of the inter-replicate interquartile range
  std::uint64_t samples_total = 0;
  Estimator estimator = Estimator::MedianOfMeans;
};

// E max_i |a_i xi_i|. Replicate r draws from stream id r of the master seed,
// so results are bit-identical for any worker count.
McEstimate expected_max_single(const Distribution& model, std::span<const double> a,
                               const McConfig& cfg);

// E E max_{i,j} |a_ij xi_i eta_j| with one xi-vector (rows, model1) and one
// eta-vector (columns, model2) drawn per outcome; the products share factors
// and are dependent, exactly as sampled here.
McEstimate expected_max_product(const Distribution& model1, const Distribution& model2,
                                const Matrix& a, const McConfig& cfg);

// Deterministic parallel map: body(i) for i in [0, count), executed by up to
// `workers` threads. Exceptions propagate to the caller.
void parallel_for_indexed(std::size_t count, std::uint32_t workers,
                          const std::function<void(std::size_t)>& body);

const char* estimator_name(Estimator e);

}  // namespace om
