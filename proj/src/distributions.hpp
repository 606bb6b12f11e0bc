#pragma once

// The random-variable models: log-gamma(1,p) (a Pareto law on [1,inf) with
// tail y^-p), the standard Gaussian, and the symmetric p-stable law with
// characteristic function exp(-|theta|^p). Each model exposes its tail,
// density, mean of |xi|, and a deterministic sampler.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "numerics.hpp"

namespace om {

// Deterministic stream of pseudo-random numbers. Equal (seed, stream_id)
// pairs produce bit-identical sequences; distinct stream ids decorrelate
// parallel workers.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1); safe to feed into logs and negative powers.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

enum class DistKind { LogGamma1p, Gaussian, SymmetricStable };

class Distribution {
 public:
  static Distribution log_gamma_1p(double p);      // p > 1
  static Distribution gaussian();
  static Distribution symmetric_stable(double p);  // p in (1, 2)

  DistKind kind() const { return kind_; }
  // Stability/shape index; 0 for the Gaussian.
  double index() const { return p_; }

  // P(|xi| >= y). Exact for LogGamma1p and Gaussian; the empirical tail of a
  // large cached calibration sample for the stable law.
  double tail(double y) const;
  bool tail_exact() const { return kind_ != DistKind::SymmetricStable; }

  double density(double x) const;  // UnsupportedError for the stable law

  // E|xi|: closed form for LogGamma1p (p/(p-1)) and Gaussian (sqrt(2/pi));
  // a median-of-means estimate over the calibration sample for the stable
  // law, with its spread reported by mean_abs_spread().
  double mean_abs() const;
  double mean_abs_spread() const;

  void sample(RngStream& rng, std::span<double> out) const;
  std::vector<double> sample(RngStream& rng, std::size_t count) const;

  // Decay class of the tail, used for quadrature truncation.
  TailDecay tail_decay() const;

 private:
  Distribution(DistKind kind, double p) : kind_(kind), p_(p) {}

  DistKind kind_;
  double p_;
};

const char* dist_kind_name(DistKind kind);

}  // namespace om
