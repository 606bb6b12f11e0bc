#include "distributions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace om {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

namespace {

constexpr std::size_t kCalibrationSize = 10'000'000;
constexpr std::uint64_t kCalibrationSeed = 0x0c0ffee0d15ab1e5ULL;
constexpr int kCalibrationBlocks = 101;

double stable_draw(RngStream& rng, double p) {
  // Chambers-Mallows-Stuck, symmetric case, standardised so the
  // characteristic function is exp(-|theta|^p).
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = -std::log(rng.uniform_open());
  const double a = p * v;
  return std::sin(a) / std::pow(std::cos(v), 1.0 / p) *
         std::pow(std::cos(v - a) / w, (1.0 - p) / p);
}

// Sorted |draws| plus a median-of-means estimate of E|xi|, built once per
// stability index from a fixed seed.
struct StableCalibration {
  std::vector<float> sorted_abs;
  double mean_abs = 0.0;
  double mean_abs_spread = 0.0;
};

double quantile_type7(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

const StableCalibration& stable_calibration(double p) {
  static std::mutex mutex;
  static std::map<double, std::unique_ptr<StableCalibration>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(p);
  if (it != cache.end()) return *it->second;

  auto cal = std::make_unique<StableCalibration>();
  cal->sorted_abs.resize(kCalibrationSize);
  RngStream rng(kCalibrationSeed, std::bit_cast<std::uint64_t>(p));

  std::vector<double> block_means(kCalibrationBlocks, 0.0);
  const std::size_t base = kCalibrationSize / kCalibrationBlocks;
  for (std::size_t i = 0; i < kCalibrationSize; ++i) {
    const double x = std::fabs(stable_draw(rng, p));
    cal->sorted_abs[i] = static_cast<float>(x);
    block_means[std::min<std::size_t>(i / base, kCalibrationBlocks - 1)] += x;
  }
  for (int b = 0; b < kCalibrationBlocks; ++b) {
    const std::size_t size =
        (b == kCalibrationBlocks - 1) ? kCalibrationSize - base * (kCalibrationBlocks - 1) : base;
    block_means[b] /= static_cast<double>(size);
  }
  std::sort(block_means.begin(), block_means.end());
  cal->mean_abs = block_means[kCalibrationBlocks / 2];
  cal->mean_abs_spread =
      0.5 * (quantile_type7(block_means, 0.75) - quantile_type7(block_means, 0.25));
  std::sort(cal->sorted_abs.begin(), cal->sorted_abs.end());

  auto& slot = cache[p];
  slot = std::move(cal);
  return *slot;
}

}  // namespace

Distribution Distribution::log_gamma_1p(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw DomainError("log-gamma(1,p) requires p > 1 for a finite first moment");
  return Distribution(DistKind::LogGamma1p, p);
}

Distribution Distribution::gaussian() { return Distribution(DistKind::Gaussian, 0.0); }

Distribution Distribution::symmetric_stable(double p) {
  if (!(p > 1.0) || !(p < 2.0))
    throw DomainError("symmetric stable law requires p in (1, 2)");
  return Distribution(DistKind::SymmetricStable, p);
}

double Distribution::tail(double y) const {
  if (!(y >= 0.0)) throw DomainError("tail argument must be nonnegative");
  switch (kind_) {
    case DistKind::LogGamma1p:
      return y <= 1.0 ? 1.0 : std::pow(y, -p_);
    case DistKind::Gaussian:
      // P(|xi| >= y) = Gamma(1/2, y^2/2) / sqrt(pi).
      return y == 0.0 ? 1.0
                      : upper_incomplete_gamma(0.5, 0.5 * y * y) * std::numbers::inv_sqrtpi;
    case DistKind::SymmetricStable: {
      const auto& cal = stable_calibration(p_);
      const auto it =
          std::lower_bound(cal.sorted_abs.begin(), cal.sorted_abs.end(), static_cast<float>(y));
      return static_cast<double>(cal.sorted_abs.end() - it) /
             static_cast<double>(cal.sorted_abs.size());
    }
  }
  throw DomainError("unknown distribution kind");
}

double Distribution::density(double x) const {
  switch (kind_) {
    case DistKind::LogGamma1p:
      return x < 1.0 ? 0.0 : p_ * std::pow(x, -p_ - 1.0);
    case DistKind::Gaussian:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    case DistKind::SymmetricStable:
      throw UnsupportedError("the stable density has no closed form here");
  }
  throw DomainError("unknown distribution kind");
}

double Distribution::mean_abs() const {
  switch (kind_) {
    case DistKind::LogGamma1p:
      return p_ / (p_ - 1.0);
    case DistKind::Gaussian:
      return std::sqrt(2.0 / std::numbers::pi);
    case DistKind::SymmetricStable:
      return stable_calibration(p_).mean_abs;
  }
  throw DomainError("unknown distribution kind");
}

double Distribution::mean_abs_spread() const {
  return kind_ == DistKind::SymmetricStable ? stable_calibration(p_).mean_abs_spread : 0.0;
}

void Distribution::sample(RngStream& rng, std::span<double> out) const {
  switch (kind_) {
    case DistKind::LogGamma1p: {
      const double inv_p = -1.0 / p_;
      for (double& v : out) v = std::pow(rng.uniform_open(), inv_p);
      return;
    }
    case DistKind::Gaussian: {
      // Marsaglia polar; a leftover half-pair at the end is discarded so the
      // stream state depends only on the number of draws requested.
      std::size_t i = 0;
      while (i < out.size()) {
        double u, v, s;
        do {
          u = 2.0 * rng.uniform01() - 1.0;
          v = 2.0 * rng.uniform01() - 1.0;
          s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        out[i++] = u * factor;
        if (i < out.size()) out[i++] = v * factor;
      }
      return;
    }
    case DistKind::SymmetricStable: {
      for (double& v : out) v = stable_draw(rng, p_);
      return;
    }
  }
  throw DomainError("unknown distribution kind");
}

std::vector<double> Distribution::sample(RngStream& rng, std::size_t count) const {
  if (count < 1) throw DomainError("sample count must be >= 1");
  std::vector<double> out(count);
  sample(rng, std::span<double>(out));
  return out;
}

TailDecay Distribution::tail_decay() const {
  switch (kind_) {
    case DistKind::LogGamma1p:
      return TailDecay::power_law(p_);
    case DistKind::Gaussian:
      return TailDecay::gaussian();
    case DistKind::SymmetricStable:
      return TailDecay::power_law(p_);
  }
  throw DomainError("unknown distribution kind");
}

const char* dist_kind_name(DistKind kind) {
  switch (kind) {
    case DistKind::LogGamma1p:
      return "loggamma";
    case DistKind::Gaussian:
      return "gaussian";
    case DistKind::SymmetricStable:
      return "stable";
  }
  return "unknown";
}

}  // namespace om
