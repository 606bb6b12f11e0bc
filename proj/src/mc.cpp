#include "mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace om {

void McConfig::validate() const {
  if (samples < 100) throw DomainError("mc config requires samples >= 100");
  if (replicates < 1 || replicates % 2 == 0)
    throw DomainError("mc config requires an odd replicate count >= 1");
}

void parallel_for_indexed(std::size_t count, std::uint32_t workers,
                          const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  std::uint32_t n_threads = workers == 0 ? std::thread::hardware_concurrency() : workers;
  if (n_threads == 0) n_threads = 1;
  n_threads = static_cast<std::uint32_t>(std::min<std::size_t>(n_threads, count));

  if (n_threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::uint32_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

double quantile_type7(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

McEstimate aggregate(std::vector<double> replicate_means, std::uint64_t samples_per_rep) {
  McEstimate est;
  est.samples_total = samples_per_rep * replicate_means.size();
  std::sort(replicate_means.begin(), replicate_means.end());
  if (replicate_means.size() == 1) {
    est.value = replicate_means[0];
    est.spread = 0.0;
    est.estimator = Estimator::Mean;
    return est;
  }
  est.value = replicate_means[replicate_means.size() / 2];
  est.spread = 0.5 * (quantile_type7(replicate_means, 0.75) -
                      quantile_type7(replicate_means, 0.25));
  est.estimator = Estimator::MedianOfMeans;
  return est;
}

}  // namespace

McEstimate expected_max_single(const Distribution& model, std::span<const double> a,
                               const McConfig& cfg) {
  cfg.validate();
  if (a.empty()) throw DomainError("expected_max_single needs at least one coefficient");
  for (double v : a)
    if (!std::isfinite(v)) throw DomainError("coefficients must be finite");

  const std::size_t n = a.size();
  std::vector<double> means(cfg.replicates, 0.0);
  parallel_for_indexed(cfg.replicates, cfg.workers, [&](std::size_t r) {
    RngStream rng(cfg.master_seed, r);
    std::vector<double> draws(n);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
      model.sample(rng, draws);
      double mx = 0.0;
      for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, std::fabs(a[i] * draws[i]));
      acc += mx;
    }
    means[r] = acc / static_cast<double>(cfg.samples);
  });
  return aggregate(std::move(means), cfg.samples);
}

McEstimate expected_max_product(const Distribution& model1, const Distribution& model2,
                                const Matrix& a, const McConfig& cfg) {
  cfg.validate();
  a.validate();

  const std::size_t n = a.rows;
  const std::size_t m = a.cols;
  // Column-contiguous copy for the inner max over i.
  std::vector<double> by_column(n * m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) by_column[j * n + i] = a.at(i, j);

  std::vector<double> means(cfg.replicates, 0.0);
  parallel_for_indexed(cfg.replicates, cfg.workers, [&](std::size_t r) {
    RngStream rng(cfg.master_seed, r);
    std::vector<double> xi(n), eta(m);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
      model1.sample(rng, xi);
      model2.sample(rng, eta);
      double mx = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double* col = by_column.data() + j * n;
        double colmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) colmax = std::max(colmax, std::fabs(col[i] * xi[i]));
        mx = std::max(mx, colmax * std::fabs(eta[j]));
      }
      acc += mx;
    }
    means[r] = acc / static_cast<double>(cfg.samples);
  });
  return aggregate(std::move(means), cfg.samples);
}

const char* estimator_name(Estimator e) {
  return e == Estimator::Mean ? "Mean" : "MedianOfMeans";
}

}  // namespace om
