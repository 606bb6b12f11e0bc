#pragma once

// Turns each order-equivalence statement into a falsifiable bounded-ratio
// experiment: sweep configurations, compute (MC estimate of the expected
// maximum) / (the matching norm), and summarise the spread of the ratios
// against a pre-registered threshold.

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mc.hpp"

namespace om {

enum class TheoremId { T1, T2, T3, Corollary, T5, T6, GaussNotL2, FuncEquivT2, FuncEquivT3 };

const char* theorem_name(TheoremId id);

struct StudyRow {
  std::string config;
  std::size_t n = 0;
  std::size_t m = 0;
  double p = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double mc_value = 0.0;
  double mc_spread = 0.0;
  double norm_value = 0.0;
  double ratio = 0.0;
};

struct RatioStudy {
  // How the pass flag is derived from the rows.
  enum class Criterion {
    SpreadBelow,       // ratio_max / ratio_min <= threshold
    MaxBelow,          // ratio_max <= threshold (one-sided bounds)
    DecreasingHalved,  // ratios strictly decrease and last/first <= threshold
  };

  TheoremId theorem;
  std::vector<StudyRow> rows;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double ratio_spread = 0.0;
  double threshold = 0.0;
  Criterion criterion = Criterion::SpreadBelow;
  bool pass = false;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
  void write_csv_file(const std::string& path) const;
  void write_json_file(const std::string& path) const;
};

// Single-layer study: ratio of E max_i |a_i xi_i| to ||a||_M over a sweep of
// dimensions, trials and the three stressed coefficient families. The model
// and M must be a generating pair: log-gamma(1,p) with its closed form or
// s^p, Gaussian with its closed form, stable(p) with s^p.
RatioStudy study_thm1(const Distribution& model, const OrliczFunction& m,
                      std::span<const std::size_t> ns, std::uint32_t trials_per_n,
                      const McConfig& cfg);

// study_thm1 for log-gamma(1,2) against the plain l_2 norm.
RatioStudy study_corollary(std::span<const std::size_t> ns, std::uint32_t trials_per_n,
                           const McConfig& cfg);

enum class ProductTheorem { T2, T3, T5, T6 };

// Product-space studies. The law bound to the inner (row) index i always
// generates the inner norm, the law on the outer (column) index j the outer
// norm:
//   T2(p,q): q-stable rows / l_q inner, p-stable columns / l_p outer
//   T3(p):   Gaussian rows / Gaussian-Orlicz inner, p-stable columns / l_p
//   T5(p):   log-gamma(1,2) rows / l_2 inner, p-stable columns / l_p
//   T6:      Gaussian rows / Gaussian-Orlicz inner, log-gamma(1,2) cols / l_2
RatioStudy study_product(ProductTheorem theorem, double p, double q,
                         std::span<const std::pair<std::size_t, std::size_t>> shapes,
                         std::uint32_t trials, const McConfig& cfg);

// E max of n unit-weight Gaussians against sqrt(n): the ratio must fall in n.
// The second study is the control, the same sweep against the Gaussian
// Orlicz norm, which must stay spread-bounded.
std::pair<RatioStudy, RatioStudy> study_gaussian_not_l2(std::span<const std::size_t> ns,
                                                        const McConfig& cfg);

// Function-level checks behind the product-space proofs. T2proof: quadrature
// of the power-law-tail integral against s^(q/p), bounded above by 3 on
// (0,1]. T3proof: the powered Gaussian tail integral at s^p against the
// plain one at s, spread-bounded by 50.
RatioStudy study_function_equiv_t2(double p, double q, std::span<const double> s_grid,
                                   const QuadratureSpec& spec = {});
RatioStudy study_function_equiv_t3(double p, std::span<const double> s_grid,
                                   const QuadratureSpec& spec = {});

// Pre-registered acceptance thresholds.
namespace thresholds {
inline constexpr double kThm1LogGamma = 2.5;
inline constexpr double kThm1Stable = 4.0;
inline constexpr double kThm1Gaussian = 3.0;
inline constexpr double kCorollary = 2.5;
inline constexpr double kProduct = 4.0;
inline constexpr double kGaussHalving = 0.5;
inline constexpr double kFuncT2MaxRatio = 3.0;
inline constexpr double kFuncT3Spread = 50.0;
}  // namespace thresholds

// Deterministic per-row seed derivation (splitmix-style avalanche).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

enum class CoeffFamily { Uniform, Geometric, Spike };
const char* coeff_family_name(CoeffFamily family);
std::vector<double> make_coeff_vector(CoeffFamily family, std::size_t n, RngStream& rng);
Matrix make_coeff_matrix(CoeffFamily family, std::size_t n, std::size_t m, RngStream& rng);

}  // namespace om
