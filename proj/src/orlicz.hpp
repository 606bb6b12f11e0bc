#pragma once

// Orlicz functions and the norms they generate: closed forms for the
// Gaussian and log-gamma laws, the power family s^p, tail-integral
// quadrature for any model with an exact tail, power composition, the
// Luxemburg norm, and plain/mixed l_p norms.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "distributions.hpp"
#include "numerics.hpp"

namespace om {

// Closed-form Orlicz function generated by standard Gaussians:
// 0 at 0, exp(-3/(2 s^2)) on (0,1), exp(-3/2)(3s - 2) for s >= 1.
double gaussian_m(double s);

// Closed-form Orlicz function generated by log-gamma(1,p), p > 1:
// s^p/(p-1) for s <= 1, (p/(p-1)) s - 1 beyond.
double log_gamma_m(double p, double s);

// M(s) from the tail-integral representation
//   M(s) = int_0^s [ (1/t) P(|xi| >= 1/t) + int_{1/t}^inf P(|xi| >= u) du ] dt
// evaluated by composing integrate and integrate_to_infinity. Requires a
// model with an exact tail.
double orlicz_from_tail(const Distribution& model, double s, const QuadratureSpec& spec = {});

// Same integral with the tail of |xi|^power, i.e. P(|xi| >= u^(1/power)).
double orlicz_from_tail_powered(const Distribution& model, double power, double s,
                                const QuadratureSpec& spec = {});

class OrliczFunction {
 public:
  enum class Form { ClosedGaussian, ClosedLogGamma, Power, QuadratureBacked, PowerComposed };

  static OrliczFunction gaussian();
  static OrliczFunction log_gamma(double p);  // p > 1
  static OrliczFunction power(double p);      // p >= 1
  static OrliczFunction from_tail(const Distribution& model, const QuadratureSpec& spec = {});

  // The function s -> M_{xi^p}(s) for this M's generating law. Closed
  // log-gamma bases stay closed (exponent p0/p); power bases map to the
  // quadrature of the power-law tail u^{-q/p}; everything else becomes
  // quadrature-backed with the tail of |xi|^p.
  OrliczFunction power_composed(double p) const;

  // Exact evaluation (closed form or fresh quadrature).
  double operator()(double s) const;

  // Evaluation through a memoised monotone interpolant for quadrature-backed
  // forms; identical to operator() for closed forms. Built lazily, thread
  // safe, used by the norm solver.
  double fast(double s) const;

  Form form() const;
  double param() const;  // p of ClosedLogGamma/Power; composition power otherwise

 private:
  struct Impl;
  explicit OrliczFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Real n x m coefficient matrix, rows indexed by i (the inner index),
// columns by j (the outer index). Vectors are n x 1.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t n, std::size_t m, double fill = 0.0);
  static Matrix from_vector(std::span<const double> x);

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::vector<double> column(std::size_t j) const;
  void validate() const;  // finite entries, rows, cols >= 1
};

// Luxemburg norm ||x||_M = inf{ t > 0 : sum M(|x_i|/t) <= 1 }, solved by
// monotone bisection to relative tolerance 1e-10.
double luxemburg_norm(const OrliczFunction& m, std::span<const double> x);

// (sum |x_i|^p)^(1/p), p >= 1.
double lp_norm(std::span<const double> x, double p);

// Inner norm of a mixed norm: either l_q or an Orlicz norm.
struct InnerNorm {
  static InnerNorm lq(double q);
  static InnerNorm orlicz(OrliczFunction m);

  bool is_lq() const { return !m_.has_value(); }
  double q() const { return q_; }
  const OrliczFunction& orlicz_fn() const { return *m_; }
  double eval(std::span<const double> column) const;

 private:
  InnerNorm() = default;
  double q_ = 2.0;
  std::optional<OrliczFunction> m_;
};

// Outer l_p norm over columns j of the inner norms over i, matching the
// matrix orientation above.
double mixed_norm(const Matrix& a, double outer_p, const InnerNorm& inner);

}  // namespace om
