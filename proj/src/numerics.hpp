#pragma once

// Deterministic numerical kernels shared by the whole library: adaptive
// Gauss-Kronrod quadrature on finite and semi-infinite intervals, monotone
// bisection, and the upper incomplete gamma function.

#include <functional>
#include <stdexcept>
#include <string>

namespace om {

// A parameter or argument outside the documented domain.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested operation is not defined for the given object (e.g. the density
// of a stable law).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root bracketing failed: g has the same sign at both endpoints.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A semi-infinite integral whose partial sums keep growing without decay.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature did not reach the requested tolerance. Carries the best
// estimate and a bound on its error so callers can decide what to do.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_bound)
      : std::runtime_error(what), best_(best_estimate), bound_(error_bound) {}
  double best_estimate() const noexcept { return best_; }
  double error_bound() const noexcept { return bound_; }

 private:
  double best_;
  double bound_;
};

// Analytic decay class of an integrand on [T, inf), used to pick the
// truncation point of semi-infinite integrals.
//   PowerLaw:  f(u) <= f(T) * (u/T)^-exponent   (exponent > 1)
//   ExpPower:  f(u) <= f(T) * exp(-rate * (u^beta - T^beta))
//   Auto:      no analytic bound; rely on octave-by-octave decay.
struct TailDecay {
  enum class Kind { Auto, PowerLaw, ExpPower };
  Kind kind = Kind::Auto;
  double exponent = 0.0;
  double beta = 0.0;
  double rate = 0.0;

  static TailDecay automatic() { return {}; }
  static TailDecay power_law(double exponent);
  static TailDecay exp_power(double beta, double rate);
  static TailDecay gaussian() { return exp_power(2.0, 0.5); }
};

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
  TailDecay tail_cutoff = TailDecay::automatic();

  void validate() const;  // throws DomainError on bad fields
};

using RealFn = std::function<double(double)>;

// Integral of f over [lo, hi]. Integrable endpoint singularities t^alpha,
// alpha > -1, are allowed at lo; they are detected by probing and removed by
// the substitution t = lo + tau^k.
double integrate(const RealFn& f, double lo, double hi, const QuadratureSpec& spec = {});

// Integral of f over [lo, inf) for nonnegative, eventually decreasing f.
// The truncation point is chosen so that the remainder, bounded through
// spec.tail_cutoff, falls below the tolerances.
double integrate_to_infinity(const RealFn& f, double lo, const QuadratureSpec& spec = {});

// Root of a continuous monotone g on [lo, hi] with a sign change. Returns the
// bracket midpoint once the bracket width is below rel_tol * |midpoint|.
double bisect_monotone(const RealFn& g, double lo, double hi, double rel_tol);

// Upper incomplete gamma Gamma(t, x) = int_x^inf u^(t-1) e^-u du, t > 0,
// x >= 0. Series for x < t + 1, continued fraction otherwise.
double upper_incomplete_gamma(double t, double x);

// log(Gamma(t, x)), stable for large x where Gamma(t, x) underflows.
double log_upper_incomplete_gamma(double t, double x);

}  // namespace om
