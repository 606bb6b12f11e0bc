#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace om {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Values from the usual QUADPACK tables.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
  double resabs = 0.0;
};

PanelResult gauss_kronrod_15(const RealFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv1[7], fv2[7];
  const double fc = f(center);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  double resabs = std::fabs(resk);

  for (int idx = 0; idx < 7; ++idx) {
    const double dx = half * kXgk[idx];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[idx] = f1;
    fv2[idx] = f2;
    if (idx % 2 == 1) resg += kWg[idx / 2] * (f1 + f2);
    resk += kWgk[idx] * (f1 + f2);
    resabs += kWgk[idx] * (std::fabs(f1) + std::fabs(f2));
  }

  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int idx = 0; idx < 7; ++idx)
    resasc += kWgk[idx] * (std::fabs(fv1[idx] - reskh) + std::fabs(fv2[idx] - reskh));

  PanelResult out;
  out.value = resk * half;
  out.resabs = resabs * std::fabs(half);
  resasc *= std::fabs(half);

  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (out.resabs > kTiny / (50.0 * kEps)) err = std::max(err, 50.0 * kEps * out.resabs);
  out.error = err;
  return out;
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Core adaptive loop: bisect the worst panel until the accumulated error
// estimate meets max(abs_tol, rel_tol * |integral|).
double adaptive(const RealFn& f, double lo, double hi, const QuadratureSpec& spec) {
  std::priority_queue<Panel> queue;
  PanelResult first = gauss_kronrod_15(f, lo, hi);
  if (!std::isfinite(first.value))
    throw DomainError("integrand produced a non-finite value inside the interval");
  queue.push({lo, hi, first.value, first.error});
  double sum = first.value;
  double err = first.error;

  for (int iter = 1; iter < spec.max_subdivisions; ++iter) {
    if (err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(sum))) return sum;
    Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) break;  // interval exhausted by rounding
    queue.pop();
    PanelResult left = gauss_kronrod_15(f, worst.a, mid);
    PanelResult right = gauss_kronrod_15(f, mid, worst.b);
    if (!std::isfinite(left.value) || !std::isfinite(right.value))
      throw DomainError("integrand produced a non-finite value inside the interval");
    sum += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    queue.push({worst.a, mid, left.value, left.error});
    queue.push({mid, worst.b, right.value, right.error});
  }
  if (err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(sum))) return sum;
  throw AccuracyError("quadrature did not converge within max_subdivisions", sum, err);
}

// Probe f just above lo for power behaviour f ~ (t-lo)^alpha with alpha in
// (-1, 0). Returns the detected alpha, or NaN when no singular power fits.
double detect_left_power(const RealFn& f, double lo, double hi) {
  const double width = hi - lo;
  double alpha_prev = std::numeric_limits<double>::quiet_NaN();
  for (double scale : {1e-5, 1e-6}) {
    const double h = width * scale;
    const double v1 = f(lo + h);
    const double v2 = f(lo + 2.0 * h);
    const double v4 = f(lo + 4.0 * h);
    if (!std::isfinite(v1) || !std::isfinite(v2) || !std::isfinite(v4)) return alpha_prev;
    if (v1 == 0.0 || v2 == 0.0 || v4 == 0.0) return std::numeric_limits<double>::quiet_NaN();
    if ((v1 > 0) != (v2 > 0) || (v2 > 0) != (v4 > 0))
      return std::numeric_limits<double>::quiet_NaN();
    const double a1 = std::log2(std::fabs(v2 / v1));
    const double a2 = std::log2(std::fabs(v4 / v2));
    if (std::fabs(a1 - a2) > 0.1) return std::numeric_limits<double>::quiet_NaN();
    const double alpha = 0.5 * (a1 + a2);
    if (!(alpha > -0.98 && alpha < -0.02)) return std::numeric_limits<double>::quiet_NaN();
    if (!std::isnan(alpha_prev) && std::fabs(alpha - alpha_prev) > 0.1)
      return std::numeric_limits<double>::quiet_NaN();
    alpha_prev = alpha;
  }
  return alpha_prev;
}

}  // namespace

TailDecay TailDecay::power_law(double exponent) {
  if (!(exponent > 1.0)) throw DomainError("power-law decay exponent must exceed 1");
  TailDecay d;
  d.kind = Kind::PowerLaw;
  d.exponent = exponent;
  return d;
}

TailDecay TailDecay::exp_power(double beta, double rate) {
  if (!(beta > 0.0) || !(rate > 0.0))
    throw DomainError("exp-power decay needs beta > 0 and rate > 0");
  TailDecay d;
  d.kind = Kind::ExpPower;
  d.beta = beta;
  d.rate = rate;
  return d;
}

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

double integrate(const RealFn& f, double lo, double hi, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("integration limits must be finite");
  if (lo > hi) throw DomainError("lower limit exceeds upper limit");
  if (lo == hi) return 0.0;

  const double alpha = detect_left_power(f, lo, hi);
  if (!std::isnan(alpha)) {
    // t = lo + tau^k turns (t-lo)^alpha into tau^(k(alpha+1)-1), smooth for
    // k >= 2/(alpha+1).
    const int k = std::clamp(static_cast<int>(std::ceil(2.0 / (1.0 + alpha))), 2, 16);
    const auto g = [&](double tau) {
      const double t = lo + std::pow(tau, k);
      if (t <= lo) return 0.0;
      return f(t) * k * std::pow(tau, k - 1);
    };
    return adaptive(g, 0.0, std::pow(hi - lo, 1.0 / k), spec);
  }
  return adaptive(f, lo, hi, spec);
}

namespace {

// Bound on int_T^inf f under the given decay class; NaN means "no bound".
double remainder_bound(const RealFn& f, double T, const TailDecay& decay) {
  const double fT = f(T);
  if (fT == 0.0) return 0.0;
  if (!std::isfinite(fT)) return std::numeric_limits<double>::infinity();
  switch (decay.kind) {
    case TailDecay::Kind::PowerLaw:
      return std::fabs(fT) * T / (decay.exponent - 1.0);
    case TailDecay::Kind::ExpPower: {
      const double xb = decay.rate * std::pow(T, decay.beta);
      const double log_rem = std::log(std::fabs(fT)) + xb +
                             log_upper_incomplete_gamma(1.0 / decay.beta, xb) -
                             std::log(decay.beta) - std::log(decay.rate) / decay.beta;
      return std::exp(log_rem);
    }
    case TailDecay::Kind::Auto:
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

double integrate_to_infinity(const RealFn& f, double lo, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(lo)) throw DomainError("lower limit must be finite");
  if (spec.tail_cutoff.kind == TailDecay::Kind::PowerLaw) {
    // factory already enforces exponent > 1; an exponent <= 1 diverges
    if (!(spec.tail_cutoff.exponent > 1.0))
      throw DomainError("power-law tail with exponent <= 1 does not converge");
  }

  QuadratureSpec piece = spec;
  piece.rel_tol = 0.5 * spec.rel_tol;

  double sum = 0.0;
  double left = lo;
  double width = std::max(1.0, 0.5 * std::fabs(lo));
  double prev_piece = std::numeric_limits<double>::infinity();
  int non_decaying = 0;
  double last_bound = std::numeric_limits<double>::infinity();

  for (int k = 0; k < 1024; ++k) {
    piece.abs_tol = spec.abs_tol / (8.0 * (k + 1.0) * (k + 1.0));
    const double right = left + width;
    const double part = adaptive(f, left, right, piece);
    sum += part;
    left = right;
    width *= 2.0;

    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(sum));
    const double bound = remainder_bound(f, left, spec.tail_cutoff);
    last_bound = bound;
    if (!std::isnan(bound) && bound <= 0.5 * tol) return sum;

    if (std::isnan(bound) && k > 0) {
      // No analytic bound: require geometric decay of the octave sums and
      // estimate the remainder from the observed ratio.
      const double ap = std::fabs(part);
      const double app = std::fabs(prev_piece);
      if (app > 0.0 && ap < app) {
        const double r = ap / app;
        const double rem_est = ap * r / (1.0 - r);
        last_bound = rem_est;
        if (rem_est <= 0.5 * tol) return sum;
      }
    }

    if (std::fabs(part) >= std::fabs(prev_piece) * 0.999) {
      if (++non_decaying >= 8)
        throw DivergenceError("semi-infinite integrand shows no tail decay");
    } else {
      non_decaying = 0;
    }
    if (std::fabs(sum) > 1e12)
      throw DivergenceError("semi-infinite integral exceeded the divergence ceiling");
    prev_piece = part;
  }
  throw AccuracyError("semi-infinite integral did not meet the tolerance", sum, last_bound);
}

double bisect_monotone(const RealFn& g, double lo, double hi, double rel_tol) {
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw DomainError("bisection needs a finite interval with lo < hi");

  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    throw BracketError("g has the same sign at both bracket endpoints");

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 4096; ++iter) {
    mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::max(std::fabs(mid), kTiny)) return mid;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return mid;
}

namespace {

// Continued fraction for Gamma(t, x) * exp(x - t log x), x >= t + 1 (Lentz).
double upper_gamma_cf(double t, double x) {
  const double fpmin = kTiny / kEps;
  double b = x + 1.0 - t;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 20000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - t);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= 2.0 * kEps) return h;
  }
  throw AccuracyError("incomplete gamma continued fraction did not converge", h, 1.0);
}

// Series for the regularised lower gamma sum: gamma(t,x) = x^t e^-x * sum.
double lower_gamma_series_sum(double t, double x) {
  double term = 1.0 / t;
  double sum = term;
  for (int k = 1; k <= 20000; ++k) {
    term *= x / (t + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) return sum;
  }
  throw AccuracyError("incomplete gamma series did not converge", sum, 1.0);
}

}  // namespace

double upper_incomplete_gamma(double t, double x) {
  if (!(t > 0.0) || !(x >= 0.0) || !std::isfinite(t) || !std::isfinite(x))
    throw DomainError("upper_incomplete_gamma requires t > 0 and x >= 0");
  if (x == 0.0) return std::tgamma(t);
  if (x < t + 1.0) {
    const double lower = lower_gamma_series_sum(t, x) * std::exp(t * std::log(x) - x);
    return std::tgamma(t) - lower;
  }
  return std::exp(t * std::log(x) - x) * upper_gamma_cf(t, x);
}

double log_upper_incomplete_gamma(double t, double x) {
  if (!(t > 0.0) || !(x >= 0.0) || !std::isfinite(t) || !std::isfinite(x))
    throw DomainError("log_upper_incomplete_gamma requires t > 0 and x >= 0");
  if (x == 0.0) return std::lgamma(t);
  if (x < t + 1.0) return std::log(upper_incomplete_gamma(t, x));
  return t * std::log(x) - x + std::log(upper_gamma_cf(t, x));
}

}  // namespace om
