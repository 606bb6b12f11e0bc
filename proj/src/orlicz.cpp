#include "orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace om {

double gaussian_m(double s) {
  if (!(s >= 0.0)) throw DomainError("gaussian_m requires s >= 0");
  if (s == 0.0) return 0.0;
  if (s < 1.0) return std::exp(-1.5 / (s * s));
  return std::exp(-1.5) * (3.0 * s - 2.0);
}

double log_gamma_m(double p, double s) {
  if (!(p > 1.0)) throw DomainError("log_gamma_m requires p > 1");
  if (!(s >= 0.0)) throw DomainError("log_gamma_m requires s >= 0");
  if (s <= 1.0) return std::pow(s, p) / (p - 1.0);
  return p / (p - 1.0) * s - 1.0;
}

namespace {

// Transformed tail u -> P(|xi|^power >= u) together with its decay class.
struct PoweredTail {
  Distribution model;
  double power;

  double operator()(double u) const {
    if (u <= 0.0) return 1.0;
    return model.tail(power == 1.0 ? u : std::pow(u, 1.0 / power));
  }

  TailDecay decay() const {
    TailDecay d = model.tail_decay();
    if (power == 1.0) return d;
    switch (d.kind) {
      case TailDecay::Kind::PowerLaw:
        return TailDecay::power_law(d.exponent / power);
      case TailDecay::Kind::ExpPower:
        return TailDecay::exp_power(d.beta / power, d.rate);
      case TailDecay::Kind::Auto:
      default:
        return d;
    }
  }
};

double orlicz_integral(const PoweredTail& tail, double s, const QuadratureSpec& spec) {
  if (!(s >= 0.0)) throw DomainError("orlicz function argument must be >= 0");
  if (s == 0.0) return 0.0;
  if (!tail.model.tail_exact())
    throw UnsupportedError(
        "tail-integral Orlicz function needs an exact tail; the stable law is "
        "modelled by the power function instead");
  spec.validate();

  QuadratureSpec inner = spec;
  inner.rel_tol = 0.1 * spec.rel_tol;
  inner.abs_tol = 0.01 * spec.abs_tol;
  inner.tail_cutoff = tail.decay();

  const RealFn tail_fn = [&tail](double u) { return tail(u); };
  const auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double inv = 1.0 / t;
    return inv * tail(inv) + integrate_to_infinity(tail_fn, inv, inner);
  };

  // The integrand kinks at t = 1 where 1/t crosses the support edge of
  // bounded-below laws; split there.
  if (s <= 1.0) return integrate(integrand, 0.0, s, spec);
  return integrate(integrand, 0.0, 1.0, spec) + integrate(integrand, 1.0, s, spec);
}

// Monotone piecewise-cubic interpolant (Fritsch-Carlson) in log-log space.
class MonotoneLogInterp {
 public:
  void build(std::vector<double> log_s, std::vector<double> log_m) {
    xs_ = std::move(log_s);
    ys_ = std::move(log_m);
    const std::size_t n = xs_.size();
    slopes_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = xs_[i + 1] - xs_[i];
      delta[i] = (ys_[i + 1] - ys_[i]) / h[i];
    }
    slopes_[0] = delta[0];
    slopes_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        slopes_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        slopes_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
  }

  bool usable() const { return xs_.size() >= 8; }
  double x_front() const { return xs_.front(); }
  double x_back() const { return xs_.back(); }

  double eval(double x) const {
    if (x >= xs_.back()) {
      return ys_.back() + slopes_.back() * (x - xs_.back());
    }
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - xs_.begin() - 1, 0));
    const double h = xs_[i + 1] - xs_[i];
    const double t = (x - xs_[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] + h11 * h * slopes_[i + 1];
  }

 private:
  std::vector<double> xs_, ys_, slopes_;
};

}  // namespace

struct OrliczFunction::Impl {
  Form form;
  double p = 0.0;                      // ClosedLogGamma / Power parameter
  std::optional<Distribution> model;   // QuadratureBacked / PowerComposed
  double power = 1.0;                  // exponent applied to the model's law
  QuadratureSpec spec;

  mutable std::once_flag memo_once;
  mutable MonotoneLogInterp memo;

  double eval(double s) const {
    switch (form) {
      case Form::ClosedGaussian:
        return gaussian_m(s);
      case Form::ClosedLogGamma:
        return log_gamma_m(p, s);
      case Form::Power:
        if (!(s >= 0.0)) throw DomainError("power Orlicz function requires s >= 0");
        return std::pow(s, p);
      case Form::QuadratureBacked:
      case Form::PowerComposed:
        return orlicz_integral(PoweredTail{*model, power}, s, spec);
    }
    throw DomainError("unknown Orlicz form");
  }

  bool closed() const {
    return form == Form::ClosedGaussian || form == Form::ClosedLogGamma || form == Form::Power;
  }

  void build_memo() const {
    constexpr double kGridMin = 1e-3;
    constexpr double kGridMax = 1e3;
    constexpr int kPointsPerDecade = 24;
    const int total = static_cast<int>(std::log10(kGridMax / kGridMin)) * kPointsPerDecade + 1;
    std::vector<double> log_s, log_m;
    log_s.reserve(total);
    log_m.reserve(total);
    for (int i = 0; i < total; ++i) {
      const double s =
          kGridMin * std::pow(10.0, static_cast<double>(i) / kPointsPerDecade);
      const double v = eval(s);
      if (!std::isfinite(v) || v < 1e-300) continue;
      log_s.push_back(std::log(s));
      log_m.push_back(std::log(v));
    }
    memo.build(std::move(log_s), std::move(log_m));
  }
};

OrliczFunction OrliczFunction::gaussian() {
  auto impl = std::make_shared<Impl>();
  impl->form = Form::ClosedGaussian;
  return OrliczFunction(std::move(impl));
}

OrliczFunction OrliczFunction::log_gamma(double p) {
  if (!(p > 1.0)) throw DomainError("log-gamma Orlicz function requires p > 1");
  auto impl = std::make_shared<Impl>();
  impl->form = Form::ClosedLogGamma;
  impl->p = p;
  return OrliczFunction(std::move(impl));
}

OrliczFunction OrliczFunction::power(double p) {
  if (!(p >= 1.0)) throw DomainError("power Orlicz function requires p >= 1");
  auto impl = std::make_shared<Impl>();
  impl->form = Form::Power;
  impl->p = p;
  return OrliczFunction(std::move(impl));
}

OrliczFunction OrliczFunction::from_tail(const Distribution& model, const QuadratureSpec& spec) {
  if (!model.tail_exact())
    throw UnsupportedError(
        "quadrature-backed Orlicz function needs an exact tail; use power(p) "
        "for the stable law");
  spec.validate();
  auto impl = std::make_shared<Impl>();
  impl->form = Form::QuadratureBacked;
  impl->model = model;
  impl->spec = spec;
  return OrliczFunction(std::move(impl));
}

OrliczFunction OrliczFunction::power_composed(double p) const {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("composition power must be positive");
  auto out = std::make_shared<Impl>();
  out->spec = impl_->spec;
  switch (impl_->form) {
    case Form::ClosedLogGamma: {
      const double composed = impl_->p / p;
      if (!(composed > 1.0))
        throw DomainError("power composition leaves no finite first moment (p0/p must exceed 1)");
      out->form = Form::ClosedLogGamma;
      out->p = composed;
      return OrliczFunction(std::move(out));
    }
    case Form::Power: {
      const double composed = impl_->p / p;
      if (!(composed > 1.0))
        throw DomainError("power composition leaves no finite first moment (q/p must exceed 1)");
      out->form = Form::PowerComposed;
      out->model = Distribution::log_gamma_1p(composed);
      out->power = 1.0;
      return OrliczFunction(std::move(out));
    }
    case Form::ClosedGaussian:
      out->form = Form::PowerComposed;
      out->model = Distribution::gaussian();
      out->power = p;
      return OrliczFunction(std::move(out));
    case Form::QuadratureBacked:
    case Form::PowerComposed:
      out->form = Form::PowerComposed;
      out->model = impl_->model;
      out->power = impl_->power * p;
      return OrliczFunction(std::move(out));
  }
  throw DomainError("unknown Orlicz form");
}

double OrliczFunction::operator()(double s) const { return impl_->eval(s); }

double OrliczFunction::fast(double s) const {
  if (impl_->closed()) return impl_->eval(s);
  if (!(s >= 0.0)) throw DomainError("orlicz function argument must be >= 0");
  if (s == 0.0) return 0.0;
  std::call_once(impl_->memo_once, [this] { impl_->build_memo(); });
  if (!impl_->memo.usable()) return impl_->eval(s);
  const double ls = std::log(s);
  if (ls < impl_->memo.x_front()) return impl_->eval(s);
  return std::exp(impl_->memo.eval(ls));
}

OrliczFunction::Form OrliczFunction::form() const { return impl_->form; }

double OrliczFunction::param() const {
  return impl_->closed() ? impl_->p : impl_->power;
}

Matrix::Matrix(std::size_t n, std::size_t m, double fill)
    : rows(n), cols(m), data(n * m, fill) {}

Matrix Matrix::from_vector(std::span<const double> x) {
  Matrix a(x.size(), 1);
  std::copy(x.begin(), x.end(), a.data.begin());
  return a;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> col(rows);
  for (std::size_t i = 0; i < rows; ++i) col[i] = at(i, j);
  return col;
}

void Matrix::validate() const {
  if (rows < 1 || cols < 1) throw DomainError("coefficient matrix needs rows >= 1 and cols >= 1");
  if (data.size() != rows * cols) throw DomainError("coefficient matrix storage size mismatch");
  for (double v : data)
    if (!std::isfinite(v)) throw DomainError("coefficient matrix entries must be finite");
}

namespace {

constexpr double kNormRelTol = 1e-13;

// Smallest s with M(s) >= 1, found by growing a bracket and bisecting.
double m_inverse_of_one(const OrliczFunction& m) {
  double s_hi = 1.0;
  for (int i = 0; i < 1100 && m.fast(s_hi) < 1.0; ++i) s_hi *= 2.0;
  double s_lo = s_hi * 0.5;
  while (s_lo > 1e-300 && m.fast(s_lo) >= 1.0) {
    s_hi = s_lo;
    s_lo *= 0.5;
  }
  return bisect_monotone([&](double s) { return m.fast(s) - 1.0; }, s_lo, s_hi, kNormRelTol);
}

}  // namespace

double luxemburg_norm(const OrliczFunction& m, std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("luxemburg_norm requires finite entries");
  if (x.empty()) return 0.0;

  double amax = 0.0;
  std::size_t nonzero = 0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = std::fabs(x[i]);
    if (v > 0.0) {
      ++nonzero;
      last_nonzero = i;
    }
    amax = std::max(amax, v);
  }
  if (nonzero == 0) return 0.0;
  if (nonzero == 1) return std::fabs(x[last_nonzero]) / m_inverse_of_one(m);

  const double n = static_cast<double>(x.size());

  // Bracket from M's own growth: M(s_hi) >= 1 makes the sum exceed 1 at
  // t = amax/s_hi, and M(s_lo) <= 1/n keeps it at or below 1 at
  // t = n*amax/s_lo.
  double s_hi = 1.0;
  for (int i = 0; i < 1100 && m.fast(s_hi) < 1.0; ++i) s_hi *= 2.0;
  double s_lo = 1.0;
  for (int i = 0; i < 1100 && m.fast(s_lo) > 1.0 / n; ++i) s_lo *= 0.5;

  const double t_lo = amax / s_hi;
  const double t_hi = n * amax / s_lo;
  const auto residual = [&](double t) {
    double sum = 0.0;
    for (double v : x) {
      if (v == 0.0) continue;
      sum += m.fast(std::fabs(v) / t);
    }
    return sum - 1.0;
  };
  return bisect_monotone(residual, t_lo, t_hi, kNormRelTol);
}

double lp_norm(std::span<const double> x, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("lp_norm requires finite entries");
  double amax = 0.0;
  for (double v : x) amax = std::max(amax, std::fabs(v));
  if (amax == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : x) {
    if (v == 0.0) continue;
    sum += std::pow(std::fabs(v) / amax, p);
  }
  return amax * std::pow(sum, 1.0 / p);
}

InnerNorm InnerNorm::lq(double q) {
  if (!(q >= 1.0)) throw DomainError("inner l_q norm requires q >= 1");
  InnerNorm inner;
  inner.q_ = q;
  return inner;
}

InnerNorm InnerNorm::orlicz(OrliczFunction m) {
  InnerNorm inner;
  inner.m_ = std::move(m);
  return inner;
}

double InnerNorm::eval(std::span<const double> column) const {
  return is_lq() ? lp_norm(column, q_) : luxemburg_norm(*m_, column);
}

double mixed_norm(const Matrix& a, double outer_p, const InnerNorm& inner) {
  if (!(outer_p >= 1.0)) throw DomainError("mixed norm requires outer_p >= 1");
  a.validate();
  std::vector<double> per_column(a.cols);
  std::vector<double> col(a.rows);
  for (std::size_t j = 0; j < a.cols; ++j) {
    for (std::size_t i = 0; i < a.rows; ++i) col[i] = a.at(i, j);
    per_column[j] = inner.eval(col);
  }
  return lp_norm(per_column, outer_p);
}

double orlicz_from_tail(const Distribution& model, double s, const QuadratureSpec& spec) {
  return orlicz_integral(PoweredTail{model, 1.0}, s, spec);
}

double orlicz_from_tail_powered(const Distribution& model, double power, double s,
                                const QuadratureSpec& spec) {
  if (!(power > 0.0)) throw DomainError("tail power must be positive");
  return orlicz_integral(PoweredTail{model, power}, s, spec);
}

}  // namespace om
