#include "orlicz_maxima.h"

#include <cstring>
#include <new>
#include <string>

#include "distributions.hpp"
#include "mc.hpp"
#include "orlicz.hpp"
#include "verify.hpp"

struct om_dist {
  om::Distribution d;
};

struct om_orlicz {
  om::OrliczFunction m;
};

struct om_study {
  om::RatioStudy s;
};

namespace {

thread_local std::string t_last_error;

template <typename Body>
om_status wrap(Body&& body) noexcept {
  try {
    body();
    t_last_error.clear();
    return OM_OK;
  } catch (const om::DomainError& e) {
    t_last_error = e.what();
    return OM_ERR_DOMAIN;
  } catch (const om::UnsupportedError& e) {
    t_last_error = e.what();
    return OM_ERR_UNSUPPORTED;
  } catch (const om::AccuracyError& e) {
    t_last_error = e.what();
    return OM_ERR_ACCURACY;
  } catch (const om::BracketError& e) {
    t_last_error = e.what();
    return OM_ERR_BRACKET;
  } catch (const om::DivergenceError& e) {
    t_last_error = e.what();
    return OM_ERR_DIVERGENCE;
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return OM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return OM_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return OM_ERR_INTERNAL;
  }
}

om_status invalid(const char* message) noexcept {
  t_last_error = message;
  return OM_ERR_INVALID_ARGUMENT;
}

om::McConfig to_config(const om_mc_config* cfg) {
  om::McConfig out;
  if (cfg != nullptr) {
    out.samples = cfg->samples;
    out.replicates = cfg->replicates;
    out.master_seed = cfg->master_seed;
    out.workers = cfg->workers;
  }
  return out;
}

void fill_estimate(const om::McEstimate& est, om_estimate* out) {
  out->value = est.value;
  out->spread = est.spread;
  out->samples_total = est.samples_total;
  out->median_of_means = est.estimator == om::Estimator::MedianOfMeans ? 1 : 0;
}

}  // namespace

extern "C" {

const char* om_version(void) { return OM_VERSION_STRING; }

const char* om_status_name(om_status status) {
  switch (status) {
    case OM_OK: return "ok";
    case OM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case OM_ERR_DOMAIN: return "domain error";
    case OM_ERR_UNSUPPORTED: return "unsupported operation";
    case OM_ERR_ACCURACY: return "accuracy failure";
    case OM_ERR_BRACKET: return "bracketing failure";
    case OM_ERR_DIVERGENCE: return "divergence detected";
    case OM_ERR_IO: return "i/o error";
    case OM_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* om_last_error_message(void) { return t_last_error.c_str(); }

om_status om_dist_create_loggamma(double p, om_dist** out) {
  if (out == nullptr) return invalid("out must not be null");
  return wrap([&] { *out = new om_dist{om::Distribution::log_gamma_1p(p)}; });
}

om_status om_dist_create_gaussian(om_dist** out) {
  if (out == nullptr) return invalid("out must not be null");
  return wrap([&] { *out = new om_dist{om::Distribution::gaussian()}; });
}

om_status om_dist_create_stable(double p, om_dist** out) {
  if (out == nullptr) return invalid("out must not be null");
  return wrap([&] { *out = new om_dist{om::Distribution::symmetric_stable(p)}; });
}

void om_dist_free(om_dist* dist) { delete dist; }

om_status om_dist_tail(const om_dist* dist, double y, double* value, int* exact) {
  if (dist == nullptr || value == nullptr) return invalid("dist and value must not be null");
  return wrap([&] {
    *value = dist->d.tail(y);
    if (exact != nullptr) *exact = dist->d.tail_exact() ? 1 : 0;
  });
}

om_status om_dist_density(const om_dist* dist, double x, double* value) {
  if (dist == nullptr || value == nullptr) return invalid("dist and value must not be null");
  return wrap([&] { *value = dist->d.density(x); });
}

om_status om_dist_mean_abs(const om_dist* dist, double* value, double* spread) {
  if (dist == nullptr || value == nullptr) return invalid("dist and value must not be null");
  return wrap([&] {
    *value = dist->d.mean_abs();
    if (spread != nullptr) *spread = dist->d.mean_abs_spread();
  });
}

om_status om_dist_sample(const om_dist* dist, uint64_t seed, uint64_t stream_id, size_t count,
                         double* out) {
  if (dist == nullptr || out == nullptr) return invalid("dist and out must not be null");
  if (count == 0) return invalid("count must be >= 1");
  return wrap([&] {
    om::RngStream rng(seed, stream_id);
    dist->d.sample(rng, std::span<double>(out, count));
  });
}

om_status om_orlicz_create_gaussian(om_orlicz** out) {
  if (out == nullptr) return invalid("out must not be null");
  return wrap([&] { *out = new om_orlicz{om::OrliczFunction::gaussian()}; });
}

om_status om_orlicz_create_loggamma(double p, om_orlicz** out) {
  if (out == nullptr) return invalid("out must not be null");
  return wrap([&] { *out = new om_orlicz{om::OrliczFunction::log_gamma(p)}; });
}

om_status om_orlicz_create_power(double p, om_orlicz** out) {
  if (out == nullptr) return invalid("out must not be null");
  return wrap([&] { *out = new om_orlicz{om::OrliczFunction::power(p)}; });
}

om_status om_orlicz_create_from_tail(const om_dist* dist, om_orlicz** out) {
  if (dist == nullptr || out == nullptr) return invalid("dist and out must not be null");
  return wrap([&] { *out = new om_orlicz{om::OrliczFunction::from_tail(dist->d)}; });
}

om_status om_orlicz_create_power_composed(const om_orlicz* base, double power, om_orlicz** out) {
  if (base == nullptr || out == nullptr) return invalid("base and out must not be null");
  return wrap([&] { *out = new om_orlicz{base->m.power_composed(power)}; });
}

void om_orlicz_free(om_orlicz* m) { delete m; }

om_status om_orlicz_eval(const om_orlicz* m, double s, double* value) {
  if (m == nullptr || value == nullptr) return invalid("m and value must not be null");
  return wrap([&] { *value = m->m(s); });
}

om_status om_luxemburg_norm(const om_orlicz* m, const double* x, size_t n, double* value) {
  if (m == nullptr || x == nullptr || value == nullptr)
    return invalid("m, x and value must not be null");
  if (n == 0) return invalid("n must be >= 1");
  return wrap([&] { *value = om::luxemburg_norm(m->m, std::span<const double>(x, n)); });
}

om_status om_lp_norm(const double* x, size_t n, double p, double* value) {
  if (x == nullptr || value == nullptr) return invalid("x and value must not be null");
  if (n == 0) return invalid("n must be >= 1");
  return wrap([&] { *value = om::lp_norm(std::span<const double>(x, n), p); });
}

om_status om_mixed_norm_lq(const double* a, size_t n, size_t m, double outer_p, double inner_q,
                           double* value) {
  if (a == nullptr || value == nullptr) return invalid("a and value must not be null");
  if (n == 0 || m == 0) return invalid("matrix needs n >= 1 and m >= 1");
  return wrap([&] {
    om::Matrix mat(n, m);
    std::memcpy(mat.data.data(), a, n * m * sizeof(double));
    *value = om::mixed_norm(mat, outer_p, om::InnerNorm::lq(inner_q));
  });
}

om_status om_mixed_norm_orlicz(const double* a, size_t n, size_t m, double outer_p,
                               const om_orlicz* inner, double* value) {
  if (a == nullptr || inner == nullptr || value == nullptr)
    return invalid("a, inner and value must not be null");
  if (n == 0 || m == 0) return invalid("matrix needs n >= 1 and m >= 1");
  return wrap([&] {
    om::Matrix mat(n, m);
    std::memcpy(mat.data.data(), a, n * m * sizeof(double));
    *value = om::mixed_norm(mat, outer_p, om::InnerNorm::orlicz(inner->m));
  });
}

om_mc_config om_mc_config_default(void) {
  om_mc_config cfg;
  cfg.samples = 100000;
  cfg.replicates = 15;
  cfg.master_seed = 0;
  cfg.workers = 0;
  return cfg;
}

om_status om_expected_max_single(const om_dist* dist, const double* a, size_t n,
                                 const om_mc_config* cfg, om_estimate* out) {
  if (dist == nullptr || a == nullptr || out == nullptr)
    return invalid("dist, a and out must not be null");
  if (n == 0) return invalid("n must be >= 1");
  return wrap([&] {
    const om::McEstimate est =
        om::expected_max_single(dist->d, std::span<const double>(a, n), to_config(cfg));
    fill_estimate(est, out);
  });
}

om_status om_expected_max_product(const om_dist* dist1, const om_dist* dist2, const double* a,
                                  size_t n, size_t m, const om_mc_config* cfg, om_estimate* out) {
  if (dist1 == nullptr || dist2 == nullptr || a == nullptr || out == nullptr)
    return invalid("dist1, dist2, a and out must not be null");
  if (n == 0 || m == 0) return invalid("matrix needs n >= 1 and m >= 1");
  return wrap([&] {
    om::Matrix mat(n, m);
    std::memcpy(mat.data.data(), a, n * m * sizeof(double));
    const om::McEstimate est = om::expected_max_product(dist1->d, dist2->d, mat, to_config(cfg));
    fill_estimate(est, out);
  });
}

om_status om_study_thm1(const om_dist* dist, const om_orlicz* m, const size_t* ns,
                        size_t ns_count, uint32_t trials_per_n, const om_mc_config* cfg,
                        om_study** out) {
  if (dist == nullptr || m == nullptr || ns == nullptr || out == nullptr)
    return invalid("dist, m, ns and out must not be null");
  if (ns_count == 0) return invalid("ns_count must be >= 1");
  return wrap([&] {
    *out = new om_study{om::study_thm1(dist->d, m->m, std::span<const std::size_t>(ns, ns_count),
                                       trials_per_n, to_config(cfg))};
  });
}

om_status om_study_corollary(const size_t* ns, size_t ns_count, uint32_t trials_per_n,
                             const om_mc_config* cfg, om_study** out) {
  if (ns == nullptr || out == nullptr) return invalid("ns and out must not be null");
  if (ns_count == 0) return invalid("ns_count must be >= 1");
  return wrap([&] {
    *out = new om_study{om::study_corollary(std::span<const std::size_t>(ns, ns_count),
                                            trials_per_n, to_config(cfg))};
  });
}

om_status om_study_product(om_product_theorem theorem, double p, double q, const size_t* shapes,
                           size_t shape_count, uint32_t trials, const om_mc_config* cfg,
                           om_study** out) {
  if (shapes == nullptr || out == nullptr) return invalid("shapes and out must not be null");
  if (shape_count == 0) return invalid("shape_count must be >= 1");
  return wrap([&] {
    om::ProductTheorem t;
    switch (theorem) {
      case OM_THEOREM_T2: t = om::ProductTheorem::T2; break;
      case OM_THEOREM_T3: t = om::ProductTheorem::T3; break;
      case OM_THEOREM_T5: t = om::ProductTheorem::T5; break;
      case OM_THEOREM_T6: t = om::ProductTheorem::T6; break;
      default: throw om::DomainError("unknown product theorem id");
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs(shape_count);
    for (size_t k = 0; k < shape_count; ++k) pairs[k] = {shapes[2 * k], shapes[2 * k + 1]};
    *out = new om_study{om::study_product(t, p, q, pairs, trials, to_config(cfg))};
  });
}

om_status om_study_gauss_not_l2(const size_t* ns, size_t ns_count, const om_mc_config* cfg,
                                om_study** main_out, om_study** control_out) {
  if (ns == nullptr || main_out == nullptr || control_out == nullptr)
    return invalid("ns, main_out and control_out must not be null");
  return wrap([&] {
    auto [main_study, control] =
        om::study_gaussian_not_l2(std::span<const std::size_t>(ns, ns_count), to_config(cfg));
    *main_out = new om_study{std::move(main_study)};
    *control_out = new om_study{std::move(control)};
  });
}

om_status om_study_function_equiv(om_function_equiv_kind kind, double p, double q,
                                  const double* s_grid, size_t s_count, om_study** out) {
  if (s_grid == nullptr || out == nullptr) return invalid("s_grid and out must not be null");
  if (s_count == 0) return invalid("s_count must be >= 1");
  return wrap([&] {
    const std::span<const double> grid(s_grid, s_count);
    if (kind == OM_FUNC_EQUIV_T2) {
      *out = new om_study{om::study_function_equiv_t2(p, q, grid)};
    } else if (kind == OM_FUNC_EQUIV_T3) {
      *out = new om_study{om::study_function_equiv_t3(p, grid)};
    } else {
      throw om::DomainError("unknown function-equivalence kind");
    }
  });
}

void om_study_free(om_study* study) { delete study; }

om_status om_study_theorem_name(const om_study* study, const char** name) {
  if (study == nullptr || name == nullptr) return invalid("study and name must not be null");
  *name = om::theorem_name(study->s.theorem);
  return OM_OK;
}

om_status om_study_row_count(const om_study* study, size_t* count) {
  if (study == nullptr || count == nullptr) return invalid("study and count must not be null");
  *count = study->s.rows.size();
  return OM_OK;
}

om_status om_study_get_row(const om_study* study, size_t index, om_study_row* out) {
  if (study == nullptr || out == nullptr) return invalid("study and out must not be null");
  if (index >= study->s.rows.size()) return invalid("row index out of range");
  const om::StudyRow& row = study->s.rows[index];
  out->config = row.config.c_str();
  out->n = row.n;
  out->m = row.m;
  out->p = row.p;
  out->q = row.q;
  out->mc_value = row.mc_value;
  out->mc_spread = row.mc_spread;
  out->norm_value = row.norm_value;
  out->ratio = row.ratio;
  return OM_OK;
}

om_status om_study_get_summary(const om_study* study, om_study_summary* out) {
  if (study == nullptr || out == nullptr) return invalid("study and out must not be null");
  out->ratio_min = study->s.ratio_min;
  out->ratio_max = study->s.ratio_max;
  out->ratio_spread = study->s.ratio_spread;
  out->threshold = study->s.threshold;
  out->pass = study->s.pass ? 1 : 0;
  return OM_OK;
}

om_status om_study_write_csv(const om_study* study, const char* path) {
  if (study == nullptr || path == nullptr) return invalid("study and path must not be null");
  const om_status rc = wrap([&] { study->s.write_csv_file(path); });
  return rc == OM_ERR_INTERNAL ? OM_ERR_IO : rc;
}

om_status om_study_write_json(const om_study* study, const char* path) {
  if (study == nullptr || path == nullptr) return invalid("study and path must not be null");
  const om_status rc = wrap([&] { study->s.write_json_file(path); });
  return rc == OM_ERR_INTERNAL ? OM_ERR_IO : rc;
}

}  // extern "C"
