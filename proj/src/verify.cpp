#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace om {

const char* theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::T3: return "T3";
    case TheoremId::Corollary: return "Corollary";
    case TheoremId::T5: return "T5";
    case TheoremId::T6: return "T6";
    case TheoremId::GaussNotL2: return "GaussNotL2";
    case TheoremId::FuncEquivT2: return "FuncEquivT2";
    case TheoremId::FuncEquivT3: return "FuncEquivT3";
  }
  return "unknown";
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + index * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

const char* coeff_family_name(CoeffFamily family) {
  switch (family) {
    case CoeffFamily::Uniform: return "uniform";
    case CoeffFamily::Geometric: return "geometric";
    case CoeffFamily::Spike: return "spike";
  }
  return "unknown";
}

std::vector<double> make_coeff_vector(CoeffFamily family, std::size_t n, RngStream& rng) {
  std::vector<double> a(n);
  switch (family) {
    case CoeffFamily::Uniform:
      for (double& v : a) v = 0.1 + 0.9 * rng.uniform01();
      break;
    case CoeffFamily::Geometric:
      for (std::size_t i = 0; i < n; ++i) a[i] = std::pow(0.5, static_cast<double>(i));
      break;
    case CoeffFamily::Spike: {
      const std::size_t spike = static_cast<std::size_t>(rng.uniform01() * n) % n;
      for (std::size_t i = 0; i < n; ++i) a[i] = 0.02 * rng.uniform01();
      a[spike] = 1.0;
      break;
    }
  }
  return a;
}

Matrix make_coeff_matrix(CoeffFamily family, std::size_t n, std::size_t m, RngStream& rng) {
  Matrix a(n, m);
  switch (family) {
    case CoeffFamily::Uniform:
      for (double& v : a.data) v = 0.1 + 0.9 * rng.uniform01();
      break;
    case CoeffFamily::Geometric:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
          a.at(i, j) = std::pow(0.5, static_cast<double>(i + j));
      break;
    case CoeffFamily::Spike: {
      const std::size_t si = static_cast<std::size_t>(rng.uniform01() * n) % n;
      const std::size_t sj = static_cast<std::size_t>(rng.uniform01() * m) % m;
      for (double& v : a.data) v = 0.02 * rng.uniform01();
      a.at(si, sj) = 1.0;
      break;
    }
  }
  return a;
}

namespace {

constexpr std::uint64_t kCoeffStream = 0xC0EFFULL;
// Coefficient ensembles are registered per row index, independent of the
// master seed: rerunning a study with a new seed keeps the same coefficient
// draws and varies only the Monte Carlo noise.
constexpr std::uint64_t kCoeffBaseSeed = 0x5EEDFACE0C0EFFULL;
constexpr CoeffFamily kFamilies[] = {CoeffFamily::Uniform, CoeffFamily::Geometric,
                                     CoeffFamily::Spike};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void finalize(RatioStudy& study) {
  if (study.rows.empty()) throw DomainError("ratio study produced no rows");
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (const StudyRow& row : study.rows) {
    if (!(row.ratio > 0.0) || !std::isfinite(row.ratio))
      throw DomainError("ratio study produced a nonpositive or non-finite ratio");
    rmin = std::min(rmin, row.ratio);
    rmax = std::max(rmax, row.ratio);
  }
  study.ratio_min = rmin;
  study.ratio_max = rmax;
  study.ratio_spread = rmax / rmin;
  switch (study.criterion) {
    case RatioStudy::Criterion::SpreadBelow:
      study.pass = study.ratio_spread <= study.threshold;
      break;
    case RatioStudy::Criterion::MaxBelow:
      study.pass = study.ratio_max <= study.threshold;
      break;
    case RatioStudy::Criterion::DecreasingHalved: {
      bool decreasing = true;
      for (std::size_t i = 0; i + 1 < study.rows.size(); ++i)
        decreasing = decreasing && study.rows[i + 1].ratio < study.rows[i].ratio;
      study.pass = decreasing &&
                   study.rows.back().ratio / study.rows.front().ratio <= study.threshold;
      break;
    }
  }
}

struct Thm1RowSpec {
  std::size_t n;
  std::uint32_t trial;
  CoeffFamily family;
};

void check_thm1_pairing(const Distribution& model, const OrliczFunction& m) {
  const auto form = m.form();
  switch (model.kind()) {
    case DistKind::LogGamma1p:
      if ((form == OrliczFunction::Form::ClosedLogGamma ||
           form == OrliczFunction::Form::Power) &&
          m.param() == model.index())
        return;
      break;
    case DistKind::Gaussian:
      if (form == OrliczFunction::Form::ClosedGaussian) return;
      break;
    case DistKind::SymmetricStable:
      if (form == OrliczFunction::Form::Power && m.param() == model.index()) return;
      break;
  }
  throw DomainError(
      "model and Orlicz function are not a generating pair (log-gamma(1,p) "
      "pairs with its closed form or s^p, the Gaussian with its closed form, "
      "stable(p) with s^p)");
}

double thm1_threshold(const Distribution& model) {
  switch (model.kind()) {
    case DistKind::LogGamma1p: return thresholds::kThm1LogGamma;
    case DistKind::Gaussian: return thresholds::kThm1Gaussian;
    case DistKind::SymmetricStable: return thresholds::kThm1Stable;
  }
  return thresholds::kThm1Stable;
}

RatioStudy run_thm1(const Distribution& model, const OrliczFunction& m,
                    std::span<const std::size_t> ns, std::uint32_t trials_per_n,
                    const McConfig& cfg, TheoremId label, double threshold) {
  check_thm1_pairing(model, m);
  cfg.validate();
  if (ns.empty()) throw DomainError("study needs at least one dimension");
  if (trials_per_n < 1) throw DomainError("study needs at least one trial per dimension");

  std::vector<Thm1RowSpec> specs;
  for (std::size_t n : ns) {
    if (n < 1) throw DomainError("study dimensions must be >= 1");
    for (std::uint32_t t = 0; t < trials_per_n; ++t)
      for (CoeffFamily family : kFamilies) specs.push_back({n, t, family});
  }

  RatioStudy study;
  study.theorem = label;
  study.threshold = threshold;
  study.criterion = RatioStudy::Criterion::SpreadBelow;
  study.rows.resize(specs.size());

  McConfig row_cfg = cfg;
  row_cfg.workers = 1;  // rows are the parallel unit
  parallel_for_indexed(specs.size(), cfg.workers, [&](std::size_t k) {
    const Thm1RowSpec& spec = specs[k];
    const std::uint64_t row_seed = mix_seed(cfg.master_seed, k + 1);
    RngStream coeff_rng(mix_seed(kCoeffBaseSeed, k), kCoeffStream);
    const std::vector<double> a = make_coeff_vector(spec.family, spec.n, coeff_rng);

    McConfig local = row_cfg;
    local.master_seed = row_seed;
    const McEstimate est = expected_max_single(model, a, local);
    const double norm = luxemburg_norm(m, a);

    StudyRow& row = study.rows[k];
    std::ostringstream config;
    config << coeff_family_name(spec.family) << "#" << spec.trial;
    row.config = config.str();
    row.n = spec.n;
    row.m = 1;
    if (model.kind() != DistKind::Gaussian) row.p = model.index();
    row.mc_value = est.value;
    row.mc_spread = est.spread;
    row.norm_value = norm;
    row.ratio = est.value / norm;
  });
  finalize(study);
  return study;
}

}  // namespace

RatioStudy study_thm1(const Distribution& model, const OrliczFunction& m,
                      std::span<const std::size_t> ns, std::uint32_t trials_per_n,
                      const McConfig& cfg) {
  return run_thm1(model, m, ns, trials_per_n, cfg, TheoremId::T1, thm1_threshold(model));
}

RatioStudy study_corollary(std::span<const std::size_t> ns, std::uint32_t trials_per_n,
                           const McConfig& cfg) {
  return run_thm1(Distribution::log_gamma_1p(2.0), OrliczFunction::power(2.0), ns, trials_per_n,
                  cfg, TheoremId::Corollary, thresholds::kCorollary);
}

RatioStudy study_product(ProductTheorem theorem, double p, double q,
                         std::span<const std::pair<std::size_t, std::size_t>> shapes,
                         std::uint32_t trials, const McConfig& cfg) {
  cfg.validate();
  if (shapes.empty()) throw DomainError("product study needs at least one shape");
  if (trials < 1) throw DomainError("product study needs at least one trial");

  // One law per index: the row law (index i) generates the inner norm, the
  // column law (index j) the outer norm.
  TheoremId label;
  std::optional<Distribution> row_model, col_model;
  std::optional<InnerNorm> inner;
  double outer_p = 0.0;
  double row_p = std::numeric_limits<double>::quiet_NaN();
  double row_q = std::numeric_limits<double>::quiet_NaN();
  switch (theorem) {
    case ProductTheorem::T2:
      if (!(1.0 < p && p < q && q < 2.0))
        throw DomainError("theorem T2 requires 1 < p < q < 2");
      label = TheoremId::T2;
      row_model = Distribution::symmetric_stable(q);
      col_model = Distribution::symmetric_stable(p);
      inner = InnerNorm::lq(q);
      outer_p = p;
      row_p = p;
      row_q = q;
      break;
    case ProductTheorem::T3:
      if (!(1.0 < p && p < 2.0)) throw DomainError("theorem T3 requires p in (1, 2)");
      label = TheoremId::T3;
      row_model = Distribution::gaussian();
      col_model = Distribution::symmetric_stable(p);
      inner = InnerNorm::orlicz(OrliczFunction::gaussian());
      outer_p = p;
      row_p = p;
      break;
    case ProductTheorem::T5:
      if (!(1.0 < p && p < 2.0)) throw DomainError("theorem T5 requires p in (1, 2)");
      label = TheoremId::T5;
      row_model = Distribution::log_gamma_1p(2.0);
      col_model = Distribution::symmetric_stable(p);
      inner = InnerNorm::lq(2.0);
      outer_p = p;
      row_p = p;
      break;
    case ProductTheorem::T6:
      label = TheoremId::T6;
      row_model = Distribution::gaussian();
      col_model = Distribution::log_gamma_1p(2.0);
      inner = InnerNorm::orlicz(OrliczFunction::gaussian());
      outer_p = 2.0;
      row_p = 2.0;
      break;
    default:
      throw DomainError("unknown product theorem");
  }

  struct RowSpec {
    std::size_t n, m;
    std::uint32_t trial;
    CoeffFamily family;
  };
  std::vector<RowSpec> specs;
  for (const auto& [n, m] : shapes) {
    if (n < 1 || m < 1) throw DomainError("shapes must have n >= 1 and m >= 1");
    for (std::uint32_t t = 0; t < trials; ++t)
      for (CoeffFamily family : kFamilies) specs.push_back({n, m, t, family});
  }

  RatioStudy study;
  study.theorem = label;
  study.threshold = thresholds::kProduct;
  study.criterion = RatioStudy::Criterion::SpreadBelow;
  study.rows.resize(specs.size());

  McConfig row_cfg = cfg;
  row_cfg.workers = 1;
  parallel_for_indexed(specs.size(), cfg.workers, [&](std::size_t k) {
    const RowSpec& spec = specs[k];
    const std::uint64_t row_seed = mix_seed(cfg.master_seed, k + 1);
    RngStream coeff_rng(mix_seed(kCoeffBaseSeed, k), kCoeffStream);
    const Matrix a = make_coeff_matrix(spec.family, spec.n, spec.m, coeff_rng);

    McConfig local = row_cfg;
    local.master_seed = row_seed;
    const McEstimate est = expected_max_product(*row_model, *col_model, a, local);
    const double norm = mixed_norm(a, outer_p, *inner);

    StudyRow& row = study.rows[k];
    std::ostringstream config;
    config << coeff_family_name(spec.family) << "#" << spec.trial;
    row.config = config.str();
    row.n = spec.n;
    row.m = spec.m;
    row.p = row_p;
    row.q = row_q;
    row.mc_value = est.value;
    row.mc_spread = est.spread;
    row.norm_value = norm;
    row.ratio = est.value / norm;
  });
  finalize(study);
  return study;
}

std::pair<RatioStudy, RatioStudy> study_gaussian_not_l2(std::span<const std::size_t> ns,
                                                        const McConfig& cfg) {
  cfg.validate();
  if (ns.size() < 2) throw DomainError("gauss-not-l2 study needs at least two dimensions");
  for (std::size_t i = 0; i + 1 < ns.size(); ++i)
    if (!(ns[i] < ns[i + 1])) throw DomainError("gauss-not-l2 dimensions must increase");

  const Distribution gauss = Distribution::gaussian();
  const OrliczFunction gauss_m = OrliczFunction::gaussian();

  RatioStudy main_study;
  main_study.theorem = TheoremId::GaussNotL2;
  main_study.threshold = thresholds::kGaussHalving;
  main_study.criterion = RatioStudy::Criterion::DecreasingHalved;
  main_study.rows.resize(ns.size());

  RatioStudy control = main_study;
  control.theorem = TheoremId::T1;
  control.threshold = thresholds::kThm1Gaussian;
  control.criterion = RatioStudy::Criterion::SpreadBelow;

  McConfig row_cfg = cfg;
  row_cfg.workers = 1;
  parallel_for_indexed(ns.size(), cfg.workers, [&](std::size_t k) {
    const std::size_t n = ns[k];
    const std::vector<double> a(n, 1.0);
    McConfig local = row_cfg;
    local.master_seed = mix_seed(cfg.master_seed, k + 1);
    const McEstimate est = expected_max_single(gauss, a, local);

    StudyRow row;
    row.config = "unit";
    row.n = n;
    row.m = 1;
    row.mc_value = est.value;
    row.mc_spread = est.spread;
    row.norm_value = std::sqrt(static_cast<double>(n));
    row.ratio = est.value / row.norm_value;
    main_study.rows[k] = row;

    row.config = "unit-control";
    row.norm_value = luxemburg_norm(gauss_m, a);
    row.ratio = est.value / row.norm_value;
    control.rows[k] = row;
  });
  finalize(main_study);
  finalize(control);
  return {std::move(main_study), std::move(control)};
}

RatioStudy study_function_equiv_t2(double p, double q, std::span<const double> s_grid,
                                   const QuadratureSpec& spec) {
  if (!(1.0 < p && p < q && q < 2.0)) throw DomainError("T2 proof check requires 1 < p < q < 2");
  if (s_grid.empty()) throw DomainError("s grid must not be empty");
  for (double s : s_grid)
    if (!(s > 0.0 && s <= 10.0)) throw DomainError("s grid must lie in (0, 10]");

  const double exponent = q / p;
  const Distribution surrogate = Distribution::log_gamma_1p(exponent);

  RatioStudy study;
  study.theorem = TheoremId::FuncEquivT2;
  study.threshold = thresholds::kFuncT2MaxRatio;
  study.criterion = RatioStudy::Criterion::MaxBelow;
  bool any_unit = false;
  double max_unit = 0.0;
  for (double s : s_grid) {
    StudyRow row;
    std::ostringstream config;
    config << "s=" << s;
    row.config = config.str();
    row.p = p;
    row.q = q;
    row.mc_value = orlicz_from_tail(surrogate, s, spec);
    row.norm_value = std::pow(s, exponent);
    row.ratio = row.mc_value / row.norm_value;
    if (s <= 1.0) {
      any_unit = true;
      max_unit = std::max(max_unit, row.ratio);
    }
    study.rows.push_back(std::move(row));
  }
  if (!any_unit) throw DomainError("T2 proof check needs grid points in (0, 1]");
  finalize(study);
  // The bound applies on (0, 1]; larger s are reported but not judged.
  study.pass = max_unit <= study.threshold;
  return study;
}

RatioStudy study_function_equiv_t3(double p, std::span<const double> s_grid,
                                   const QuadratureSpec& spec) {
  if (!(1.0 < p && p < 2.0)) throw DomainError("T3 proof check requires p in (1, 2)");
  if (s_grid.empty()) throw DomainError("s grid must not be empty");
  for (double s : s_grid)
    if (!(s >= 0.05 && s <= 10.0))
      throw DomainError("s grid must lie in [0.05, 10]; both sides underflow below 0.05");

  const Distribution gauss = Distribution::gaussian();
  RatioStudy study;
  study.theorem = TheoremId::FuncEquivT3;
  study.threshold = thresholds::kFuncT3Spread;
  study.criterion = RatioStudy::Criterion::SpreadBelow;
  for (double s : s_grid) {
    const double powered = orlicz_from_tail_powered(gauss, p, std::pow(s, p), spec);
    const double plain = orlicz_from_tail(gauss, s, spec);
    if (!(powered > 1e-280) || !(plain > 1e-280)) continue;  // below the underflow floor
    StudyRow row;
    std::ostringstream config;
    config << "s=" << s;
    row.config = config.str();
    row.p = p;
    row.mc_value = powered;
    row.norm_value = plain;
    row.ratio = powered / plain;
    study.rows.push_back(std::move(row));
  }
  if (study.rows.size() < 2)
    throw DomainError("T3 proof check needs at least two usable grid points");
  finalize(study);
  return study;
}

void RatioStudy::write_csv(std::ostream& out) const {
  out << "theorem_id,config,n,m,p,q,mc_value,mc_spread,norm_value,ratio\n";
  for (const StudyRow& row : rows) {
    out << theorem_name(theorem) << ',' << csv_quote(row.config) << ',' << row.n << ','
        << row.m << ',';
    if (!std::isnan(row.p)) out << fmt17(row.p);
    out << ',';
    if (!std::isnan(row.q)) out << fmt17(row.q);
    out << ',' << fmt17(row.mc_value) << ',' << fmt17(row.mc_spread) << ','
        << fmt17(row.norm_value) << ',' << fmt17(row.ratio) << '\n';
  }
}

void RatioStudy::write_json(std::ostream& out) const {
  out << "{\n  \"theorem_id\": " << json_quote(theorem_name(theorem)) << ",\n  \"rows\": [\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const StudyRow& row = rows[k];
    out << "    {\"config\": " << json_quote(row.config) << ", \"n\": " << row.n
        << ", \"m\": " << row.m << ", \"p\": ";
    out << (std::isnan(row.p) ? "null" : fmt17(row.p));
    out << ", \"q\": " << (std::isnan(row.q) ? "null" : fmt17(row.q));
    out << ", \"mc_value\": " << fmt17(row.mc_value)
        << ", \"mc_spread\": " << fmt17(row.mc_spread)
        << ", \"norm_value\": " << fmt17(row.norm_value) << ", \"ratio\": " << fmt17(row.ratio)
        << '}' << (k + 1 < rows.size() ? "," : "") << '\n';
  }
  out << "  ],\n  \"summary\": {\"ratio_min\": " << fmt17(ratio_min)
      << ", \"ratio_max\": " << fmt17(ratio_max) << ", \"ratio_spread\": " << fmt17(ratio_spread)
      << ", \"pass\": " << (pass ? "true" : "false") << ", \"threshold\": " << fmt17(threshold)
      << "}\n}\n";
}

namespace {

void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  writer(out);
  if (!out.good()) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace

void RatioStudy::write_csv_file(const std::string& path) const {
  write_file(path, [this](std::ostream& out) { write_csv(out); });
}

void RatioStudy::write_json_file(const std::string& path) const {
  write_file(path, [this](std::ostream& out) { write_json(out); });
}

}  // namespace om
