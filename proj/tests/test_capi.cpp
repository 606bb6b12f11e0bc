#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "orlicz_maxima.h"

namespace {

struct DistGuard {
  om_dist* d = nullptr;
  ~DistGuard() { om_dist_free(d); }
};

struct OrliczGuard {
  om_orlicz* m = nullptr;
  ~OrliczGuard() { om_orlicz_free(m); }
};

struct StudyGuard {
  om_study* s = nullptr;
  ~StudyGuard() { om_study_free(s); }
};

}  // namespace

TEST_CASE("c api: version and status names") {
  CHECK(std::string(om_version()) == OM_VERSION_STRING);
  CHECK(std::string(om_status_name(OM_OK)) == "ok");
  CHECK(std::string(om_status_name(OM_ERR_DOMAIN)) == "domain error");
}

TEST_CASE("c api: distribution lifecycle and error reporting") {
  DistGuard lg;
  REQUIRE(om_dist_create_loggamma(2.0, &lg.d) == OM_OK);

  double value = 0.0;
  int exact = 0;
  CHECK(om_dist_tail(lg.d, 2.0, &value, &exact) == OM_OK);
  CHECK(value == doctest::Approx(0.25));
  CHECK(exact == 1);

  CHECK(om_dist_density(lg.d, 2.0, &value) == OM_OK);
  CHECK(value == doctest::Approx(0.25));

  double spread = -1.0;
  CHECK(om_dist_mean_abs(lg.d, &value, &spread) == OM_OK);
  CHECK(value == doctest::Approx(2.0));
  CHECK(spread == 0.0);

  om_dist* bad = nullptr;
  CHECK(om_dist_create_loggamma(1.0, &bad) == OM_ERR_DOMAIN);
  CHECK(std::strlen(om_last_error_message()) > 0);
  CHECK(om_dist_create_stable(2.5, &bad) == OM_ERR_DOMAIN);
  CHECK(om_dist_tail(nullptr, 1.0, &value, nullptr) == OM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("c api: stable density is unsupported") {
  DistGuard st;
  REQUIRE(om_dist_create_stable(1.5, &st.d) == OM_OK);
  double value = 0.0;
  CHECK(om_dist_density(st.d, 1.0, &value) == OM_ERR_UNSUPPORTED);
}

TEST_CASE("c api: sampling is deterministic") {
  DistGuard g;
  REQUIRE(om_dist_create_gaussian(&g.d) == OM_OK);
  std::vector<double> a(256), b(256);
  CHECK(om_dist_sample(g.d, 42, 7, a.size(), a.data()) == OM_OK);
  CHECK(om_dist_sample(g.d, 42, 7, b.size(), b.data()) == OM_OK);
  CHECK(a == b);
  CHECK(om_dist_sample(g.d, 42, 8, b.size(), b.data()) == OM_OK);
  CHECK(a != b);
}

TEST_CASE("c api: orlicz handles and norms") {
  OrliczGuard p2;
  REQUIRE(om_orlicz_create_power(2.0, &p2.m) == OM_OK);
  const double x[2] = {3.0, 4.0};
  double value = 0.0;
  CHECK(om_luxemburg_norm(p2.m, x, 2, &value) == OM_OK);
  CHECK(value == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(om_lp_norm(x, 2, 2.0, &value) == OM_OK);
  CHECK(value == doctest::Approx(5.0).epsilon(1e-15));

  OrliczGuard gm;
  REQUIRE(om_orlicz_create_gaussian(&gm.m) == OM_OK);
  CHECK(om_orlicz_eval(gm.m, 1.0, &value) == OM_OK);
  CHECK(value == doctest::Approx(std::exp(-1.5)));

  OrliczGuard lg;
  REQUIRE(om_orlicz_create_loggamma(2.0, &lg.m) == OM_OK);
  OrliczGuard composed;
  REQUIRE(om_orlicz_create_power_composed(lg.m, 1.5, &composed.m) == OM_OK);
  CHECK(om_orlicz_eval(composed.m, 0.25, &value) == OM_OK);
  CHECK(value == doctest::Approx(3.0 * std::pow(0.25, 4.0 / 3.0)).epsilon(1e-10));

  om_orlicz* bad = nullptr;
  CHECK(om_orlicz_create_loggamma(0.9, &bad) == OM_ERR_DOMAIN);

  DistGuard st;
  REQUIRE(om_dist_create_stable(1.5, &st.d) == OM_OK);
  CHECK(om_orlicz_create_from_tail(st.d, &bad) == OM_ERR_UNSUPPORTED);

  const double a[6] = {1, 1, 1, 1, 1, 1};
  CHECK(om_mixed_norm_lq(a, 2, 3, 1.0, 2.0, &value) == OM_OK);
  CHECK(value == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(om_mixed_norm_orlicz(a, 2, 3, 1.0, gm.m, &value) == OM_OK);
  CHECK(value > 0.0);
}

TEST_CASE("c api: estimates run and validate") {
  DistGuard lg;
  REQUIRE(om_dist_create_loggamma(2.0, &lg.d) == OM_OK);
  om_mc_config cfg = om_mc_config_default();
  CHECK(cfg.samples == 100000);
  CHECK(cfg.replicates == 15);
  cfg.samples = 20000;
  cfg.replicates = 5;
  cfg.master_seed = 3;

  const double a[2] = {1.0, 1.0};
  om_estimate est{};
  CHECK(om_expected_max_single(lg.d, a, 2, &cfg, &est) == OM_OK);
  CHECK(est.value == doctest::Approx(8.0 / 3.0).epsilon(0.08));
  CHECK(est.median_of_means == 1);
  CHECK(est.samples_total == 100000);

  cfg.replicates = 4;  // even
  CHECK(om_expected_max_single(lg.d, a, 2, &cfg, &est) == OM_ERR_DOMAIN);
  cfg.replicates = 5;

  DistGuard g;
  REQUIRE(om_dist_create_gaussian(&g.d) == OM_OK);
  const double mat[4] = {1.0, 0.0, 0.0, 1.0};
  CHECK(om_expected_max_product(lg.d, g.d, mat, 2, 2, &cfg, &est) == OM_OK);
  CHECK(est.value > 0.0);
}

TEST_CASE("c api: studies, accessors and writers") {
  om_mc_config cfg = om_mc_config_default();
  cfg.samples = 2000;
  cfg.replicates = 3;
  cfg.master_seed = 7;
  cfg.workers = 2;

  DistGuard lg;
  REQUIRE(om_dist_create_loggamma(2.0, &lg.d) == OM_OK);
  OrliczGuard m;
  REQUIRE(om_orlicz_create_loggamma(2.0, &m.m) == OM_OK);

  const size_t ns[2] = {2, 4};
  StudyGuard study;
  REQUIRE(om_study_thm1(lg.d, m.m, ns, 2, 1, &cfg, &study.s) == OM_OK);

  const char* name = nullptr;
  CHECK(om_study_theorem_name(study.s, &name) == OM_OK);
  CHECK(std::string(name) == "T1");

  size_t count = 0;
  CHECK(om_study_row_count(study.s, &count) == OM_OK);
  CHECK(count == 2 * 1 * 3);

  om_study_row row{};
  CHECK(om_study_get_row(study.s, 0, &row) == OM_OK);
  CHECK(row.ratio == row.mc_value / row.norm_value);
  CHECK(row.n == 2);
  CHECK(row.m == 1);
  CHECK(om_study_get_row(study.s, count, &row) == OM_ERR_INVALID_ARGUMENT);

  om_study_summary summary{};
  CHECK(om_study_get_summary(study.s, &summary) == OM_OK);
  CHECK(summary.ratio_spread >= 1.0);
  CHECK(summary.threshold == 2.5);

  const auto dir = std::filesystem::temp_directory_path() / "om_capi_test";
  std::filesystem::create_directories(dir);
  const auto csv = (dir / "study.csv").string();
  const auto json = (dir / "study.json").string();
  CHECK(om_study_write_csv(study.s, csv.c_str()) == OM_OK);
  CHECK(om_study_write_json(study.s, json.c_str()) == OM_OK);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "theorem_id,config,n,m,p,q,mc_value,mc_spread,norm_value,ratio");
  CHECK(om_study_write_csv(study.s, "/nonexistent-dir/x.csv") == OM_ERR_IO);
  std::filesystem::remove_all(dir);
}

TEST_CASE("c api: product, gauss-not-l2 and function-equivalence studies") {
  om_mc_config cfg = om_mc_config_default();
  cfg.samples = 2000;
  cfg.replicates = 3;
  cfg.master_seed = 9;
  cfg.workers = 2;

  const size_t shapes[4] = {2, 2, 3, 2};
  StudyGuard t5;
  REQUIRE(om_study_product(OM_THEOREM_T5, 1.5, 0.0, shapes, 2, 1, &cfg, &t5.s) == OM_OK);
  om_study_summary summary{};
  CHECK(om_study_get_summary(t5.s, &summary) == OM_OK);
  CHECK(summary.threshold == 4.0);

  om_study* bad = nullptr;
  CHECK(om_study_product(OM_THEOREM_T2, 1.8, 1.2, shapes, 2, 1, &cfg, &bad) == OM_ERR_DOMAIN);

  const size_t ns[3] = {2, 4, 8};
  StudyGuard main_study, control;
  REQUIRE(om_study_gauss_not_l2(ns, 3, &cfg, &main_study.s, &control.s) == OM_OK);
  const char* name = nullptr;
  CHECK(om_study_theorem_name(main_study.s, &name) == OM_OK);
  CHECK(std::string(name) == "GaussNotL2");
  CHECK(om_study_theorem_name(control.s, &name) == OM_OK);
  CHECK(std::string(name) == "T1");

  const double grid[3] = {0.1, 0.5, 1.0};
  StudyGuard func;
  REQUIRE(om_study_function_equiv(OM_FUNC_EQUIV_T2, 1.2, 1.8, grid, 3, &func.s) == OM_OK);
  CHECK(om_study_get_summary(func.s, &summary) == OM_OK);
  CHECK(summary.pass == 1);
  CHECK(summary.ratio_max == doctest::Approx(2.0).epsilon(1e-6));

  StudyGuard corollary;
  REQUIRE(om_study_corollary(ns, 3, 1, &cfg, &corollary.s) == OM_OK);
  CHECK(om_study_theorem_name(corollary.s, &name) == OM_OK);
  CHECK(std::string(name) == "Corollary");
}
