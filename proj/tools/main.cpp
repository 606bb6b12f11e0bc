// Command-line front end for the orlicz_maxima shared library.
//
// Subcommands:
//   norm      evaluate a Luxemburg / l_p / mixed norm
//   estimate  Monte Carlo expected maximum (single or product)
//   verify    run a theorem ratio study and judge it against its threshold
//   table     dump M(s) over an s-grid as CSV
//
// Exit codes: 0 success/PASS, 1 verification FAIL, 2 malformed input,
// 3 domain error.
//
// Matrix CSV layout: rows are the inner index i (the first law of a product
// estimate), columns the outer index j (the second law). All randomness
// derives from --seed; verify runs require it, estimate draws one from the
// system when absent and records it in the manifest.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orlicz_maxima.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail_input(const std::string& message) { throw CliError{kExitInput, message}; }

[[noreturn]] void fail_status(om_status status) {
  const std::string detail = om_last_error_message();
  const std::string message =
      std::string(om_status_name(status)) + (detail.empty() ? "" : ": " + detail);
  const int code =
      (status == OM_ERR_INVALID_ARGUMENT || status == OM_ERR_IO) ? kExitInput : kExitDomain;
  throw CliError{code, message};
}

void check(om_status status) {
  if (status != OM_OK) fail_status(status);
}

using DistHandle = std::unique_ptr<om_dist, decltype(&om_dist_free)>;
using OrliczHandle = std::unique_ptr<om_orlicz, decltype(&om_orlicz_free)>;
using StudyHandle = std::unique_ptr<om_study, decltype(&om_study_free)>;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) fail_input("trailing characters in " + what + ": '" + text + "'");
    return v;
  } catch (const CliError&) {
    throw;
  } catch (const std::exception&) {
    fail_input("cannot parse " + what + ": '" + text + "'");
  }
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  for (const std::string& field : split(text, ','))
    out.push_back(parse_double(field, "vector entry"));
  if (out.empty()) fail_input("empty vector");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& field : split(text, ',')) {
    const double v = parse_double(field, "dimension");
    if (v < 1 || v != std::floor(v)) fail_input("dimensions must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// "4x4,8x8" -> flattened (n, m) pairs.
std::vector<std::size_t> parse_shapes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& field : split(text, ',')) {
    const auto parts = split(field, 'x');
    if (parts.size() != 2) fail_input("shape must look like 8x8: '" + field + "'");
    for (const std::string& side : parts) {
      const double v = parse_double(side, "shape side");
      if (v < 1 || v != std::floor(v)) fail_input("shape sides must be positive integers");
      out.push_back(static_cast<std::size_t>(v));
    }
  }
  if (out.empty()) fail_input("empty shape list");
  return out;
}

DistHandle parse_dist(const std::string& spec) {
  const auto parts = split(spec, ':');
  om_dist* d = nullptr;
  if (parts[0] == "gaussian" && parts.size() == 1) {
    check(om_dist_create_gaussian(&d));
  } else if (parts[0] == "loggamma" && parts.size() == 2) {
    check(om_dist_create_loggamma(parse_double(parts[1], "loggamma index"), &d));
  } else if (parts[0] == "stable" && parts.size() == 2) {
    check(om_dist_create_stable(parse_double(parts[1], "stable index"), &d));
  } else {
    fail_input("unknown distribution '" + spec +
               "' (expected gaussian, loggamma:p or stable:p)");
  }
  return DistHandle(d, &om_dist_free);
}

OrliczHandle parse_orlicz(const std::string& spec) {
  const auto parts = split(spec, ':');
  om_orlicz* m = nullptr;
  if (parts[0] == "gaussian" && parts.size() == 1) {
    check(om_orlicz_create_gaussian(&m));
  } else if (parts[0] == "loggamma" && parts.size() == 2) {
    check(om_orlicz_create_loggamma(parse_double(parts[1], "loggamma index"), &m));
  } else if (parts[0] == "power" && parts.size() == 2) {
    check(om_orlicz_create_power(parse_double(parts[1], "power index"), &m));
  } else if (parts[0] == "quad" && parts.size() >= 2) {
    const DistHandle d = parse_dist(spec.substr(5));
    check(om_orlicz_create_from_tail(d.get(), &m));
  } else {
    fail_input("unknown Orlicz function '" + spec +
               "' (expected gaussian, loggamma:p, power:p or quad:<dist>)");
  }
  return OrliczHandle(m, &om_orlicz_free);
}

// Minimal RFC-4180-style reader: quoted fields, doubled quotes, one record
// per line.
std::vector<std::vector<double>> read_csv_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_input("cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(field);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields) row.push_back(parse_double(f, "matrix entry"));
    if (!rows.empty() && row.size() != rows.front().size())
      fail_input("ragged matrix rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail_input("empty matrix file: " + path);
  return rows;
}

struct MatrixData {
  std::vector<double> data;  // row-major
  std::size_t n = 0, m = 0;
};

MatrixData load_matrix(const std::string& path) {
  const auto rows = read_csv_matrix(path);
  MatrixData out;
  out.n = rows.size();
  out.m = rows.front().size();
  out.data.reserve(out.n * out.m);
  for (const auto& row : rows)
    for (double v : row) out.data.push_back(v);
  return out;
}

std::vector<double> load_vector(const std::string& path) {
  const auto rows = read_csv_matrix(path);
  std::vector<double> out;
  if (rows.size() == 1) return rows.front();
  for (const auto& row : rows) {
    if (row.size() != 1) fail_input("vector file must be one row or one column: " + path);
    out.push_back(row.front());
  }
  return out;
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%#.12g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// RunManifest: written alongside every file-producing command; re-running
// the recorded argv reproduces the outputs byte for byte.
struct ManifestWriter {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<std::uint64_t> master_seed;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const std::filesystem::path& dir) const {
    nlohmann::json j;
    j["command"] = command;
    j["argv"] = argv;
    j["parameters"] = parameters;
    if (master_seed)
      j["master_seed"] = *master_seed;
    else
      j["master_seed"] = nullptr;
    j["version"] = om_version();
    j["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["outputs"] = outputs;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) fail_input("cannot write manifest in " + dir.string());
    out << j.dump(2) << '\n';
  }
};

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail_input("cannot create output directory: " + out);
  return dir;
}

om_mc_config make_config(std::uint64_t samples, std::uint32_t replicates, std::uint64_t seed,
                         std::uint32_t workers) {
  om_mc_config cfg = om_mc_config_default();
  cfg.samples = samples;
  cfg.replicates = replicates;
  cfg.master_seed = seed;
  cfg.workers = workers;
  return cfg;
}

// ------------------------------------------------------------------
// norm
// ------------------------------------------------------------------

struct NormArgs {
  std::string m_spec = "power:2";
  std::string x_inline;
  std::string vector_file;
  std::string matrix_file;
  double outer_p = 1.0;
  std::string inner_spec;
};

int run_norm(const NormArgs& args) {
  if (!args.matrix_file.empty()) {
    if (args.inner_spec.empty()) fail_input("--matrix requires --inner");
    const MatrixData a = load_matrix(args.matrix_file);
    double value = 0.0;
    const auto inner_parts = split(args.inner_spec, ':');
    if (inner_parts[0] == "lq") {
      if (inner_parts.size() != 2) fail_input("--inner lq needs an index, e.g. lq:1.8");
      check(om_mixed_norm_lq(a.data.data(), a.n, a.m, args.outer_p,
                             parse_double(inner_parts[1], "inner index"), &value));
    } else {
      const OrliczHandle inner = parse_orlicz(args.inner_spec);
      check(om_mixed_norm_orlicz(a.data.data(), a.n, a.m, args.outer_p, inner.get(), &value));
    }
    std::cout << fmt12(value) << '\n';
    return kExitPass;
  }

  std::vector<double> x;
  if (!args.x_inline.empty())
    x = parse_vector(args.x_inline);
  else if (!args.vector_file.empty())
    x = load_vector(args.vector_file);
  else
    fail_input("norm needs --x, --file or --matrix");

  const OrliczHandle m = parse_orlicz(args.m_spec);
  double value = 0.0;
  check(om_luxemburg_norm(m.get(), x.data(), x.size(), &value));
  std::cout << fmt12(value) << '\n';
  return kExitPass;
}

// ------------------------------------------------------------------
// estimate
// ------------------------------------------------------------------

struct EstimateArgs {
  std::string dist;
  std::string dist1, dist2;
  std::string x_inline;
  std::string vector_file;
  std::string matrix_file;
  std::uint64_t samples = 100'000;
  std::uint32_t replicates = 15;
  std::optional<std::uint64_t> seed;
  std::uint32_t workers = 0;
  std::string out = "om_out";
  std::string format = "both";
};

void write_estimate_files(const std::filesystem::path& dir, const om_estimate& est,
                          const std::string& format, ManifestWriter& manifest) {
  const char* estimator = est.median_of_means ? "MedianOfMeans" : "Mean";
  if (format == "csv" || format == "both") {
    const auto path = dir / "estimate.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_input("cannot write " + path.string());
    out << "value,spread,samples_total,estimator\n"
        << fmt17(est.value) << ',' << fmt17(est.spread) << ',' << est.samples_total << ','
        << estimator << '\n';
    manifest.outputs.push_back(path.string());
  }
  if (format == "json" || format == "both") {
    const auto path = dir / "estimate.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_input("cannot write " + path.string());
    out << "{\"value\": " << fmt17(est.value) << ", \"spread\": " << fmt17(est.spread)
        << ", \"samples_total\": " << est.samples_total << ", \"estimator\": \"" << estimator
        << "\"}\n";
    manifest.outputs.push_back(path.string());
  }
}

int run_estimate(const EstimateArgs& args, ManifestWriter& manifest) {
  if (args.format != "csv" && args.format != "json" && args.format != "both")
    fail_input("--format must be csv, json or both");
  std::uint64_t seed;
  if (args.seed) {
    seed = *args.seed;
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  manifest.master_seed = seed;
  manifest.parameters["samples"] = args.samples;
  manifest.parameters["replicates"] = args.replicates;
  manifest.parameters["workers"] = args.workers;

  const om_mc_config cfg = make_config(args.samples, args.replicates, seed, args.workers);
  om_estimate est{};

  const bool product = !args.dist1.empty() || !args.dist2.empty() || !args.matrix_file.empty();
  if (product) {
    if (args.dist1.empty() || args.dist2.empty() || args.matrix_file.empty())
      fail_input("product estimates need --dist1, --dist2 and --matrix");
    const DistHandle d1 = parse_dist(args.dist1);
    const DistHandle d2 = parse_dist(args.dist2);
    const MatrixData a = load_matrix(args.matrix_file);
    manifest.parameters["dist1"] = args.dist1;
    manifest.parameters["dist2"] = args.dist2;
    manifest.parameters["matrix"] = args.matrix_file;
    check(om_expected_max_product(d1.get(), d2.get(), a.data.data(), a.n, a.m, &cfg, &est));
  } else {
    if (args.dist.empty()) fail_input("estimate needs --dist (or --dist1/--dist2/--matrix)");
    std::vector<double> x;
    if (!args.x_inline.empty())
      x = parse_vector(args.x_inline);
    else if (!args.vector_file.empty())
      x = load_vector(args.vector_file);
    else
      fail_input("estimate needs --x or --file coefficients");
    const DistHandle d = parse_dist(args.dist);
    manifest.parameters["dist"] = args.dist;
    check(om_expected_max_single(d.get(), x.data(), x.size(), &cfg, &est));
  }

  const auto dir = ensure_out_dir(args.out);
  write_estimate_files(dir, est, args.format, manifest);
  manifest.write(dir);
  std::cout << fmt12(est.value) << '\n';
  return kExitPass;
}

// ------------------------------------------------------------------
// verify
// ------------------------------------------------------------------

struct VerifyArgs {
  std::string theorem;
  std::string dist = "loggamma:2";
  std::string ns;
  std::string shapes = "4x4,8x8,16x16";
  std::uint32_t trials = 5;
  double p = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  std::string s_grid;
  std::uint64_t samples = 20'000;
  std::uint32_t replicates = 15;
  std::optional<std::uint64_t> seed;
  std::uint32_t workers = 0;
  std::string out = "om_out";
};

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (c == '-') c = '_';
  return out;
}

// Writes CSV + JSON for the study, prints its PASS/FAIL line, and returns
// whether it passed.
bool emit_study(const om_study* study, const std::filesystem::path& dir, const std::string& stem,
                ManifestWriter& manifest) {
  const auto csv_path = dir / (stem + ".csv");
  const auto json_path = dir / (stem + ".json");
  check(om_study_write_csv(study, csv_path.string().c_str()));
  check(om_study_write_json(study, json_path.string().c_str()));
  manifest.outputs.push_back(csv_path.string());
  manifest.outputs.push_back(json_path.string());

  om_study_summary summary{};
  check(om_study_get_summary(study, &summary));
  std::cout << stem << ": " << (summary.pass ? "PASS" : "FAIL")
            << " (ratio_min=" << fmt12(summary.ratio_min)
            << ", ratio_max=" << fmt12(summary.ratio_max)
            << ", ratio_spread=" << fmt12(summary.ratio_spread)
            << ", threshold=" << fmt12(summary.threshold) << ")\n";
  return summary.pass != 0;
}

int run_verify(const VerifyArgs& args, ManifestWriter& manifest) {
  if (!args.seed)
    fail_input("verify requires --seed (reproducibility is mandatory for studies)");
  const std::uint64_t seed = *args.seed;
  manifest.master_seed = seed;
  manifest.parameters["samples"] = args.samples;
  manifest.parameters["replicates"] = args.replicates;
  manifest.parameters["workers"] = args.workers;
  manifest.parameters["theorem"] = args.theorem;

  const om_mc_config cfg = make_config(args.samples, args.replicates, seed, args.workers);
  const auto dir = ensure_out_dir(args.out);
  const std::string stem = sanitize(args.theorem);

  const auto default_ns = [&](const char* value) {
    return parse_sizes(args.ns.empty() ? value : args.ns);
  };
  const auto default_grid = [&](const char* value) {
    return parse_vector(args.s_grid.empty() ? value : args.s_grid);
  };

  bool pass = false;
  if (args.theorem == "t1") {
    const DistHandle d = parse_dist(args.dist);
    const auto dist_parts = split(args.dist, ':');
    OrliczHandle m = [&]() -> OrliczHandle {
      om_orlicz* raw = nullptr;
      if (dist_parts[0] == "gaussian") {
        check(om_orlicz_create_gaussian(&raw));
      } else if (dist_parts[0] == "loggamma" && dist_parts.size() == 2) {
        check(om_orlicz_create_loggamma(parse_double(dist_parts[1], "loggamma index"), &raw));
      } else if (dist_parts[0] == "stable" && dist_parts.size() == 2) {
        check(om_orlicz_create_power(parse_double(dist_parts[1], "stable index"), &raw));
      } else {
        fail_input("unknown distribution for t1: " + args.dist);
      }
      return OrliczHandle(raw, &om_orlicz_free);
    }();
    manifest.parameters["dist"] = args.dist;
    const auto ns = default_ns("2,8,32,128");
    manifest.parameters["ns"] = ns;
    manifest.parameters["trials"] = args.trials;
    om_study* study = nullptr;
    check(om_study_thm1(d.get(), m.get(), ns.data(), ns.size(), args.trials, &cfg, &study));
    const StudyHandle handle(study, &om_study_free);
    pass = emit_study(study, dir, stem, manifest);
  } else if (args.theorem == "corollary") {
    const auto ns = default_ns("2,8,32,128");
    manifest.parameters["ns"] = ns;
    manifest.parameters["trials"] = args.trials;
    om_study* study = nullptr;
    check(om_study_corollary(ns.data(), ns.size(), args.trials, &cfg, &study));
    const StudyHandle handle(study, &om_study_free);
    pass = emit_study(study, dir, stem, manifest);
  } else if (args.theorem == "t2" || args.theorem == "t3" || args.theorem == "t5" ||
             args.theorem == "t6") {
    om_product_theorem theorem = OM_THEOREM_T6;
    double p = args.p;
    double q = args.q;
    if (args.theorem == "t2") {
      theorem = OM_THEOREM_T2;
      if (std::isnan(p)) p = 1.2;
      if (std::isnan(q)) q = 1.8;
    } else if (args.theorem == "t3") {
      theorem = OM_THEOREM_T3;
      if (std::isnan(p)) p = 1.5;
    } else if (args.theorem == "t5") {
      theorem = OM_THEOREM_T5;
      if (std::isnan(p)) p = 1.5;
    }
    const auto shapes = parse_shapes(args.shapes);
    manifest.parameters["shapes"] = args.shapes;
    manifest.parameters["trials"] = args.trials;
    if (!std::isnan(p)) manifest.parameters["p"] = p;
    if (!std::isnan(q)) manifest.parameters["q"] = q;
    om_study* study = nullptr;
    check(om_study_product(theorem, p, q, shapes.data(), shapes.size() / 2, args.trials, &cfg,
                           &study));
    const StudyHandle handle(study, &om_study_free);
    pass = emit_study(study, dir, stem, manifest);
  } else if (args.theorem == "gauss-not-l2") {
    const auto ns = default_ns("4,16,64,256,1024");
    manifest.parameters["ns"] = ns;
    om_study* main_study = nullptr;
    om_study* control = nullptr;
    check(om_study_gauss_not_l2(ns.data(), ns.size(), &cfg, &main_study, &control));
    const StudyHandle main_handle(main_study, &om_study_free);
    const StudyHandle control_handle(control, &om_study_free);
    const bool main_pass = emit_study(main_study, dir, stem, manifest);
    const bool control_pass = emit_study(control, dir, stem + "_control", manifest);
    pass = main_pass && control_pass;
  } else if (args.theorem == "func-t2" || args.theorem == "func-t3") {
    double p = args.p;
    double q = args.q;
    om_function_equiv_kind kind;
    std::vector<double> grid;
    if (args.theorem == "func-t2") {
      kind = OM_FUNC_EQUIV_T2;
      if (std::isnan(p)) p = 1.2;
      if (std::isnan(q)) q = 1.8;
      grid = default_grid("0.01,0.02,0.05,0.1,0.2,0.5,1");
    } else {
      kind = OM_FUNC_EQUIV_T3;
      if (std::isnan(p)) p = 1.5;
      grid = default_grid("0.3,0.4,0.55,0.75,1,1.35,1.8,2.4,3");
    }
    manifest.parameters["p"] = p;
    if (!std::isnan(q)) manifest.parameters["q"] = q;
    manifest.parameters["s_grid"] = grid;
    om_study* study = nullptr;
    check(om_study_function_equiv(kind, p, q, grid.data(), grid.size(), &study));
    const StudyHandle handle(study, &om_study_free);
    pass = emit_study(study, dir, stem, manifest);
  } else {
    fail_input("unknown theorem '" + args.theorem +
               "' (expected t1, t2, t3, corollary, t5, t6, gauss-not-l2, func-t2, func-t3)");
  }

  manifest.write(dir);
  return pass ? kExitPass : kExitFail;
}

// ------------------------------------------------------------------
// table
// ------------------------------------------------------------------

struct TableArgs {
  std::string m_spec = "gaussian";
  double s_min = 0.01;
  double s_max = 10.0;
  std::uint32_t points = 100;
  std::string spacing = "log";
  std::string out = "om_out";
};

int run_table(const TableArgs& args, ManifestWriter& manifest) {
  if (!(args.s_min > 0.0) || !(args.s_max > args.s_min))
    fail_input("table needs 0 < --s-min < --s-max");
  if (args.points < 2) fail_input("table needs --points >= 2");
  if (args.spacing != "log" && args.spacing != "linear")
    fail_input("--spacing must be log or linear");

  const OrliczHandle m = parse_orlicz(args.m_spec);
  manifest.parameters["M"] = args.m_spec;
  manifest.parameters["s_min"] = args.s_min;
  manifest.parameters["s_max"] = args.s_max;
  manifest.parameters["points"] = args.points;
  manifest.parameters["spacing"] = args.spacing;

  const auto dir = ensure_out_dir(args.out);
  const auto path = dir / "table.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_input("cannot write " + path.string());
  out << "s,M\n";
  for (std::uint32_t i = 0; i < args.points; ++i) {
    const double t = static_cast<double>(i) / (args.points - 1);
    const double s = args.spacing == "log"
                         ? args.s_min * std::pow(args.s_max / args.s_min, t)
                         : args.s_min + (args.s_max - args.s_min) * t;
    double value = 0.0;
    check(om_orlicz_eval(m.get(), s, &value));
    out << fmt17(s) << ',' << fmt17(value) << '\n';
  }
  out.close();
  manifest.outputs.push_back(path.string());
  manifest.write(dir);
  std::cout << path.string() << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms generated by random variables and expected maxima of weighted products"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(om_version()));

  NormArgs norm_args;
  auto* norm = app.add_subcommand("norm", "Evaluate a Luxemburg, l_p or mixed norm");
  norm->add_option("--M", norm_args.m_spec,
                   "Orlicz function: gaussian | loggamma:p | power:p | quad:<dist>");
  norm->add_option("--x", norm_args.x_inline, "inline vector, e.g. 3,4");
  norm->add_option("--file", norm_args.vector_file, "vector CSV (one row or one column)");
  norm->add_option("--matrix", norm_args.matrix_file,
                   "matrix CSV; rows are the inner index i, columns the outer index j");
  norm->add_option("--outer", norm_args.outer_p, "outer l_p index for --matrix");
  norm->add_option("--inner", norm_args.inner_spec,
                   "inner norm for --matrix: lq:q or an Orlicz spec");

  EstimateArgs est_args;
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo expected maximum");
  estimate->add_option("--dist", est_args.dist, "distribution for E max_i |a_i xi_i|");
  estimate->add_option("--dist1", est_args.dist1, "row law (index i) of a product estimate");
  estimate->add_option("--dist2", est_args.dist2, "column law (index j) of a product estimate");
  estimate->add_option("--x", est_args.x_inline, "inline coefficient vector");
  estimate->add_option("--file", est_args.vector_file, "coefficient vector CSV");
  estimate->add_option("--matrix", est_args.matrix_file, "coefficient matrix CSV");
  estimate->add_option("--samples", est_args.samples, "samples per replicate (default 100000)");
  estimate->add_option("--replicates", est_args.replicates,
                       "median-of-means replicates, odd (default 15)");
  estimate->add_option("--seed", est_args.seed, "master seed (drawn and recorded when absent)");
  estimate->add_option("--workers", est_args.workers, "worker threads (0 = hardware)")
      ->envname("ORLICZ_MAXIMA_WORKERS");
  estimate->add_option("--out", est_args.out, "output directory (default om_out)");
  estimate->add_option("--format", est_args.format, "csv | json | both (default both)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run a theorem ratio study");
  verify
      ->add_option("theorem", verify_args.theorem,
                   "t1 | t2 | t3 | corollary | t5 | t6 | gauss-not-l2 | func-t2 | func-t3")
      ->required();
  verify->add_option("--dist", verify_args.dist, "t1 law: loggamma:p | gaussian | stable:p");
  verify->add_option("--ns", verify_args.ns, "dimensions, e.g. 2,8,32,128");
  verify->add_option("--shapes", verify_args.shapes, "matrix shapes, e.g. 4x4,8x8,16x16");
  verify->add_option("--trials", verify_args.trials, "trials per configuration (default 5)");
  verify->add_option("--p", verify_args.p, "stability index p");
  verify->add_option("--q", verify_args.q, "stability index q (t2/func-t2; needs 1 < p < q < 2)");
  verify->add_option("--s-grid", verify_args.s_grid, "s grid for func-t2/func-t3");
  verify->add_option("--samples", verify_args.samples, "samples per replicate (default 20000)");
  verify->add_option("--replicates", verify_args.replicates,
                     "median-of-means replicates, odd (default 15)");
  verify->add_option("--seed", verify_args.seed, "master seed (required)");
  verify->add_option("--workers", verify_args.workers, "worker threads (0 = hardware)")
      ->envname("ORLICZ_MAXIMA_WORKERS");
  verify->add_option("--out", verify_args.out, "output directory (default om_out)");

  TableArgs table_args;
  auto* table = app.add_subcommand("table", "Dump M(s) over an s-grid as CSV");
  table->add_option("--M", table_args.m_spec, "Orlicz function spec");
  table->add_option("--s-min", table_args.s_min, "grid start (default 0.01)");
  table->add_option("--s-max", table_args.s_max, "grid end (default 10)");
  table->add_option("--points", table_args.points, "grid size (default 100)");
  table->add_option("--spacing", table_args.spacing, "log | linear (default log)");
  table->add_option("--out", table_args.out, "output directory (default om_out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    app.exit(e);
    return kExitInput;
  }

  ManifestWriter manifest;
  for (int i = 1; i < argc; ++i) manifest.argv.push_back(argv[i]);

  try {
    if (norm->parsed()) return run_norm(norm_args);
    if (estimate->parsed()) {
      manifest.command = "estimate";
      return run_estimate(est_args, manifest);
    }
    if (verify->parsed()) {
      manifest.command = "verify";
      return run_verify(verify_args, manifest);
    }
    if (table->parsed()) {
      manifest.command = "table";
      return run_table(table_args, manifest);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitInput;
}
