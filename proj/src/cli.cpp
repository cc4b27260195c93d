// Copyright 2026 The primesquare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "primesquare/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "primesquare/algebra.hpp"
#include "primesquare/local.hpp"
#include "primesquare/search.hpp"
#include "primesquare/stats.hpp"

#ifndef PRIMESQUARE_GIT_DESCRIBE
#define PRIMESQUARE_GIT_DESCRIBE "unknown"
#endif

namespace primesquare {

using nlohmann::ordered_json;

namespace {

const char* const kSubcommands[] = {"construct", "verify", "scan",        "local",     "mass",
                                    "joint",     "restricted", "discrepancy", "bdh", "diagcheck",
                                    "region"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Header plus rows, schema_version first in every line.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : width_(columns.size()) {
    out_ << "schema_version";
    for (const auto& c : columns) out_ << ',' << c;
    out_ << '\n';
  }

  CsvTable& row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw Error(ErrorKind::InvalidArgument, "csv row width mismatch");
    out_ << kSchemaVersion;
    for (const auto& c : cells) out_ << ',' << c;
    out_ << '\n';
    return *this;
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t width_;
  std::ostringstream out_;
};

std::string quoted(const std::string& s) { return '"' + s + '"'; }

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json config_json(const RunConfig& c, unsigned threads) {
  ordered_json j;
  j["subcommand"] = c.subcommand;
  j["q0"] = c.q0;
  j["max"] = c.max;
  j["w"] = c.w;
  j["shrink"] = c.shrink;
  j["support"] = c.support;
  j["X"] = c.X;
  j["delta"] = c.delta;
  j["budget"] = c.budget;
  j["strategy"] = c.strategy;
  j["weight"] = c.weight;
  j["star"] = c.star;
  j["d"] = c.d;
  j["Q"] = c.Q;
  j["square"] = c.square;
  j["threads"] = threads;
  j["out"] = c.out.string();
  return j;
}

ordered_json square_json(const MagicSquare& sq) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({sq.at(r, 0), sq.at(r, 1), sq.at(r, 2)});
  return rows;
}

struct Context {
  const RunConfig& config;
  unsigned threads;
  std::ostream& log;
  ordered_json& manifest;

  void emit(const std::string& name, const std::string& body) {
    write_atomic(config.out / name, body);
    manifest["outputs"].push_back(name);
  }
  void emit_json(const std::string& name, const ordered_json& j) { emit(name, j.dump(2) + "\n"); }

  Cutoff cutoff() const { return Cutoff(config.shrink, config.support); }
  WNormalization normalization() {
    auto norm = compute_w_normalization(config.w, config.q0);
    manifest["derived"]["W"] = norm.W;
    manifest["derived"]["a_W"] = norm.a_W;
    manifest["derived"]["b_W"] = norm.b_W;
    return norm;
  }
  WeightKind weight() const {
    if (auto k = parse_weight_kind(config.weight)) return *k;
    throw Error(ErrorKind::InvalidArgument, "unknown weight kind " + config.weight);
  }
  Residual star() const {
    if (auto s = parse_residual(config.star)) return *s;
    throw Error(ErrorKind::InvalidArgument, "unknown residual " + config.star);
  }
  SearchOptions search_options() const {
    SearchOptions o;
    const auto s = parse_strategy(config.strategy);
    if (!s) throw Error(ErrorKind::InvalidArgument, "unknown strategy " + config.strategy);
    o.strategy = *s;
    o.budget = config.budget;
    o.w = config.w;
    return o;
  }
};

int run_construct(Context& ctx) {
  const auto outcome = find_solution(ctx.config.q0, ctx.search_options());
  ctx.manifest["derived"]["candidates_tested"] = outcome.candidates_tested;
  if (!outcome.found()) {
    ctx.log << "no solution within budget (" << outcome.candidates_tested << " candidates)\n";
    return kExitExhausted;
  }
  const auto& s = *outcome.solution;
  ordered_json rec;
  rec["q0"] = s.q0;
  rec["t"] = s.t;
  rec["u"] = s.u;
  rec["e"] = s.square.center();
  rec["magic_constant"] = s.magic_constant;
  rec["square"] = square_json(s.square);
  rec["strategy"] = to_string(s.strategy);
  rec["candidates_tested"] = s.candidates_tested;
  rec["wall_time_seconds"] = s.wall_time_seconds;
  ctx.emit_json("solution.json", rec);
  ctx.emit("square.csv", CsvTable({"q0", "t", "u", "square"})
                             .row({std::to_string(s.q0), std::to_string(s.t), std::to_string(s.u),
                                   quoted(to_csv(s.square))})
                             .str());
  ctx.log << to_csv(s.square) << '\n';
  return kExitOk;
}

int run_verify(Context& ctx) {
  const MagicSquare sq = parse_square(ctx.config.square);
  const auto report = verify_prime_magic(sq, ctx.config.q0);
  ordered_json j;
  j["square"] = square_json(sq);
  j["q0"] = ctx.config.q0;
  j["is_magic"] = report.is_magic;
  j["all_positive"] = report.all_positive;
  j["all_prime"] = report.all_prime;
  j["all_distinct"] = report.all_distinct;
  j["contains_q0"] = report.contains_q0;
  j["failures"] = report.failures;
  j["passed"] = report.passed();
  ctx.emit_json("verify.json", j);
  ctx.log << (report.passed() ? "verified" : "not verified") << '\n';
  for (const auto& f : report.failures) ctx.log << "  " << f << '\n';
  return report.passed() ? kExitOk : kExitCheckFailed;
}

int run_scan(Context& ctx) {
  const auto summary = scan_primes(ctx.config.max, ctx.search_options(), ctx.threads);
  CsvTable table({"q0", "found", "t", "u", "magic_constant", "candidates_tested", "verified"});
  for (const auto& r : summary.rows) {
    table.row({std::to_string(r.q0), r.found ? "1" : "0", std::to_string(r.t), std::to_string(r.u),
               std::to_string(r.magic_constant), std::to_string(r.candidates_tested),
               r.verified ? "1" : "0"});
  }
  ctx.emit("scan.csv", table.str());
  ctx.manifest["derived"]["rows"] = summary.rows.size();
  ctx.manifest["derived"]["found"] = summary.found_count;
  ctx.manifest["derived"]["success_rate"] = summary.success_rate;
  ctx.manifest["derived"]["scan_wall_time_seconds"] = summary.wall_time_seconds;
  ctx.log << summary.found_count << " of " << summary.rows.size() << " found\n";
  return summary.found_count == summary.rows.size() ? kExitOk : kExitExhausted;
}

int run_local(Context& ctx) {
  const auto rows = local_density_table(ctx.config.q0, ctx.config.max, ctx.config.w);
  CsvTable table({"p", "core_count", "g1_num", "g1_den", "g2_num", "g2_den", "gdelta_num",
                  "gdelta_den", "sigma_p", "beta_p"});
  auto parts = [](const std::optional<Rational>& g) -> std::pair<std::string, std::string> {
    if (!g) return {"", ""};
    return {std::to_string(g->num()), std::to_string(g->den())};
  };
  for (const auto& r : rows) {
    const auto [n1, d1] = parts(r.g1);
    const auto [n2, d2] = parts(r.g2);
    const auto [n3, d3] = parts(r.g_diag);
    table.row({std::to_string(r.p), std::to_string(r.core_count), n1, d1, n2, d2, n3, d3,
               num(r.sigma), num(r.beta)});
  }
  ctx.emit("local.csv", table.str());
  ctx.log << rows.size() << " primes\n";
  return kExitOk;
}

int run_mass(Context& ctx) {
  const auto norm = ctx.normalization();
  MassOptions opts;
  opts.threads = ctx.threads;
  const auto r = core_mass(norm, ctx.cutoff(), ctx.config.X, ctx.weight(), opts);
  ctx.emit("mass.csv", CsvTable({"q0", "X", "weight", "m1", "m1_over_x2", "joint", "support_points",
                                 "core_prime_points", "all_eight_points", "singular_core",
                                 "cutoff_integral", "c_pred"})
                           .row({std::to_string(norm.q0), std::to_string(r.X), to_string(r.kind),
                                 num(r.m1), num(r.ratio), num(r.joint),
                                 std::to_string(r.support_points), std::to_string(r.core_prime_points),
                                 std::to_string(r.all_eight_points), num(r.singular_core),
                                 num(r.cutoff_integral), num(r.c_pred)})
                           .str());
  ctx.log << "M1 = " << num(r.m1) << ", M1/X^2 = " << num(r.ratio) << ", predicted " << num(r.c_pred)
          << '\n';
  return kExitOk;
}

int run_joint(Context& ctx) {
  const auto norm = ctx.normalization();
  const auto field = CoreMassField::build(norm, ctx.cutoff(), ctx.config.X, WeightKind::Theta, ctx.threads);
  ctx.emit("joint.csv", CsvTable({"q0", "X", "joint", "m1", "all_eight_points"})
                            .row({std::to_string(norm.q0), std::to_string(ctx.config.X), num(field.joint()),
                                  num(field.m1()), std::to_string(field.all_eight_points())})
                            .str());
  ctx.log << "C = " << num(field.joint()) << " (" << field.all_eight_points() << " all-prime points)\n";
  return kExitOk;
}

int run_restricted(Context& ctx) {
  const auto norm = ctx.normalization();
  const Residual star = ctx.star();
  const auto field = CoreMassField::build(norm, ctx.cutoff(), ctx.config.X, ctx.weight(), ctx.threads);
  const double a = field.restricted_mass(ctx.config.d, star);
  const double g = g_star_multiplicative(ctx.config.d, norm.q0, star);
  ctx.emit("restricted.csv",
           CsvTable({"q0", "X", "star", "d", "restricted", "density", "predicted", "error"})
               .row({std::to_string(norm.q0), std::to_string(ctx.config.X), to_string(star),
                     std::to_string(ctx.config.d), num(a), num(g), num(g * field.m1()),
                     num(a - g * field.m1())})
               .str());
  ctx.log << "A_d = " << num(a) << ", g(d) M1 = " << num(g * field.m1()) << '\n';
  return kExitOk;
}

int run_discrepancy(Context& ctx) {
  const auto norm = ctx.normalization();
  const Residual star = ctx.star();
  const auto field = CoreMassField::build(norm, ctx.cutoff(), ctx.config.X, ctx.weight(), ctx.threads);
  const auto r = discrepancy_sum(field, ctx.config.delta, star);
  CsvTable rows({"q0", "X", "delta", "star", "d", "mu", "restricted", "density", "predicted", "error"});
  for (const auto& row : r.rows) {
    rows.row({std::to_string(norm.q0), std::to_string(r.X), num(r.delta), to_string(star),
              std::to_string(row.d), std::to_string(row.mu), num(row.restricted), num(row.density),
              num(row.predicted), num(row.error)});
  }
  ctx.emit("discrepancy.csv", rows.str());
  ctx.emit("discrepancy_summary.csv",
           CsvTable({"q0", "X", "delta", "star", "level", "m1", "sum_abs", "normalized_abs", "sum_unit",
                     "normalized_unit", "sum_moebius", "normalized_moebius"})
               .row({std::to_string(norm.q0), std::to_string(r.X), num(r.delta), to_string(star),
                     std::to_string(r.level), num(r.m1), num(r.sum_abs), num(r.normalized_abs()),
                     num(r.sum_unit), num(r.normalized(SieveWeights::Unit)), num(r.sum_moebius),
                     num(r.normalized(SieveWeights::Moebius))})
               .str());
  ctx.log << "D = " << r.level << ", sum |A_d - g(d) M1| / M1 = " << num(r.normalized_abs()) << '\n';
  return kExitOk;
}

int run_bdh(Context& ctx) {
  const auto r = bdh_variance(ctx.config.X, ctx.config.Q, ctx.threads);
  CsvTable rows({"X", "Q", "q", "contribution"});
  for (std::size_t i = 0; i < r.per_modulus.size(); ++i) {
    rows.row({std::to_string(r.X), std::to_string(r.Q), std::to_string(i + 1), num(r.per_modulus[i])});
  }
  ctx.emit("bdh.csv", rows.str());
  ctx.emit("bdh_summary.csv",
           CsvTable({"X", "Q", "variance", "normalized", "log_power", "window_mass"})
               .row({std::to_string(r.X), std::to_string(r.Q), num(r.variance), num(r.normalized()),
                     num(r.log_power), num(r.window_mass)})
               .str());
  ctx.log << "V = " << num(r.variance) << ", V/(XQ) = " << num(r.normalized()) << '\n';
  return kExitOk;
}

int run_diagcheck(Context& ctx) {
  const auto norm = ctx.normalization();
  const auto field = CoreMassField::build(norm, ctx.cutoff(), ctx.config.X, ctx.weight(), ctx.threads);
  const auto r = diagonal_mass_check(field);
  const auto dirs = diagonal_direction_check(norm.q0);
  ctx.emit("diagcheck.csv",
           CsvTable({"q0", "X", "weight", "m1", "diagonal_total", "relative_error", "support_rowwise",
                     "support_diagonal", "mass_points_rowwise", "mass_points_diagonal",
                     "directions_ok", "passed"})
               .row({std::to_string(norm.q0), std::to_string(r.X), to_string(field.kind()), num(r.m1),
                     num(r.diagonal_total), num(r.relative_error), std::to_string(r.support_rowwise),
                     std::to_string(r.support_diagonal), std::to_string(r.mass_points_rowwise),
                     std::to_string(r.mass_points_diagonal), dirs.ok() ? "1" : "0",
                     r.passed() ? "1" : "0"})
               .str());
  ctx.log << "relative error " << num(r.relative_error) << (r.passed() && dirs.ok() ? ", ok\n" : ", FAILED\n");
  return r.passed() && dirs.ok() ? kExitOk : kExitCheckFailed;
}

int run_region(Context& ctx) {
  const Cutoff chi = ctx.cutoff();
  CsvTable table({"X", "m", "n", "x", "y", "chi", "in_k0"});
  std::uint64_t points = 0;
  for (const auto& row : support_rows(chi, ctx.config.X)) {
    for (std::int64_t n = row.y_lo; n <= row.y_hi; ++n) {
      const double x = static_cast<double>(row.x) / static_cast<double>(ctx.config.X);
      const double y = static_cast<double>(n) / static_cast<double>(ctx.config.X);
      const double v = chi.at_scale(row.x, n, ctx.config.X);
      table.row({std::to_string(ctx.config.X), std::to_string(row.x), std::to_string(n), num(x), num(y),
                 num(v), v == 1.0 ? "1" : "0"});
      ++points;
    }
  }
  ctx.emit("region.csv", table.str());
  ctx.manifest["derived"]["support_points"] = points;
  ctx.manifest["derived"]["margin"] = chi.margin();
  ctx.log << points << " support points\n";
  return kExitOk;
}

void validate(const RunConfig& c) {
  bool known = false;
  for (const char* s : kSubcommands) known = known || c.subcommand == s;
  if (!known) throw Error(ErrorKind::InvalidArgument, "unknown subcommand '" + c.subcommand + "'");
  if (!(0.0 < c.shrink && c.shrink < c.support && c.support < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "need 0 < shrink < support < 1");
  }
  if (c.X < 1) throw Error(ErrorKind::InvalidArgument, "X must be positive");
  if (c.budget == 0) throw Error(ErrorKind::InvalidArgument, "budget must be positive");
  if (c.subcommand == "verify" && c.square.empty()) {
    throw Error(ErrorKind::InvalidArgument, "verify needs --square");
  }
  if ((c.subcommand == "scan" || c.subcommand == "local") && c.max < 1) {
    throw Error(ErrorKind::InvalidArgument, c.subcommand + " needs --max");
  }
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SmallObstruction: return kExitSmallObstruction;
    case ErrorKind::Resource:
    case ErrorKind::Overflow: return kExitResource;
    default: return kExitInvalidConfig;
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Resource, "cannot write " + tmp.string());
    f << contents;
    f.flush();
    if (!f) throw Error(ErrorKind::Resource, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

int dispatch(const RunConfig& config, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const unsigned threads = config.threads == 0 ? default_threads() : config.threads;
  ordered_json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["git_describe"] = PRIMESQUARE_GIT_DESCRIBE;
  manifest["started_utc"] = utc_now();
  manifest["config"] = config_json(config, threads);
  manifest["derived"] = ordered_json::object();
  manifest["outputs"] = ordered_json::array();

  int code = kExitOk;
  try {
    std::filesystem::create_directories(config.out);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  try {
    validate(config);
    Context ctx{config, threads, log, manifest};
    const std::string& s = config.subcommand;
    if (s == "construct") code = run_construct(ctx);
    else if (s == "verify") code = run_verify(ctx);
    else if (s == "scan") code = run_scan(ctx);
    else if (s == "local") code = run_local(ctx);
    else if (s == "mass") code = run_mass(ctx);
    else if (s == "joint") code = run_joint(ctx);
    else if (s == "restricted") code = run_restricted(ctx);
    else if (s == "discrepancy") code = run_discrepancy(ctx);
    else if (s == "bdh") code = run_bdh(ctx);
    else if (s == "diagcheck") code = run_diagcheck(ctx);
    else code = run_region(ctx);
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    manifest["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    log << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
  } catch (const std::bad_alloc&) {
    code = kExitResource;
    manifest["error"] = {{"kind", "resource"}, {"message", "out of memory"}};
    log << "error: out of memory\n";
  } catch (const std::exception& e) {
    code = kExitInvalidConfig;
    manifest["error"] = {{"kind", "other"}, {"message", e.what()}};
    log << "error: " << e.what() << '\n';
  }
  manifest["exit_code"] = code;
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  try {
    write_atomic(config.out / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    if (code == kExitOk) code = kExitResource;
  }
  return code;
}

int run_cli(int argc, char** argv) {
  RunConfig config;
  std::string out = ".";
  CLI::App app{"Magic squares of primes: construction and the measurable quantities around it"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--q0", config.q0, "prescribed prime");
  app.add_option("--max", config.max, "scan: largest q0; local: largest p");
  app.add_option("--w", config.w, "W-trick threshold");
  app.add_option("--shrink", config.shrink, "cutoff plateau factor");
  app.add_option("--support", config.support, "cutoff support factor");
  app.add_option("--X", config.X, "scale");
  app.add_option("--delta", config.delta, "level exponent, D = X^delta");
  app.add_option("--budget", config.budget, "search candidates");
  app.add_option("--strategy", config.strategy, "lex | region | wtrick");
  app.add_flag_callback("--region-strict", [&] { config.strategy = "region"; }, "same as --strategy region");
  app.add_option("--weight", config.weight, "theta | lambda | indicator");
  app.add_option("--star", config.star, "residual: 1 | 2 | delta");
  app.add_option("--d", config.d, "restricted modulus");
  app.add_option("--Q", config.Q, "largest modulus for bdh");
  app.add_option("--square", config.square, "nine comma-separated entries, row-major");
  app.add_option("--threads", config.threads, "worker threads (0: all cores)");
  app.add_option("--out", out, "output directory");

  const std::pair<const char*, const char*> help[] = {
      {"construct", "find a prime magic square containing q0"},
      {"verify", "check a square"},
      {"scan", "construct for every prime 5 <= q0 <= max"},
      {"local", "local densities and factors for p <= max"},
      {"mass", "core mass M1(X)"},
      {"joint", "joint residual functional C(X)"},
      {"restricted", "restricted mass A_d"},
      {"discrepancy", "sieve discrepancy over d <= X^delta"},
      {"bdh", "Barban-Davenport-Halberstam variance"},
      {"diagcheck", "diagonal conservation check"},
      {"region", "support of chi at scale X as a point cloud"},
  };
  for (const auto& [name, text] : help) {
    app.add_subcommand(name, text)->callback([&config, n = std::string(name)] { config.subcommand = n; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalidConfig;
  }
  config.out = out;
  return dispatch(config, std::cout);
}

}  // namespace primesquare
