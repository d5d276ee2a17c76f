// Command-line front end: count, bounds, classify, simulate, conductance,
// peierls.  Every invocation writes its primary artifact plus a manifest
// sufficient to reproduce it.
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hc2/bounds.hpp"
#include "hc2/dynamics.hpp"
#include "hc2/enumerate.hpp"
#include "hc2/errors.hpp"
#include "hc2/hardcore.hpp"
#include "hc2/topology.hpp"
#include "manifest.hpp"

namespace {

using nlohmann::json;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void ensure_writable(const std::string& path, bool force) {
  if (!force && std::filesystem::exists(path))
    throw usage_error(path + " exists; pass --force to overwrite");
}

hc2::Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    hc2::BigInt num(s.substr(0, slash));
    hc2::BigInt den(s.substr(slash + 1));
    if (den == 0) throw usage_error("zero denominator in " + s);
    return hc2::Rational(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return hc2::Rational(hc2::BigInt(s));
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  hc2::BigInt den = 1;
  for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  return hc2::Rational(hc2::BigInt(digits), den);
}

// Applies a JSON config ({"count": {"n": 20}, ...}) as option defaults.
void apply_config(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hc2::format_error("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw hc2::format_error(std::string("bad config JSON: ") + e.what());
  }
  for (const auto& [sub_name, section] : j.items()) {
    CLI::App* sub = app.get_subcommand_no_throw(sub_name);
    if (sub == nullptr)
      throw hc2::format_error("config references unknown command " + sub_name);
    for (const auto& [key, value] : section.items()) {
      CLI::Option* opt = sub->get_option_no_throw("--" + key);
      if (opt == nullptr)
        throw hc2::format_error("config references unknown option --" + key +
                                " of " + sub_name);
      std::string text =
          value.is_string() ? value.get<std::string>() : value.dump();
      opt->default_val(text);
      opt->required(false);  // the config satisfies it
    }
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::size_t alm_memory_cap() {
  const char* env = std::getenv("HC2_ALM_MAX_BYTES");
  if (env == nullptr) return 0;
  return static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
}

int cmd_count(int n, bool bridges, int workers, const std::string& checkpoint,
              bool extended, const std::string& out, bool force,
              const std::vector<std::string>& argv) {
  if (n < 1) throw usage_error("--n must be at least 1");
  if (n > 40 && !extended)
    throw usage_error("lengths beyond 40 need --extended (long run)");
  ensure_writable(out, force);
  Timer timer;

  hc2::CountOptions opts;
  opts.n_max = n;
  opts.workers = workers;
  opts.checkpoint_path = checkpoint;
  hc2::CountResult walks = hc2::run_enumeration(opts);
  hc2::WalkTable table;
  for (int k = 1; k <= n; ++k)
    table.rows.push_back(
        {k, walks.counts[static_cast<std::size_t>(k - 1)], std::nullopt});
  if (bridges) {
    opts.bridges = true;
    if (!checkpoint.empty()) opts.checkpoint_path = checkpoint + ".bridges";
    hc2::CountResult b = hc2::run_enumeration(opts);
    for (int k = 1; k <= n; ++k)
      table.rows[static_cast<std::size_t>(k - 1)].bridges =
          b.counts[static_cast<std::size_t>(k - 1)];
  }
  table.save_csv(out);

  hc2::cli::RunManifest manifest;
  manifest.command = "count";
  manifest.argv = argv;
  manifest.parameters_json =
      json{{"n", n},
           {"bridges", bridges},
           {"workers", workers},
           {"checkpoint", checkpoint},
           {"extended", extended},
           {"out", out}}
          .dump();
  manifest.wall_ms = timer.ms();
  manifest.outputs = {out};
  manifest.write(out);
  std::cout << "wrote " << out << " (n <= " << n << ")\n";
  return 0;
}

int cmd_bounds(bool fekete, bool alm, bool lambda_only, int m, int n,
               double mu_arg, const std::string& table_path, double tol,
               bool extended, const std::string& dump_path,
               const std::string& out, bool force,
               const std::vector<std::string>& argv) {
  if (static_cast<int>(fekete) + static_cast<int>(alm) +
          static_cast<int>(lambda_only) !=
      1)
    throw usage_error("pick exactly one of --fekete, --alm, --lambda");
  ensure_writable(out, force);
  Timer timer;

  hc2::BoundsReport report;
  report.eig_tol = tol;
  if (lambda_only) {
    if (mu_arg < 1) throw usage_error("--mu must be at least 1");
    report.method = "thresholds";
    report.mu_upper = mu_arg;
    report.mu_lower = std::numeric_limits<double>::quiet_NaN();
    report.lambda_torus = hc2::lambda_torus(mu_arg);
    report.lambda_box = hc2::lambda_box(mu_arg);
  } else if (fekete) {
    if (table_path.empty()) throw usage_error("--fekete needs --table");
    hc2::WalkTable table = hc2::WalkTable::load_csv(table_path);
    if (n < 1) throw usage_error("--n must be at least 1");
    report.method = "fekete";
    report.n = n;
    report.mu_upper = hc2::fekete_upper(table, n);
    report.mu_lower = table.has_bridges(n)
                          ? hc2::bridge_lower(table, n)
                          : std::numeric_limits<double>::quiet_NaN();
    report.lambda_torus = hc2::lambda_torus(report.mu_upper);
    report.lambda_box = hc2::lambda_box(report.mu_upper);
  } else {
    if (m < 0 || n <= m) throw usage_error("need 0 <= m < n");
    if (n > 40 && !extended)
      throw usage_error("lengths beyond 40 need --extended (long run)");
    report.method = "alm";
    report.m = m;
    report.n = n;
    hc2::AlmMatrix matrix = hc2::build_alm_matrix(m, n, alm_memory_cap());
    if (!dump_path.empty()) {
      ensure_writable(dump_path, force);
      matrix.save(dump_path);
    }
    report.mu_upper = hc2::alm_upper(matrix);
    report.mu_lower = std::numeric_limits<double>::quiet_NaN();
    if (!table_path.empty()) {
      hc2::WalkTable table = hc2::WalkTable::load_csv(table_path);
      int best = 0;
      for (int k = 1; k <= table.max_n(); ++k)
        if (table.has_bridges(k)) best = k;
      if (best > 0) report.mu_lower = hc2::bridge_lower(table, best);
    }
    report.lambda_torus = hc2::lambda_torus(report.mu_upper);
    report.lambda_box = hc2::lambda_box(report.mu_upper);
  }

  std::string payload = report.to_json();
  {
    std::ofstream f(out);
    f << payload << '\n';
  }
  std::cout << payload << '\n';

  hc2::cli::RunManifest manifest;
  manifest.command = "bounds";
  manifest.argv = argv;
  manifest.parameters_json = json{{"fekete", fekete},
                                  {"alm", alm},
                                  {"lambda", lambda_only},
                                  {"m", m},
                                  {"n", n},
                                  {"mu", mu_arg},
                                  {"table", table_path},
                                  {"tol", tol},
                                  {"out", out}}
                                 .dump();
  manifest.wall_ms = timer.ms();
  manifest.outputs = {out};
  manifest.write(out);
  return 0;
}

int cmd_classify(const std::string& in_path, bool torus, const std::string& out,
                 bool force, const std::vector<std::string>& argv) {
  ensure_writable(out, force);
  Timer timer;
  std::string text;
  if (in_path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(in_path);
    if (!f) throw hc2::format_error("cannot open " + in_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  hc2::Configuration c = hc2::Configuration::from_grid(
      text, torus ? hc2::Boundary::Toroidal : hc2::Boundary::Free);
  if (!hc2::is_independent(c))
    throw hc2::format_error("configuration is not an independent set");
  hc2::TopologyClass t = hc2::classify(c);
  std::string payload = t.to_json(c);
  {
    std::ofstream f(out);
    f << payload << '\n';
  }
  std::cout << payload << '\n';

  hc2::cli::RunManifest manifest;
  manifest.command = "classify";
  manifest.argv = argv;
  manifest.parameters_json =
      json{{"in", in_path}, {"torus", torus}, {"out", out}}.dump();
  manifest.wall_ms = timer.ms();
  manifest.outputs = {out};
  manifest.write(out);
  return 0;
}

int cmd_simulate(const std::string& region_spec, double lambda,
                 std::uint64_t steps, std::uint64_t seed, std::uint64_t every,
                 const std::string& out, bool force,
                 const std::vector<std::string>& argv) {
  if (lambda <= 0) throw usage_error("--lambda must be positive");
  if (every < 1) throw usage_error("--record-every must be at least 1");
  ensure_writable(out, force);
  Timer timer;
  hc2::Region region = hc2::Region::parse(region_spec);
  hc2::ChainState chain = hc2::make_chain(region, seed);
  hc2::GibbsParams params{lambda};

  std::ofstream trace(out);
  trace << "step,occupancy,even_minus_odd,class\n";
  auto record = [&]() {
    int even = 0, odd = 0;
    for (int v = 0; v < region.cells(); ++v)
      if (chain.config.occupied(v)) (region.parity(v) == 0 ? even : odd)++;
    trace << chain.step << ',' << chain.config.count() << ',' << (even - odd)
          << ',' << hc2::to_string(hc2::coarse_class(chain.config)) << '\n';
  };
  for (std::uint64_t i = 1; i <= steps; ++i) {
    hc2::transition_step(chain, params);
    if (i % every == 0 || i == steps) record();
  }
  trace.close();

  hc2::cli::RunManifest manifest;
  manifest.command = "simulate";
  manifest.argv = argv;
  manifest.parameters_json = json{{"region", region_spec},
                                  {"lambda", lambda},
                                  {"steps", steps},
                                  {"seed", seed},
                                  {"record_every", every},
                                  {"out", out}}
                                 .dump();
  manifest.seed = seed;
  manifest.wall_ms = timer.ms();
  manifest.outputs = {out};
  manifest.write(out);
  std::cout << "wrote " << out << " (" << steps << " steps)\n";
  return 0;
}

int cmd_conductance(const std::string& region_spec, const std::string& lambda,
                    int state_cap, const std::string& out, bool force,
                    const std::vector<std::string>& argv) {
  ensure_writable(out, force);
  Timer timer;
  hc2::Region region = hc2::Region::parse(region_spec);
  hc2::Rational lam = parse_rational(lambda);
  if (lam <= 0) throw usage_error("--lambda must be positive");
  hc2::ConductanceReport report =
      hc2::spectral_gap_and_conductance(region, lam, state_cap);
  std::string payload = report.to_json();
  {
    std::ofstream f(out);
    f << payload << '\n';
  }
  std::cout << payload << '\n';

  hc2::cli::RunManifest manifest;
  manifest.command = "conductance";
  manifest.argv = argv;
  manifest.parameters_json = json{{"region", region_spec},
                                  {"lambda", lambda},
                                  {"state_cap", state_cap},
                                  {"out", out}}
                                 .dump();
  manifest.wall_ms = timer.ms();
  manifest.outputs = {out};
  manifest.write(out);
  return 0;
}

int cmd_peierls(double lambda, double mu, bool quarter, const std::string& out,
                bool force, const std::vector<std::string>& argv) {
  ensure_writable(out, force);
  Timer timer;
  long long m = hc2::peierls_cutoff(lambda, mu, quarter);
  json j{{"lambda", lambda},
         {"mu", mu},
         {"sum_start", quarter ? "ceil(m/4)" : "m"},
         {"cutoff", m}};
  std::string payload = j.dump(2);
  {
    std::ofstream f(out);
    f << payload << '\n';
  }
  std::cout << payload << '\n';

  hc2::cli::RunManifest manifest;
  manifest.command = "peierls";
  manifest.argv = argv;
  manifest.parameters_json = payload;
  manifest.wall_ms = timer.ms();
  manifest.outputs = {out};
  manifest.write(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taxi-walk enumeration and hard-core lattice toolkit"};
  app.require_subcommand(1);
  bool force = false;
  std::string config_path;
  app.add_flag("--force", force, "overwrite existing artifacts");
  app.add_option("--config", config_path,
                 "JSON file mirroring subcommand options");

  auto* count = app.add_subcommand("count", "enumerate taxi walks/bridges");
  int count_n = 0;
  bool count_bridges_flag = false;
  int count_workers = 1;
  bool count_extended = false;
  std::string count_checkpoint, count_out = "counts.csv";
  count->add_option("--n", count_n, "maximum walk length")->required();
  count->add_flag("--bridges", count_bridges_flag, "also count bridges");
  count->add_option("--workers", count_workers, "worker threads");
  count->add_option("--checkpoint", count_checkpoint, "resumable state file");
  count->add_flag("--extended", count_extended, "allow long runs (n > 40)");
  count->add_option("--out", count_out, "counts CSV path");

  auto* bounds = app.add_subcommand("bounds", "connective-constant bounds");
  bool b_fekete = false, b_alm = false, b_lambda = false, b_extended = false;
  int b_m = -1, b_n = 0;
  double b_mu = 0, b_tol = 1e-9;
  std::string b_table, b_out = "bounds.json";
  bounds->add_flag("--fekete", b_fekete, "subadditive bound from a table");
  bounds->add_flag("--alm", b_alm, "matrix-method bound A(m,n)");
  bounds->add_flag("--lambda", b_lambda, "thresholds from a given mu");
  bounds->add_option("--m", b_m, "classifying segment length");
  bounds->add_option("--n", b_n, "walk length");
  bounds->add_option("--mu", b_mu, "connective constant value");
  bounds->add_option("--table", b_table, "counts CSV from `count`");
  bounds->add_option("--tol", b_tol, "relative eigenvalue enclosure width");
  bounds->add_flag("--extended", b_extended, "allow long runs (n > 40)");
  std::string b_dump;
  bounds->add_option("--dump-matrix", b_dump,
                     "write the count matrix as `i j count` triplets");
  bounds->add_option("--out", b_out, "report path");

  auto* classify_cmd = app.add_subcommand("classify", "fault/cross class");
  std::string cl_in, cl_out = "witness.json";
  bool cl_torus = false;
  classify_cmd->add_option("--in", cl_in, "grid file of . and o (- for stdin)")
      ->required();
  classify_cmd->add_flag("--torus", cl_torus, "toroidal boundary");
  classify_cmd->add_option("--out", cl_out, "witness path");

  auto* simulate = app.add_subcommand("simulate", "Glauber dynamics trace");
  std::string s_region = "torus:8", s_out = "trace.csv";
  double s_lambda = 1.0;
  std::uint64_t s_steps = 100000, s_seed = 1, s_every = 100;
  simulate->add_option("--region", s_region, "grid:WxH or torus:N");
  simulate->add_option("--lambda", s_lambda, "activity");
  simulate->add_option("--steps", s_steps, "chain steps");
  simulate->add_option("--seed", s_seed, "RNG seed");
  simulate->add_option("--record-every", s_every, "trace sampling interval");
  simulate->add_option("--out", s_out, "trace CSV path");

  auto* conduct = app.add_subcommand("conductance", "exact chain analysis");
  std::string c_region = "grid:3x3", c_lambda = "1", c_out = "conductance.json";
  int c_cap = hc2::kDefaultStateCap;
  conduct->add_option("--region", c_region, "grid:WxH or torus:N");
  conduct->add_option("--lambda", c_lambda, "activity (rational p/q ok)");
  conduct->add_option("--state-cap", c_cap, "maximum number of states");
  conduct->add_option("--out", c_out, "report path");

  auto* peierls = app.add_subcommand("peierls", "contour-sum cutoff");
  double p_lambda = 0, p_mu = 0;
  bool p_quarter = false;
  std::string p_out = "peierls.json";
  peierls->add_option("--lambda", p_lambda, "activity")->required();
  peierls->add_option("--mu", p_mu, "connective constant upper bound")
      ->required();
  peierls->add_flag("--quarter-start", p_quarter,
                    "sum the contour tail from ceil(m/4) instead of m");
  peierls->add_option("--out", p_out, "report path");

  // Global flags may follow the subcommand.
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  // Config defaults are applied before parsing proper.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  try {
    if (!config_path.empty()) apply_config(app, config_path);
  } catch (const hc2::format_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::vector<std::string> argv_copy(argv, argv + argc);
  try {
    if (count->parsed())
      return cmd_count(count_n, count_bridges_flag, count_workers,
                       count_checkpoint, count_extended, count_out, force,
                       argv_copy);
    if (bounds->parsed())
      return cmd_bounds(b_fekete, b_alm, b_lambda, b_m, b_n, b_mu, b_table,
                        b_tol, b_extended, b_dump, b_out, force, argv_copy);
    if (classify_cmd->parsed())
      return cmd_classify(cl_in, cl_torus, cl_out, force, argv_copy);
    if (simulate->parsed())
      return cmd_simulate(s_region, s_lambda, s_steps, s_seed, s_every, s_out,
                          force, argv_copy);
    if (conduct->parsed())
      return cmd_conductance(c_region, c_lambda, c_cap, c_out, force,
                             argv_copy);
    if (peierls->parsed())
      return cmd_peierls(p_lambda, p_mu, p_quarter, p_out, force, argv_copy);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hc2::resource_cap_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const hc2::format_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
