// Command-line driver: gen, run, verify, fit.

#include "tubekit/constructions.hpp"
#include "tubekit/errors.hpp"
#include "tubekit/experiments.hpp"
#include "tubekit/grid_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace tubekit;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct Common {
  std::optional<int> m;
  std::optional<std::string> sigma, constant;
  std::optional<long long> seed;
  std::string out;
};

void add_common(CLI::App* app, Common& c, const std::string& out_help) {
  app->add_option("--m", c.m, "grid resolution exponent (delta = 2^-m)");
  app->add_option("--sigma", c.sigma, "non-concentration exponent");
  app->add_option("--const", c.constant, "non-concentration constant C");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--out", c.out, out_help);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig build_config(const std::string& name, const std::string& config_file,
                              const std::vector<std::string>& overrides, const Common& c) {
  ExperimentConfig cfg = config_file.empty() ? ExperimentConfig{} : parse_config(slurp(config_file));
  if (!name.empty()) cfg.name = name;
  if (c.m) cfg.params["m"] = std::to_string(*c.m);
  if (c.sigma) cfg.params["sigma"] = *c.sigma;
  if (c.constant) cfg.params["C"] = *c.constant;
  if (c.seed) cfg.params["seed"] = std::to_string(*c.seed);
  apply_overrides(cfg, overrides);
  if (cfg.name.empty()) throw UsageError("no experiment named (positional argument or 'experiment' key)");
  return cfg;
}

void print_result(const ExperimentResult& r) {
  std::cout << r.summary_text();
  for (const auto& a : r.assertions)
    if (!a.pass) std::cerr << "assertion failed: " << a.name << (a.detail.empty() ? "" : " (" + a.detail + ")") << '\n';
}

// ---- gen ------------------------------------------------------------------------------------

void gen(const std::string& what, const std::vector<std::string>& tokens, const Common& c) {
  ExperimentConfig kv;
  apply_overrides(kv, tokens);
  const int m = c.m.value_or(static_cast<int>(kv.get_int("m", 10)));
  std::ostringstream out;
  if (what == "cantor") {
    const Rational lo = parse_rational(kv.get("lo", "0")), hi = parse_rational(kv.get("hi", "1"));
    const int ell = static_cast<int>(kv.get_int("ell", 4));
    // default depth: finest whose leaves are still whole cells
    const double cells = to_double(hi - lo) * std::exp2(m);
    int depth = 0;
    while (ell > 1 && std::pow(ell, depth + 1) <= cells) ++depth;
    CantorSpec s{static_cast<int>(kv.get_int("b", 2)), ell, static_cast<int>(kv.get_int("d", depth)), {}};
    if (kv.params.count("lo") || kv.params.count("hi"))
      write_gridset(out, cantor_set(s, m, lo, hi));
    else
      write_gridset(out, cantor_set(s));
  } else if (what == "ap") {
    write_gridset(out, ap_set(kv.get_int("n", 16), kv.get_int("gap", 1), m, kv.get_int("start", 0)));
  } else if (what == "gp") {
    write_gridset(out, gp_set(parse_rational(kv.get("ratio", "1/2")), kv.get_int("count", 6), m, kv.get_int("first", 2)));
  } else if (what == "square") {
    // product of a 1-D gridset read from file=<path>
    std::ifstream in(kv.get("file", ""));
    if (!in) throw UsageError("square needs file=<gridset>");
    write_gridset(out, product_square(read_gridset_1d(in)));
  } else if (what == "collinear" || what == "noncollinear" || what == "product-pencils") {
    std::vector<Pencil> pencils;
    if (what == "collinear") {
      pencils = collinear_tip_config(kv.get_int("n", 4), m).pencils;
    } else if (what == "noncollinear") {
      pencils = noncollinear_three_config(kv.get_int("n", 1), m).pencils;
    } else {
      std::ifstream in(kv.get("file", ""));
      if (!in) throw UsageError("product-pencils needs file=<gridset>");
      const auto p = product_pencils(read_gridset_1d(in));
      pencils.assign(p.begin(), p.end());
    }
    for (const auto& p : pencils) write_pencil(out, p);
  } else {
    throw UsageError("unknown construction '" + what +
                     "' (cantor, ap, gp, square, collinear, noncollinear, product-pencils)");
  }
  if (c.out.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.out);
    f << out.str();
  }
}

// ---- fit ------------------------------------------------------------------------------------

int fit(const std::string& csv, const std::string& xcol, const std::string& ycol) {
  const Table t = parse_csv(slurp(csv));
  const auto xs = t.column(xcol), ys = t.column(ycol);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xs[i], ys[i]);
  ExponentReport r;
  try {
    r = exponent_fit(pts);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  std::cout << "slope: " << fmt(r.slope) << "\nintercept: " << fmt(r.intercept)
            << "\nmax_residual: " << fmt(r.max_residual) << "\npoints: " << pts.size() << '\n';
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tubekit: discretized sum-product and tube-incidence experiments"};
  app.require_subcommand(1);

  Common gen_c, run_c, ver_c;
  std::string gen_what;
  std::vector<std::string> gen_kv;
  auto* g = app.add_subcommand("gen", "write a construction as a gridset or pencil file");
  g->add_option("construction", gen_what, "cantor | ap | gp | square | collinear | noncollinear | product-pencils")
      ->required();
  g->add_option("params", gen_kv, "key=value parameters");
  add_common(g, gen_c, "output file (default stdout)");

  std::string run_name, run_cfg;
  std::vector<std::string> run_kv;
  auto* r = app.add_subcommand("run", "run a named experiment and write its artifacts");
  r->add_option("experiment", run_name, "experiment name");
  r->add_option("params", run_kv, "key=value overrides");
  r->add_option("--config", run_cfg, "key = value config file");
  add_common(r, run_c, "artifact directory (default: current directory)");

  std::string ver_name, ver_cfg;
  std::vector<std::string> ver_kv;
  auto* v = app.add_subcommand("verify", "rerun an experiment and compare with the CSV in --out");
  v->add_option("experiment", ver_name, "experiment name");
  v->add_option("params", ver_kv, "key=value overrides");
  v->add_option("--config", ver_cfg, "key = value config file");
  add_common(v, ver_c, "directory holding the earlier artifacts");

  std::string fit_csv, fit_x, fit_y;
  auto* f = app.add_subcommand("fit", "least-squares log2 slope of y against 1/x from a CSV");
  f->add_option("csv", fit_csv, "CSV file")->required();
  f->add_option("--x", fit_x, "scale column")->required();
  f->add_option("--y", fit_y, "count column")->required();

  app.add_subcommand("list", "print the experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*g) {
      gen(gen_what, gen_kv, gen_c);
      return kPass;
    }
    if (*r) {
      const ExperimentResult res = run_experiment(build_config(run_name, run_cfg, run_kv, run_c));
      write_artifacts(res, run_c.out.empty() ? fs::path(".") : fs::path(run_c.out));
      print_result(res);
      return res.passed() ? kPass : kFail;
    }
    if (*v) {
      if (ver_c.out.empty()) throw UsageError("verify needs --out <dir>");
      const ExperimentResult res = run_experiment(build_config(ver_name, ver_cfg, ver_kv, ver_c));
      const fs::path old = fs::path(ver_c.out) / (res.name + ".csv");
      const bool same = slurp(old) == res.table.to_csv();
      std::cout << (same ? "identical: " : "differs: ") << old.string() << '\n';
      return same && res.passed() ? kPass : kFail;
    }
    if (*f) return fit(fit_csv, fit_x, fit_y);
    for (const auto& n : experiment_names()) std::cout << n << '\n';
    return kPass;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    // library precondition failures (domain, parameter, parse errors) from user input
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
