#include "npduet/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "npduet/analysis.hpp"
#include "npduet/bie_oracle.hpp"
#include "npduet/errors.hpp"
#include "npduet/spectral_solver.hpp"

namespace npduet {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_complex(Complex v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", v.real(), v.imag());
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
}

void write_json(std::ostream& os, const std::vector<Table>& tables, const std::vector<std::string>& names) {
  nlohmann::ordered_json doc;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : tables[t].rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) obj[tables[t].columns[i]] = row[i];
      arr.push_back(obj);
    }
    doc[names[t]] = arr;
  }
  os << doc.dump(2) << "\n";
}

void emit(const RunConfig& cfg, const std::vector<Table>& tables, const std::vector<std::string>& names) {
  std::string path = cfg.out_path;
  if (!path.empty()) {
    if (const char* dir = std::getenv("NP_DUET_OUT")) path = std::string(dir) + "/" + path;
  }
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw ConfigError("cannot open output path: " + path);
    os = &file;
  }
  if (cfg.format == "json") {
    write_json(*os, tables, names);
  } else if (cfg.format == "csv") {
    bool first = true;
    for (const auto& t : tables) {
      if (!first) *os << "\n";
      first = false;
      write_csv(*os, t);
    }
  } else {
    throw ConfigError("unknown output format: " + cfg.format);
  }
}

// ---------------------------------------------------------------------------
// Harmonic polynomial mini-grammar: x, y, integer powers, +, -, * (or the
// middle dot), numeric coefficients. Parsed to a bivariate coefficient map,
// checked for harmonicity symbolically, then completed analytically via
// chi(z) = 2 P(z/2, -iz/2) - P(0,0).
// ---------------------------------------------------------------------------

struct PolyParser {
  std::string s;
  std::size_t pos = 0;

  explicit PolyParser(std::string text) : s(std::move(text)) {}

  void skip() {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) != 0)) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_mult() {
    skip();
    if (pos < s.size() && s[pos] == '*') {
      ++pos;
      return true;
    }
    // UTF-8 middle dot 0xC2 0xB7
    if (pos + 1 < s.size() && static_cast<unsigned char>(s[pos]) == 0xC2 &&
        static_cast<unsigned char>(s[pos + 1]) == 0xB7) {
      pos += 2;
      return true;
    }
    return false;
  }

  using Monomials = std::map<std::pair<int, int>, double>;

  Monomials parse() {
    Monomials acc = parse_term(parse_sign());
    for (;;) {
      skip();
      if (pos >= s.size()) break;
      double sign;
      if (eat('+'))
        sign = 1;
      else if (eat('-'))
        sign = -1;
      else
        throw ConfigError("harmonic polynomial: expected '+' or '-' at '" + s.substr(pos) + "'");
      const Monomials t = parse_term(sign);
      for (const auto& [k, v] : t) acc[k] += v;
    }
    return acc;
  }

  double parse_sign() {
    double sign = 1;
    for (;;) {
      if (eat('+')) continue;
      if (eat('-')) {
        sign = -sign;
        continue;
      }
      return sign;
    }
  }

  Monomials parse_term(double sign) {
    double coef = sign;
    int px = 0, py = 0;
    bool any = false;
    for (;;) {
      skip();
      if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) != 0 || s[pos] == '.')) {
        std::size_t used = 0;
        coef *= std::stod(s.substr(pos), &used);
        pos += used;
        any = true;
      } else if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'y')) {
        const char var = s[pos++];
        int p = 1;
        if (eat('^')) {
          skip();
          std::size_t used = 0;
          p = std::stoi(s.substr(pos), &used);
          if (p < 0) throw ConfigError("harmonic polynomial: negative powers are not allowed");
          pos += used;
        }
        (var == 'x' ? px : py) += p;
        any = true;
      } else {
        throw ConfigError("harmonic polynomial: unexpected input at '" + s.substr(pos) + "'");
      }
      if (!eat_mult()) break;
    }
    if (!any) throw ConfigError("harmonic polynomial: empty term");
    Monomials m;
    m[{px, py}] = coef;
    return m;
  }
};

}  // namespace

std::vector<Complex> parse_harmonic_polynomial(const std::string& text) {
  PolyParser parser(text);
  const auto mono = parser.parse();
  int degree = 0;
  for (const auto& [k, v] : mono) degree = std::max(degree, k.first + k.second);
  if (degree > 32) throw ConfigError("harmonic polynomial: degree exceeds the cap of 32");
  // Symbolic harmonicity: Laplacian coefficients must cancel exactly.
  std::map<std::pair<int, int>, double> lap;
  for (const auto& [k, v] : mono) {
    const auto [a, b] = k;
    if (a >= 2) lap[{a - 2, b}] += v * a * (a - 1);
    if (b >= 2) lap[{a, b - 2}] += v * b * (b - 1);
  }
  for (const auto& [k, v] : lap)
    if (std::abs(v) > 1e-12)
      throw ConfigError("source polynomial is not harmonic (Laplacian has a x^" + std::to_string(k.first) +
                        " y^" + std::to_string(k.second) + " term)");
  // chi(z) = 2 P(z/2, -i z/2) - P(0,0)
  std::vector<Complex> bcoef(degree + 1, Complex(0, 0));
  for (const auto& [k, v] : mono) {
    const auto [a, b] = k;
    const Complex c = 2.0 * v * std::pow(Complex(0.5, 0), a) * std::pow(Complex(0, -0.5), b);
    bcoef[a + b] += c;
  }
  if (!mono.empty()) {
    const auto it = mono.find({0, 0});
    if (it != mono.end()) bcoef[0] = it->second;  // halve the doubled constant
  }
  while (bcoef.size() > 1 && std::abs(bcoef.back()) == 0.0) bcoef.pop_back();
  return bcoef;
}

double parse_conductivity(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw ConfigError("conductivity: trailing characters in '" + text + "'");
    if (v < 0) throw ConfigError("conductivity must be nonnegative");
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError("conductivity: cannot parse '" + text + "'");
  }
}

namespace {

SourceSpec make_source(const RunConfig& cfg, const DiskPair& g, double k1, double k2) {
  if (cfg.bump) {
    return disk_bump_source(g, k1, k2, Complex(cfg.bump->x0, cfg.bump->y0), cfg.bump->radius,
                            cfg.bump->amplitude);
  }
  return SourceSpec::harmonic(parse_harmonic_polynomial(cfg.source));
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions opt;
  opt.nmax = cfg.nmax;
  opt.tol = cfg.tol;
  opt.far_anchor = cfg.far_anchor;
  return opt;
}

const char* zone_name(Zone z) {
  switch (z) {
    case Zone::inclusion1: return "inclusion1";
    case Zone::annulus: return "annulus";
    case Zone::inclusion2: return "inclusion2";
  }
  return "?";
}

DiskPair geometry_from(const RunConfig& cfg) {
  if (!cfg.eps) throw ConfigError("missing --eps");
  return derive_geometry(cfg.r1, cfg.r2, *cfg.eps);
}

int cmd_solve(const RunConfig& cfg) {
  const DiskPair g = geometry_from(cfg);
  const double k1 = parse_conductivity(cfg.k1), k2 = parse_conductivity(cfg.k2);
  const SourceSpec src = make_source(cfg, g, k1, k2);
  const FieldSolution sol = solve_field(g, k1, k2, src, solver_options(cfg));

  Table t;
  t.columns = {"x", "y", "zone", "u", "ux", "uy", "uxx", "uxy", "uyy"};
  const auto& gr = cfg.grid;
  for (int j = 0; j < gr.n; ++j) {
    const double y = gr.n == 1 ? gr.y0 : gr.y0 + (gr.y1 - gr.y0) * j / (gr.n - 1.0);
    for (int i = 0; i < gr.n; ++i) {
      const double x = gr.n == 1 ? gr.x0 : gr.x0 + (gr.x1 - gr.x0) * i / (gr.n - 1.0);
      const Complex z(x, y);
      std::vector<std::string> row = {fmt17(x), fmt17(y)};
      try {
        const Zone zone = classify_zone(g, forward_map(g, z == Complex(0, 0) ? Complex(1e-300, 0) : z));
        const EvalResult r = sol.evaluate(z, 2);
        row.push_back(zone_name(zone));
        for (double v : {r.u, r.ux, r.uy, r.uxx, r.uxy, r.uyy}) row.push_back(fmt17(v));
      } catch (const Error&) {
        row.push_back("pole");
        for (int c = 0; c < 6; ++c) row.push_back("nan");
      }
      t.rows.push_back(std::move(row));
    }
  }
  emit(cfg, {t}, {"field"});
  return 0;
}

int cmd_spectrum(const RunConfig& cfg) {
  const DiskPair g = geometry_from(cfg);
  Table t;
  t.columns = {"n", "parity", "eigenvalue", "mode_norm", "C+", "C-", "a+", "a-"};
  const int nmax = cfg.nmax;
  std::vector<Complex> Cp, Cm;
  ModeCoefficients mc;
  const bool have_contrast = cfg.k1 != "1" && cfg.k2 != "1";
  if (have_contrast) {
    const double k1 = parse_conductivity(cfg.k1), k2 = parse_conductivity(cfg.k2);
    HarmonicPair hp = harmonic_pair_from_polynomial(g, parse_harmonic_polynomial(cfg.source), nmax);
    mode_data(g, hp, Cp, Cm);
    mc = solve_modes(lambda_from_k(k1), lambda_from_k(k2), g.rho, Cp, Cm);
  }
  for (int n = 1; n <= nmax; ++n) {
    for (Parity p : {Parity::plus, Parity::minus}) {
      SpectralMode mode{n, p, g.rho};
      std::vector<std::string> row = {std::to_string(n), p == Parity::plus ? "+" : "-",
                                      fmt17(mode.eigenvalue_two_disks()), fmt17(mode_norm_sq(g, n, p))};
      if (have_contrast && n <= static_cast<int>(Cp.size())) {
        row.push_back(fmt_complex(p == Parity::plus ? Cp[n - 1] : Cm[n - 1]));
        row.push_back(fmt_complex(p == Parity::plus ? Cm[n - 1] : Cp[n - 1]));
        row.push_back(fmt_complex(p == Parity::plus ? mc.a_plus[n - 1] : mc.a_minus[n - 1]));
        row.push_back(fmt_complex(p == Parity::plus ? mc.a_minus[n - 1] : mc.a_plus[n - 1]));
      } else {
        for (int c = 0; c < 4; ++c) row.push_back(fmt_complex(Complex(0, 0)));
      }
      t.rows.push_back(std::move(row));
    }
  }
  emit(cfg, {t}, {"spectrum"});
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  const DiskPair g = geometry_from(cfg);
  const double k1 = parse_conductivity(cfg.k1), k2 = parse_conductivity(cfg.k2);
  if (cfg.bump) throw ConfigError("oracle: cross-validation is defined for harmonic backgrounds");
  const SourceSpec src = make_source(cfg, g, k1, k2);
  const FieldSolution sol = solve_field(g, k1, k2, src, solver_options(cfg));

  const NystromSystem sys = assemble(g, cfg.nodes);
  // flux data of the background on the circles
  Eigen::VectorXd eta(sys.size());
  for (int i = 0; i < sys.size(); ++i) {
    const Jet2 j = sol.background(sys.nodes[i]);
    eta(i) = j.gx * sys.normals[i].real() + j.gy * sys.normals[i].imag();
  }
  const Eigen::VectorXd phi = oracle_solve(sys, lambda_from_k(k1), lambda_from_k(k2), eta);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ux(g.c1 - 2.5 * g.r1, g.c2 + 2.5 * g.r2);
  std::uniform_real_distribution<double> uy(-2.5 * std::max(g.r1, g.r2), 2.5 * std::max(g.r1, g.r2));
  double maxerr = 0, scale = 0;
  int got = 0;
  while (got < 50) {
    const Complex x(ux(rng), uy(rng));
    const double d1 = std::abs(std::abs(x - g.center(1)) - g.r1);
    const double d2 = std::abs(std::abs(x - g.center(2)) - g.r2);
    if (d1 < 0.05 || d2 < 0.05 || std::abs(x) < 1e-6) continue;
    ++got;
    const double uo = oracle_field(sys, phi, [&](Complex z) { return sol.background(z).v; }, x);
    const double us = sol.evaluate(x, 0).u;
    maxerr = std::max(maxerr, std::abs(uo - us));
    scale = std::max(scale, std::abs(uo));
  }

  Table t;
  t.columns = {"metric", "value"};
  t.rows.push_back({"max_rel_error", fmt17(maxerr / scale)});
  t.rows.push_back({"symmetrization_residual", fmt17(symmetrization_residual(sys))});
  const NystromSystem spec_sys = assemble(g, cfg.nodes, NodeLayout::conformal);
  const auto clusters = oracle_spectrum(spec_sys, 0);
  int half_mult = 0;
  for (const auto& c : clusters)
    if (std::abs(c.value - 0.5) < 1e-8) half_mult += c.multiplicity;
  t.rows.push_back({"half_eigenvalue_multiplicity", std::to_string(half_mult)});

  Table e;
  e.columns = {"n", "exact", "discrete", "abs_err", "multiplicity"};
  for (int n = 1; n <= 8; ++n) {
    for (int sgn : {-1, +1}) {
      const double target = sgn * 0.5 * std::pow(g.rho, n);
      double best = 1e300;
      int mult = 0;
      for (const auto& c : clusters) {
        if (std::abs(c.value - target) < std::abs(best - target)) {
          best = c.value;
          mult = c.multiplicity;
        }
      }
      e.rows.push_back({(sgn < 0 ? "-" : "+") + std::to_string(n), fmt17(target), fmt17(best),
                        fmt17(std::abs(best - target)), std::to_string(mult)});
    }
  }
  emit(cfg, {t, e}, {"summary", "eigenvalues"});
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  if (cfg.eps_list.empty()) throw ConfigError("sweep: missing --eps-list");
  const double k1 = parse_conductivity(cfg.k1), k2 = parse_conductivity(cfg.k2);
  // Source parsed against the first geometry (the bump spec is geometry-checked per eps).
  std::vector<SweepRecord> records;
  {
    SolverOptions opt = solver_options(cfg);
    const DiskPair g0 = derive_geometry(cfg.r1, cfg.r2, cfg.eps_list.front());
    const SourceSpec src = make_source(cfg, g0, k1, k2);
    records = sweep(cfg.r1, cfg.r2, k1, k2, src, cfg.eps_list, cfg.order, opt);
  }
  Table t;
  t.columns = {"eps", "rho", "lambda1", "lambda2", "order", "gap_max", "bound_value", "ratio", "u_sup"};
  for (const auto& r : records) {
    if (r.failed) {
      t.rows.push_back({fmt17(r.eps), "nan", "nan", "nan", std::to_string(r.order), "nan", "nan", "nan", "nan"});
      continue;
    }
    t.rows.push_back({fmt17(r.eps), fmt17(r.rho), fmt17(r.lambda1), fmt17(r.lambda2), std::to_string(r.order),
                      fmt17(r.gap_max), fmt17(r.bound_value), fmt17(r.ratio), fmt17(r.u_sup)});
  }
  const LineFit fit = fit_exponent(records);
  Table f;
  f.columns = {"slope", "r_squared"};
  f.rows.push_back({fmt17(fit.slope), fmt17(fit.r_squared)});
  emit(cfg, {t, f}, {"records", "fit"});
  return 0;
}

int cmd_decompose(const RunConfig& cfg) {
  const DiskPair g = geometry_from(cfg);
  const double k1 = parse_conductivity(cfg.k1), k2 = parse_conductivity(cfg.k2);
  if (!cfg.bump) throw ConfigError("decompose: requires a divergence source (--bump)");
  const SourceSpec src = make_source(cfg, g, k1, k2);
  const Decomposition d = source_decompose(g, k1, k2, src);
  Table t;
  t.columns = {"metric", "value"};
  t.rows.push_back({"w1", fmt17(d.w1)});
  t.rows.push_back({"w2", fmt17(d.w2)});
  t.rows.push_back({"residual_integral_D1", fmt17(d.residual_integral_D1)});
  t.rows.push_back({"residual_integral_D2", fmt17(d.residual_integral_D2)});
  emit(cfg, {t}, {"decomposition"});
  return 0;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config file: ") + e.what());
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("r1", cfg.r1);
  get("r2", cfg.r2);
  if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
  get("eps_list", cfg.eps_list);
  get("k1", cfg.k1);
  get("k2", cfg.k2);
  if (j.contains("source")) {
    if (j.at("source").is_string()) {
      cfg.source = j.at("source").get<std::string>();
    } else {
      const auto& s = j.at("source");
      if (s.value("type", "") != "disk_bump") throw ConfigError("config: unknown source type");
      DiskBumpSpec b;
      b.x0 = s.value("x0", 0.0);
      b.y0 = s.value("y0", 0.0);
      b.radius = s.value("radius", 0.1);
      b.amplitude = s.value("amplitude", 1.0);
      cfg.bump = b;
    }
  }
  get("nmax", cfg.nmax);
  get("tol", cfg.tol);
  get("far_anchor", cfg.far_anchor);
  get("nodes", cfg.nodes);
  get("order", cfg.order);
  get("out_path", cfg.out_path);
  get("format", cfg.format);
  if (j.contains("grid")) {
    const auto& gr = j.at("grid");
    cfg.grid.x0 = gr.value("x0", cfg.grid.x0);
    cfg.grid.x1 = gr.value("x1", cfg.grid.x1);
    cfg.grid.y0 = gr.value("y0", cfg.grid.y0);
    cfg.grid.y1 = gr.value("y1", cfg.grid.y1);
    cfg.grid.n = gr.value("n", cfg.grid.n);
  }
}

GridSpec parse_grid(const std::string& text) {
  GridSpec gspec;
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 5) throw ConfigError("grid spec must be x0:x1:y0:y1:n");
  gspec.x0 = parts[0];
  gspec.x1 = parts[1];
  gspec.y0 = parts[2];
  gspec.y1 = parts[3];
  gspec.n = static_cast<int>(parts[4]);
  if (gspec.n < 1) throw ConfigError("grid resolution must be >= 1");
  return gspec;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv) {
  CLI::App app{"two-disk conductivity transmission solver (NP-spectrum based)"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path, grid_text, eps_list_text, bump_text;
  double eps_flag = -1;

  // Pre-pass: load --config before flag parsing so flags override file keys.
  for (std::size_t i = 0; i + 1 < argv.size(); ++i)
    if (argv[i] == "--config") load_config_file(argv[i + 1], cfg);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flags override keys)");
    sub->add_option("--r1", cfg.r1, "radius of disk 1");
    sub->add_option("--r2", cfg.r2, "radius of disk 2");
    sub->add_option("--eps", eps_flag, "separation distance");
    sub->add_option("--k1", cfg.k1, "conductivity of disk 1 (number, 0, or inf)");
    sub->add_option("--k2", cfg.k2, "conductivity of disk 2 (number, 0, or inf)");
    sub->add_option("--source", cfg.source, "harmonic polynomial, e.g. x or x^2-y^2");
    sub->add_option("--bump", bump_text, "divergence source: x0,y0,radius[,amplitude]");
    sub->add_option("--nmax", cfg.nmax, "series truncation (auto-escalates)");
    sub->add_option("--tol", cfg.tol, "series tail tolerance");
    sub->add_option("--nodes", cfg.nodes, "oracle quadrature nodes per circle");
    sub->add_option("--out", cfg.out_path, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json");
  };

  auto* solve = app.add_subcommand("solve", "field grid");
  add_common(solve);
  solve->add_option("--grid", grid_text, "x0:x1:y0:y1:n");

  auto* spectrum = app.add_subcommand("spectrum", "NP eigenvalues and mode data");
  add_common(spectrum);

  auto* oracle = app.add_subcommand("oracle", "Nystrom cross-validation report");
  add_common(oracle);

  auto* sweep_cmd = app.add_subcommand("sweep", "eps sweep with slope fit");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--eps-list", eps_list_text, "comma-separated eps values");
  sweep_cmd->add_option("--order", cfg.order, "derivative order (1 or 2)");

  auto* decompose = app.add_subcommand("decompose", "corrector decomposition report");
  add_common(decompose);

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (eps_flag > 0) cfg.eps = eps_flag;
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    if (!eps_list_text.empty()) {
      cfg.eps_list.clear();
      std::stringstream ss(eps_list_text);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.eps_list.push_back(std::stod(item));
    }
    if (!bump_text.empty()) {
      std::vector<double> parts;
      std::stringstream ss(bump_text);
      std::string item;
      while (std::getline(ss, item, ',')) parts.push_back(std::stod(item));
      if (parts.size() != 3 && parts.size() != 4) throw ConfigError("--bump needs x0,y0,radius[,amplitude]");
      DiskBumpSpec b;
      b.x0 = parts[0];
      b.y0 = parts[1];
      b.radius = parts[2];
      b.amplitude = parts.size() == 4 ? parts[3] : 1.0;
      cfg.bump = b;
    }

    if (app.got_subcommand(solve)) return cmd_solve(cfg);
    if (app.got_subcommand(spectrum)) return cmd_spectrum(cfg);
    if (app.got_subcommand(oracle)) return cmd_oracle(cfg);
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(cfg);
    if (app.got_subcommand(decompose)) return cmd_decompose(cfg);
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::validation ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace npduet
