// Command-line front end. Every run prints one report (CSV or JSON) plus a
// manifest echoing the resolved configuration and the library version; the
// manifest goes next to the output file, or to stderr for stdout runs.
// Exit codes: 0 success, 1 computation or check failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "logschro/analysis.hpp"
#include "logschro/fourier.hpp"
#include "logschro/galerkin.hpp"
#include "logschro/green.hpp"
#include "logschro/kernel.hpp"
#include "logschro/quadrature.hpp"
#include "logschro/report.hpp"
#include "logschro/special.hpp"
#include "logschro/version.hpp"

namespace {

using namespace logschro;

int g_threads = 0;  // resolved LOGSCHRO_THREADS, 0 = library default

struct OutputOptions {
  std::string path;  // empty = stdout
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--output", out.path, "Write the report to this file instead of stdout");
  cmd->add_option("--format", out.format, "Report format (csv or json)")
      ->check(CLI::IsMember({"csv", "json"}));
}

void emit(const ReportTable& table, const OutputOptions& out, Manifest manifest) {
  manifest.set("threads", std::int64_t(g_threads));
  manifest.set("format", out.format);
  manifest.set("output", out.path.empty() ? std::string("-") : out.path);
  manifest.set("version", std::string(kVersion));
  const std::string body = out.format == "json" ? to_json(table) : to_csv(table);
  const std::string manifest_body = to_json(manifest);
  if (out.path.empty()) {
    std::fwrite(body.data(), 1, body.size(), stdout);
    std::fwrite(manifest_body.data(), 1, manifest_body.size(), stderr);
  } else {
    write_text_file(out.path, body);
    write_text_file(out.path + ".manifest.json", manifest_body);
  }
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  size_t pos = 0;
  while (true) {
    const size_t comma = text.find(',', pos);
    const std::string token =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty() || !std::isfinite(value)) {
      throw std::domain_error(flag + ": cannot parse '" + token + "' as a number");
    }
    out.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// ---- domain specs ----------------------------------------------------------

struct DomainChoice {
  DomainSpec spec;
  std::string canonical;
};

DomainSpec read_raster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("--domain: cannot open raster file " + path);
  auto expect_key = [&](const char* key) {
    std::string word;
    if (!(in >> word) || word != key) {
      throw std::domain_error("--domain: raster file " + path + ": expected '" + key +
                              "', got '" + word + "'");
    }
  };
  int dim = 0;
  expect_key("dim");
  if (!(in >> dim) || dim < 1 || dim > 3) {
    throw std::domain_error("--domain: raster file " + path + ": dim must be 1, 2, or 3");
  }
  double cell = 0.0;
  expect_key("h");
  if (!(in >> cell)) {
    throw std::domain_error("--domain: raster file " + path + ": bad h value");
  }
  expect_key("origin");
  Eigen::VectorXd origin(dim);
  for (int d = 0; d < dim; ++d) {
    if (!(in >> origin[d])) {
      throw std::domain_error("--domain: raster file " + path + ": bad origin");
    }
  }
  expect_key("shape");
  std::vector<int> shape(dim);
  size_t total = 1;
  for (int d = 0; d < dim; ++d) {
    if (!(in >> shape[d]) || shape[d] < 1) {
      throw std::domain_error("--domain: raster file " + path + ": bad shape");
    }
    total *= size_t(shape[d]);
  }
  expect_key("flags");
  std::vector<char> flags;
  flags.reserve(total);
  int flag = 0;
  while (in >> flag) {
    if (flag != 0 && flag != 1) {
      throw std::domain_error("--domain: raster file " + path + ": flags must be 0 or 1");
    }
    flags.push_back(char(flag));
  }
  if (flags.size() != total) {
    throw std::domain_error("--domain: raster file " + path + ": expected " +
                            std::to_string(total) + " flags, got " +
                            std::to_string(flags.size()));
  }
  return DomainSpec::from_raster(dim, cell, origin, shape, flags);
}

// Accepts interval[(a,b)], square[(side)], rectangle(a,b), disc[(radius)],
// ball[(radius)], raster:FILE. Bare names take the unit-size defaults.
DomainChoice parse_domain(const std::string& text) {
  if (text.rfind("raster:", 0) == 0) {
    const std::string path = text.substr(7);
    return {read_raster(path), "raster:" + path};
  }
  std::string name = text;
  std::vector<double> args;
  const size_t open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')') {
      throw std::domain_error("--domain: missing ')' in '" + text + "'");
    }
    name = text.substr(0, open);
    args = parse_number_list(text.substr(open + 1, text.size() - open - 2), "--domain");
  }
  auto arity = [&](size_t want) {
    if (!args.empty() && args.size() != want) {
      throw std::domain_error("--domain: " + name + " takes " + std::to_string(want) +
                              " parameter(s)");
    }
  };
  auto canon = [&](std::initializer_list<double> values) {
    std::string s = name + "(";
    bool first = true;
    for (double v : values) {
      if (!first) s += ",";
      s += format_float(v);
      first = false;
    }
    return s + ")";
  };
  if (name == "interval") {
    arity(2);
    const double a = args.empty() ? -1.0 : args[0];
    const double b = args.empty() ? 1.0 : args[1];
    return {DomainSpec::interval(a, b), canon({a, b})};
  }
  if (name == "square") {
    arity(1);
    const double side = args.empty() ? 1.0 : args[0];
    return {DomainSpec::square(side), canon({side})};
  }
  if (name == "rectangle") {
    if (args.size() != 2) {
      throw std::domain_error("--domain: rectangle needs two side lengths");
    }
    return {DomainSpec::rectangle(args[0], args[1]), canon({args[0], args[1]})};
  }
  if (name == "disc") {
    arity(1);
    const double radius = args.empty() ? 1.0 : args[0];
    return {DomainSpec::disc(radius), canon({radius})};
  }
  if (name == "ball") {
    arity(1);
    const double radius = args.empty() ? 1.0 : args[0];
    return {DomainSpec::ball(radius), canon({radius})};
  }
  throw std::domain_error("--domain: unknown shape '" + name +
                          "' (use interval, square, rectangle, disc, ball, or raster:FILE)");
}

// ---- field generators ------------------------------------------------------

struct FieldSource {
  std::function<double(Eigen::Ref<const Eigen::VectorXd>)> fn;  // unset for files
  std::vector<double> file_values;
  bool is_file = false;
};

// gaussian, bump[:R], cos:k (first axis, needs a periodic extent), cell
// (indicator of the grid cell at the origin), csv:FILE (row-major values).
FieldSource parse_generator(const std::string& text, double extent, double spacing) {
  FieldSource src;
  if (text == "gaussian") {
    src.fn = [](Eigen::Ref<const Eigen::VectorXd> x) {
      return std::exp(-x.squaredNorm());
    };
    return src;
  }
  if (text == "bump" || text.rfind("bump:", 0) == 0) {
    double radius = 1.0;
    if (text.size() > 5) radius = parse_number_list(text.substr(5), "--function")[0];
    if (!(radius > 0.0)) throw std::domain_error("--function: bump radius must be > 0");
    src.fn = [radius](Eigen::Ref<const Eigen::VectorXd> x) {
      const double q = x.squaredNorm() / (radius * radius);
      return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
    };
    return src;
  }
  if (text.rfind("cos:", 0) == 0) {
    if (!(extent > 0.0)) {
      throw std::domain_error("--function: cos:k needs a periodic grid");
    }
    const double k = parse_number_list(text.substr(4), "--function")[0];
    if (k != std::floor(k)) {
      throw std::domain_error("--function: cos:k needs an integer mode number");
    }
    const double freq = 2.0 * M_PI * k / extent;
    src.fn = [freq](Eigen::Ref<const Eigen::VectorXd> x) { return std::cos(freq * x[0]); };
    return src;
  }
  if (text == "cell") {
    if (!(spacing > 0.0)) throw std::domain_error("--function: cell needs a grid");
    const double half = 0.51 * spacing;
    src.fn = [half](Eigen::Ref<const Eigen::VectorXd> x) {
      return x.cwiseAbs().maxCoeff() < half ? 1.0 : 0.0;
    };
    return src;
  }
  if (text.rfind("csv:", 0) == 0) {
    const std::string path = text.substr(4);
    std::ifstream in(path);
    if (!in) throw std::domain_error("--function: cannot open " + path);
    double value = 0.0;
    while (in >> value) src.file_values.push_back(value);
    if (src.file_values.empty()) {
      throw std::domain_error("--function: no values in " + path);
    }
    src.is_file = true;
    return src;
  }
  throw std::domain_error("--function: unknown generator '" + text +
                          "' (use gaussian, bump[:R], cos:k, cell, or csv:FILE)");
}

PeriodicField make_periodic_field(const PeriodicGrid& grid, const std::string& text) {
  const FieldSource src = parse_generator(text, grid.extent, grid.spacing());
  if (!src.is_file) return PeriodicField::from_function(grid, src.fn);
  if (Eigen::Index(src.file_values.size()) != grid.num_cells()) {
    throw std::domain_error("--function: file has " +
                            std::to_string(src.file_values.size()) + " values; grid has " +
                            std::to_string(grid.num_cells()));
  }
  return PeriodicField(grid, Eigen::Map<const Eigen::VectorXd>(src.file_values.data(),
                                                               src.file_values.size()));
}

KernelSpec parse_order(int dim, const std::string& order, double s) {
  if (order == "log") return KernelSpec::log_order(dim);
  if (order == "frac") return KernelSpec::frac_order(dim, s);
  throw std::domain_error("--order: must be 'log' or 'frac'");
}

// ---- commands --------------------------------------------------------------

struct KernelEvalConfig {
  int dim = 1;
  std::string order = "log";
  double s = 0.25;
  std::string radii = "1.0";
  OutputOptions out;
};

int run_kernel_eval(const KernelEvalConfig& cfg) {
  const KernelSpec spec = parse_order(cfg.dim, cfg.order, cfg.s);
  const std::vector<double> radii = parse_number_list(cfg.radii, "--r");
  ReportTable table;
  table.columns = {"r", "J"};
  for (double r : radii) table.add_row({r, kernel_radial(spec, r)});
  Manifest m;
  m.set("command", std::string("kernel-eval"));
  m.set("dim", std::int64_t(cfg.dim));
  m.set("order", cfg.order);
  if (cfg.order == "frac") m.set("s", cfg.s);
  m.set("r", cfg.radii);
  emit(table, cfg.out, std::move(m));
  return 0;
}

struct OpApplyConfig {
  int dim = 1;
  double extent = 40.0;
  int points = 256;
  std::string function = "gaussian";
  std::string order = "log";
  double s = 0.25;
  OutputOptions out;
};

int run_op_apply(const OpApplyConfig& cfg) {
  PeriodicGrid grid{cfg.dim, cfg.extent, cfg.points};
  grid.validate();
  const KernelSpec spec = parse_order(cfg.dim, cfg.order, cfg.s);
  const PeriodicField input = make_periodic_field(grid, cfg.function);
  const PeriodicField output = apply_symbol(input, spec);

  ReportTable table;
  for (int d = 0; d < cfg.dim; ++d) table.columns.push_back("i" + std::to_string(d));
  for (int d = 0; d < cfg.dim; ++d) table.columns.push_back("x" + std::to_string(d));
  table.columns.push_back("input");
  table.columns.push_back("output");
  int k[3] = {0, 0, 0};
  for (Eigen::Index linear = 0; linear < grid.num_cells(); ++linear) {
    grid.unravel(linear, k);
    std::vector<ReportValue> row;
    for (int d = 0; d < cfg.dim; ++d) row.emplace_back(std::int64_t(k[d]));
    for (int d = 0; d < cfg.dim; ++d) row.emplace_back(grid.coordinate(k[d]));
    row.emplace_back(input.values()[linear]);
    row.emplace_back(output.values()[linear]);
    table.rows.push_back(std::move(row));
  }

  Manifest m;
  m.set("command", std::string("op-apply"));
  m.set("dim", std::int64_t(cfg.dim));
  m.set("extent", cfg.extent);
  m.set("points", std::int64_t(cfg.points));
  m.set("function", cfg.function);
  m.set("order", cfg.order);
  if (cfg.order == "frac") m.set("s", cfg.s);
  m.set("periodization_error_bound",
        periodization_error_bound(spec, grid, input.values().cwiseAbs().maxCoeff()));
  emit(table, cfg.out, std::move(m));
  return 0;
}

struct HeatKernelConfig {
  int dim = 1;
  double t = 1.0;
  std::string radii = "1.0";
  OutputOptions out;
};

int run_heat_kernel(const HeatKernelConfig& cfg) {
  const std::vector<double> radii = parse_number_list(cfg.radii, "--r");
  ReportTable table;
  table.columns = {"r", "q"};
  for (double r : radii) table.add_row({r, heat_kernel_radial(cfg.dim, cfg.t, r)});
  Manifest m;
  m.set("command", std::string("heat-kernel"));
  m.set("dim", std::int64_t(cfg.dim));
  m.set("t", cfg.t);
  m.set("r", cfg.radii);
  emit(table, cfg.out, std::move(m));
  return 0;
}

struct GreenConfig {
  int dim = 3;
  std::string radii = "1.0";
  OutputOptions out;
};

int run_green(const GreenConfig& cfg) {
  const std::vector<double> radii = parse_number_list(cfg.radii, "--r");
  ReportTable table;
  table.columns = {"r", "G"};
  for (double r : radii) table.add_row({r, green_radial(cfg.dim, r)});
  Manifest m;
  m.set("command", std::string("green"));
  m.set("dim", std::int64_t(cfg.dim));
  m.set("r", cfg.radii);
  emit(table, cfg.out, std::move(m));
  return 0;
}

struct PoissonConfig {
  std::string mode = "periodic";
  int dim = 1;
  double extent = 40.0;
  int points = 256;
  double spacing = 0.25;
  std::string function = "cos:1";
  OutputOptions out;
};

int run_poisson(const PoissonConfig& cfg) {
  Manifest m;
  m.set("command", std::string("poisson"));
  m.set("mode", cfg.mode);
  ReportTable table;

  if (cfg.mode == "periodic") {
    PeriodicGrid grid{cfg.dim, cfg.extent, cfg.points};
    grid.validate();
    const PeriodicField f = make_periodic_field(grid, cfg.function);
    const PeriodicField u = poisson_periodic(f);
    for (int d = 0; d < cfg.dim; ++d) table.columns.push_back("i" + std::to_string(d));
    for (int d = 0; d < cfg.dim; ++d) table.columns.push_back("x" + std::to_string(d));
    table.columns.push_back("f");
    table.columns.push_back("u");
    int k[3] = {0, 0, 0};
    for (Eigen::Index linear = 0; linear < grid.num_cells(); ++linear) {
      grid.unravel(linear, k);
      std::vector<ReportValue> row;
      for (int d = 0; d < cfg.dim; ++d) row.emplace_back(std::int64_t(k[d]));
      for (int d = 0; d < cfg.dim; ++d) row.emplace_back(grid.coordinate(k[d]));
      row.emplace_back(f.values()[linear]);
      row.emplace_back(u.values()[linear]);
      table.rows.push_back(std::move(row));
    }
    m.set("dim", std::int64_t(cfg.dim));
    m.set("extent", cfg.extent);
    m.set("points", std::int64_t(cfg.points));
    m.set("function", cfg.function);
  } else if (cfg.mode == "free") {
    FreeSpaceGrid grid{cfg.points, cfg.spacing};
    grid.validate();
    const FieldSource src = parse_generator(cfg.function, 0.0, cfg.spacing);
    Eigen::VectorXd f(grid.num_cells());
    if (src.is_file) {
      if (Eigen::Index(src.file_values.size()) != grid.num_cells()) {
        throw std::domain_error("--function: file has " +
                                std::to_string(src.file_values.size()) +
                                " values; grid has " + std::to_string(grid.num_cells()));
      }
      f = Eigen::Map<const Eigen::VectorXd>(src.file_values.data(),
                                            src.file_values.size());
    } else {
      int k[3] = {0, 0, 0};
      Eigen::VectorXd x(3);
      for (Eigen::Index linear = 0; linear < grid.num_cells(); ++linear) {
        grid.unravel(linear, k);
        for (int d = 0; d < 3; ++d) x[d] = grid.coordinate(k[d]);
        f[linear] = src.fn(x);
      }
    }
    const FreeSpacePoisson solution = poisson_free_space(grid, f);
    table.columns = {"i0", "i1", "i2", "x0", "x1", "x2", "f", "u"};
    int k[3] = {0, 0, 0};
    for (Eigen::Index linear = 0; linear < grid.num_cells(); ++linear) {
      grid.unravel(linear, k);
      table.add_row({std::int64_t(k[0]), std::int64_t(k[1]), std::int64_t(k[2]),
                     grid.coordinate(k[0]), grid.coordinate(k[1]), grid.coordinate(k[2]),
                     f[linear], solution.values[linear]});
    }
    m.set("points", std::int64_t(cfg.points));
    m.set("spacing", cfg.spacing);
    m.set("function", cfg.function);
    m.set("decay_shell_inner", solution.decay.shell_inner);
    m.set("decay_shell_outer", solution.decay.shell_outer);
    m.set("decay_sup_exp_weighted", solution.decay.sup_exp_weighted);
    m.set("decay_finite", solution.decay.finite);
  } else {
    throw std::domain_error("--mode: must be 'periodic' or 'free'");
  }
  emit(table, cfg.out, std::move(m));
  return 0;
}

struct EigsConfig {
  std::string domain = "interval";
  double h = 0.03125;
  int k = 1;
  std::string order = "log";
  double s = 0.25;
  bool force_iterative = false;
  std::string vectors;
  OutputOptions out;
};

int run_eigs(const EigsConfig& cfg) {
  const DomainChoice domain = parse_domain(cfg.domain);
  const KernelSpec spec = parse_order(domain.spec.dim, cfg.order, cfg.s);
  const Mesh mesh = build_mesh(domain.spec, cfg.h);
  const StiffnessMatrix A = assemble_stiffness(mesh, spec);
  const std::vector<EigenPair> pairs = solve_eigs(A, cfg.k, cfg.force_iterative);

  ReportTable table;
  table.columns = {"index", "lambda", "residual"};
  for (const EigenPair& pair : pairs) {
    table.add_row({std::int64_t(pair.index), pair.value, pair.residual});
  }

  if (!cfg.vectors.empty()) {
    ReportTable vec_table;
    for (int d = 0; d < mesh.dim; ++d) vec_table.columns.push_back("x" + std::to_string(d));
    for (const EigenPair& pair : pairs) {
      vec_table.columns.push_back("phi" + std::to_string(pair.index));
    }
    for (Eigen::Index i = 0; i < mesh.count(); ++i) {
      std::vector<ReportValue> row;
      for (int d = 0; d < mesh.dim; ++d) row.emplace_back(mesh.centers(i, d));
      for (const EigenPair& pair : pairs) row.emplace_back(pair.vector[i]);
      vec_table.rows.push_back(std::move(row));
    }
    const std::string body =
        cfg.out.format == "json" ? to_json(vec_table) : to_csv(vec_table);
    write_text_file(cfg.vectors, body);
  }

  Manifest m;
  m.set("command", std::string("eigs"));
  m.set("domain", domain.canonical);
  m.set("dim", std::int64_t(domain.spec.dim));
  m.set("h", cfg.h);
  m.set("k", std::int64_t(cfg.k));
  m.set("order", cfg.order);
  if (cfg.order == "frac") m.set("s", cfg.s);
  m.set("cells", std::int64_t(mesh.count()));
  m.set("force_iterative", cfg.force_iterative);
  if (!cfg.vectors.empty()) m.set("vectors", cfg.vectors);
  emit(table, cfg.out, std::move(m));
  return 0;
}

struct FaberKrahnConfig {
  std::string domain = "square";
  double h = 0.03125;
  OutputOptions out;
};

int run_faber_krahn(const FaberKrahnConfig& cfg) {
  const DomainChoice domain = parse_domain(cfg.domain);
  const FaberKrahnReport report = faber_krahn(domain.spec, cfg.h);
  ReportTable table;
  table.columns = {"lambda_omega", "lambda_ball", "margin"};
  table.add_row({report.lambda_omega, report.lambda_ball, report.margin});
  Manifest m;
  m.set("command", std::string("faber-krahn"));
  m.set("domain", domain.canonical);
  m.set("dim", std::int64_t(domain.spec.dim));
  m.set("h", cfg.h);
  emit(table, cfg.out, std::move(m));
  return 0;
}

struct SmallOrderConfig {
  std::string domain = "interval";
  double h = 0.015625;
  std::string s_values = "0.2,0.1,0.05";
  int k = 1;
  OutputOptions out;
};

int run_small_order(const SmallOrderConfig& cfg) {
  const DomainChoice domain = parse_domain(cfg.domain);
  const std::vector<double> s_list = parse_number_list(cfg.s_values, "--s");
  const SmallOrderSweep sweep = small_order_sweep(domain.spec, cfg.h, s_list, cfg.k);
  ReportTable table;
  table.columns = {"s", "lambda", "quotient", "reference", "deviation"};
  for (const SmallOrderRow& row : sweep.rows) {
    table.add_row({row.s, row.lambda_ks, row.quotient, row.reference, row.deviation});
  }
  Manifest m;
  m.set("command", std::string("small-order"));
  m.set("domain", domain.canonical);
  m.set("dim", std::int64_t(domain.spec.dim));
  m.set("h", cfg.h);
  m.set("s", cfg.s_values);
  m.set("k", std::int64_t(cfg.k));
  emit(table, cfg.out, std::move(m));
  return 0;
}

// ---- selfcheck -------------------------------------------------------------

struct SelfcheckConfig {
  std::uint64_t seed = 1;
  OutputOptions out;
};

int run_selfcheck(const SelfcheckConfig& cfg) {
  ReportTable table;
  table.columns = {"check", "status", "detail"};
  int failures = 0;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    table.add_row({name, std::string(ok ? "ok" : "fail"), detail});
    if (!ok) ++failures;
  };
  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      record(name, false, std::string("exception: ") + e.what());
    }
  };
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };

  guarded("bessel_half_orders", [&] {
    const double k_half = std::sqrt(M_PI / 2.0) * std::exp(-1.0);
    const double k_three_halves = std::sqrt(M_PI / 4.0) * std::exp(-2.0) * 1.5;
    const double e1 = rel(bessel_k(0.5, 1.0).value, k_half);
    const double e2 = rel(bessel_k(1.5, 2.0).value, k_three_halves);
    record("bessel_half_orders", e1 < 1e-12 && e2 < 1e-12,
           "rel err " + format_float(std::max(e1, e2)));
  });

  guarded("kernel_exponential_1d", [&] {
    const KernelSpec spec = KernelSpec::log_order(1);
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
      worst = std::max(worst, rel(kernel_radial(spec, r), std::exp(-r) / r));
    }
    record("kernel_exponential_1d", worst < 1e-12, "rel err " + format_float(worst));
  });

  guarded("kernel_near_constant_2d", [&] {
    const KernelSpec spec = KernelSpec::log_order(2);
    const double r = 1e-3;
    const double ratio =
        r * r * kernel_radial(spec, r) / kernel_constants(spec).c_near;
    record("kernel_near_constant_2d", std::abs(ratio - 1.0) < 0.01,
           "ratio " + format_float(ratio));
  });

  guarded("kernel_tail_mass_monotone", [&] {
    const KernelSpec spec = KernelSpec::log_order(1);
    const double t1 = tail_mass(spec, 1.0), t2 = tail_mass(spec, 2.0);
    record("kernel_tail_mass_monotone", t1 > t2 && t2 > 0.0,
           format_float(t1) + " > " + format_float(t2) + " > 0");
  });

  guarded("symbol_plane_wave", [&] {
    PeriodicGrid grid{1, 8.0, 64};
    const double xi = 2.0 * M_PI * 3.0 / grid.extent;
    const PeriodicField f = make_periodic_field(grid, "cos:3");
    const PeriodicField g = apply_symbol(f, KernelSpec::log_order(1));
    const double factor = std::log1p(xi * xi);
    const double err = (g.values() - factor * f.values()).cwiseAbs().maxCoeff();
    record("symbol_plane_wave", err < 1e-12, "max err " + format_float(err));
  });

  guarded("heat_kernel_closed_form", [&] {
    const double e1 = rel(heat_kernel_radial(1, 1.0, 1.0), 0.5 * std::exp(-1.0));
    const double e2 = std::abs(heat_kernel_mass(1, 1.0) - 1.0);
    record("heat_kernel_closed_form", e1 < 1e-12 && e2 < 1e-8,
           "rel err " + format_float(std::max(e1, e2)));
  });

  guarded("heat_semigroup_convolution", [&] {
    const double composed = heat_kernel_convolution_1d(0.5, 0.5, 0.3);
    const double direct = heat_kernel_radial(1, 1.0, 0.3);
    record("heat_semigroup_convolution", rel(composed, direct) < 1e-8,
           "rel err " + format_float(rel(composed, direct)));
  });

  guarded("green_far_field", [&] {
    const double g = green_radial(3, 20.0);
    const double err = rel(g, 1.0 / (80.0 * M_PI));
    record("green_far_field", err < 1e-6, "rel err " + format_float(err));
  });

  guarded("green_interpolant", [&] {
    const GreenInterpolant interp(3, 1e-3, 30.0, 400);
    double worst = 0.0;
    for (double r : {0.01, 0.5, 1.0, 10.0}) {
      worst = std::max(worst, rel(interp(r), green_radial(3, r)));
    }
    record("green_interpolant", worst < 1e-7, "rel err " + format_float(worst));
  });

  guarded("pair_integral_adjacent_1d", [&] {
    Eigen::VectorXd ci(1), cj(1);
    ci << 0.0;
    cj << 1.0;
    const double value = cell_pair_integral(KernelSpec::log_order(1), 1.0, ci, cj);
    const double err = rel(value, 0.740543248269);
    record("pair_integral_adjacent_1d", err < 1e-9, "rel err " + format_float(err));
  });

  guarded("diagonal_closed_form_1d", [&] {
    const double sigma = cell_complement_integral(KernelSpec::log_order(1), 1.0);
    const double err = rel(sigma, 1.7030089864481559);
    record("diagonal_closed_form_1d", err < 1e-12, "rel err " + format_float(err));
  });

  guarded("two_cell_spectrum", [&] {
    const Mesh mesh = build_mesh(DomainSpec::interval(-0.5, 0.5), 0.5);
    const KernelSpec spec = KernelSpec::log_order(1);
    const StiffnessMatrix A = assemble_stiffness(mesh, spec);
    const std::vector<EigenPair> pairs = solve_eigs(A, 2);
    const double sigma = cell_complement_integral(spec, 0.5);
    const double beta =
        cell_pair_integral(spec, 0.5, mesh.centers.row(0), mesh.centers.row(1));
    const double e1 = rel(pairs[0].value, (sigma - beta) / 0.5);
    const double e2 = rel(pairs[1].value, (sigma + beta) / 0.5);
    record("two_cell_spectrum", e1 < 1e-12 && e2 < 1e-12,
           "rel err " + format_float(std::max(e1, e2)));
  });

  guarded("scalar_difference_bounds", [&] {
    const ScalarBoundsReport report = scalar_bounds_check(2000, cfg.seed);
    record("scalar_difference_bounds", report.pass,
           "worst slack " + format_float(std::min(report.worst_slack_first,
                                                  report.worst_slack_second)));
  });

  guarded("poincare_below_lambda1", [&] {
    const Mesh mesh = build_mesh(DomainSpec::interval(-1.0, 1.0), 2.0 / 32.0);
    const StiffnessMatrix A = assemble_stiffness(mesh, KernelSpec::log_order(1));
    const double lambda1 = solve_eigs(A, 1)[0].value;
    const double bound = poincare_lower_bound(2.0, 1);
    record("poincare_below_lambda1", bound <= lambda1,
           format_float(bound) + " <= " + format_float(lambda1));
  });

  guarded("maximum_principle", [&] {
    const Mesh mesh = build_mesh(DomainSpec::interval(-1.0, 1.0), 2.0 / 32.0);
    const StiffnessMatrix A = assemble_stiffness(mesh, KernelSpec::log_order(1));
    const MaxPrincipleReport report = max_principle_check(A, 5, cfg.seed);
    record("maximum_principle", report.pass,
           "worst min ratio " + format_float(report.worst_min_ratio));
  });

  Manifest m;
  m.set("command", std::string("selfcheck"));
  m.set("seed", std::int64_t(cfg.seed));
  m.set("checks", std::int64_t(table.rows.size()));
  m.set("failures", std::int64_t(failures));
  emit(table, cfg.out, std::move(m));
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("LOGSCHRO_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1 || n > 1024) {
      std::fprintf(stderr, "LOGSCHRO_THREADS: expected an integer in [1, 1024], got '%s'\n",
                   env);
      return 2;
    }
    g_threads = int(n);
    Eigen::setNbThreads(g_threads);
  }

  CLI::App app{"Logarithmic Schrodinger operator toolkit"};
  app.set_version_flag("--version", std::string(logschro::kVersion));
  app.require_subcommand(1);

  KernelEvalConfig kernel_cfg;
  CLI::App* kernel_cmd =
      app.add_subcommand("kernel-eval", "Evaluate the jump kernel at given radii");
  kernel_cmd->add_option("--dim", kernel_cfg.dim, "Space dimension")->check(CLI::Range(1, 3));
  kernel_cmd->add_option("--order", kernel_cfg.order, "Operator order (log or frac)")
      ->check(CLI::IsMember({"log", "frac"}));
  kernel_cmd->add_option("--s", kernel_cfg.s, "Fractional order for --order frac");
  kernel_cmd->add_option("--r", kernel_cfg.radii, "Comma-separated radii");
  add_output_flags(kernel_cmd, kernel_cfg.out);

  OpApplyConfig op_cfg;
  CLI::App* op_cmd =
      app.add_subcommand("op-apply", "Apply the operator spectrally on a periodic grid");
  op_cmd->add_option("--dim", op_cfg.dim, "Space dimension")->check(CLI::Range(1, 3));
  op_cmd->add_option("--extent", op_cfg.extent, "Box edge length");
  op_cmd->add_option("--points", op_cfg.points, "Grid points per axis");
  op_cmd->add_option("--function", op_cfg.function,
                     "Input field (gaussian, bump[:R], cos:k, cell, csv:FILE)");
  op_cmd->add_option("--order", op_cfg.order, "Operator order (log or frac)")
      ->check(CLI::IsMember({"log", "frac"}));
  op_cmd->add_option("--s", op_cfg.s, "Fractional order for --order frac");
  add_output_flags(op_cmd, op_cfg.out);

  HeatKernelConfig heat_cfg;
  CLI::App* heat_cmd =
      app.add_subcommand("heat-kernel", "Evaluate the heat kernel at given radii");
  heat_cmd->add_option("--dim", heat_cfg.dim, "Space dimension")->check(CLI::Range(1, 3));
  heat_cmd->add_option("--t", heat_cfg.t, "Time parameter")->required();
  heat_cmd->add_option("--r", heat_cfg.radii, "Comma-separated radii");
  add_output_flags(heat_cmd, heat_cfg.out);

  GreenConfig green_cfg;
  CLI::App* green_cmd =
      app.add_subcommand("green", "Evaluate the free-space Green function (dim >= 3)");
  green_cmd->add_option("--dim", green_cfg.dim, "Space dimension");
  green_cmd->add_option("--r", green_cfg.radii, "Comma-separated radii");
  add_output_flags(green_cmd, green_cfg.out);

  PoissonConfig poisson_cfg;
  CLI::App* poisson_cmd = app.add_subcommand(
      "poisson", "Solve the operator equation: periodic spectral or free-space convolution");
  poisson_cmd->add_option("--mode", poisson_cfg.mode, "periodic or free")
      ->check(CLI::IsMember({"periodic", "free"}));
  poisson_cmd->add_option("--dim", poisson_cfg.dim, "Space dimension (periodic mode)")
      ->check(CLI::Range(1, 3));
  poisson_cmd->add_option("--extent", poisson_cfg.extent, "Box edge length (periodic mode)");
  poisson_cmd->add_option("--points", poisson_cfg.points, "Grid points per axis");
  poisson_cmd->add_option("--spacing", poisson_cfg.spacing, "Grid spacing (free mode)");
  poisson_cmd->add_option("--function", poisson_cfg.function,
                          "Right-hand side (gaussian, bump[:R], cos:k, cell, csv:FILE)");
  add_output_flags(poisson_cmd, poisson_cfg.out);

  EigsConfig eigs_cfg;
  CLI::App* eigs_cmd =
      app.add_subcommand("eigs", "Dirichlet eigenvalues on a bounded domain");
  eigs_cmd->set_help_flag("--help", "Print help");
  eigs_cmd->add_option("--domain", eigs_cfg.domain,
                       "interval[(a,b)], square[(side)], rectangle(a,b), disc[(r)], "
                       "ball[(r)], raster:FILE");
  eigs_cmd->add_option("--h", eigs_cfg.h, "Mesh cell size");
  eigs_cmd->add_option("--k", eigs_cfg.k, "Number of eigenpairs")->check(CLI::Range(1, 5));
  eigs_cmd->add_option("--order", eigs_cfg.order, "Operator order (log or frac)")
      ->check(CLI::IsMember({"log", "frac"}));
  eigs_cmd->add_option("--s", eigs_cfg.s, "Fractional order for --order frac");
  eigs_cmd->add_flag("--force-iterative", eigs_cfg.force_iterative,
                     "Use the iterative eigensolver regardless of size");
  eigs_cmd->add_option("--vectors", eigs_cfg.vectors,
                       "Also write eigenfunction values to this file");
  add_output_flags(eigs_cmd, eigs_cfg.out);

  FaberKrahnConfig fk_cfg;
  CLI::App* fk_cmd = app.add_subcommand(
      "faber-krahn", "First eigenvalue of a domain against the equal-count ball");
  fk_cmd->set_help_flag("--help", "Print help");
  fk_cmd->add_option("--domain", fk_cfg.domain, "Domain shape")->required();
  fk_cmd->add_option("--h", fk_cfg.h, "Mesh cell size")->required();
  add_output_flags(fk_cmd, fk_cfg.out);

  SmallOrderConfig so_cfg;
  CLI::App* so_cmd = app.add_subcommand(
      "small-order", "Small-order eigenvalue limit toward the logarithmic form");
  so_cmd->set_help_flag("--help", "Print help");
  so_cmd->add_option("--domain", so_cfg.domain, "Domain shape");
  so_cmd->add_option("--h", so_cfg.h, "Mesh cell size");
  so_cmd->add_option("--s", so_cfg.s_values, "Comma-separated descending orders in (0, 1/2)");
  so_cmd->add_option("--k", so_cfg.k, "Eigenvalue index")->check(CLI::Range(1, 5));
  add_output_flags(so_cmd, so_cfg.out);

  SelfcheckConfig self_cfg;
  CLI::App* self_cmd =
      app.add_subcommand("selfcheck", "Run the built-in invariant suite");
  self_cmd->add_option("--seed", self_cfg.seed, "Seed for the randomized checks");
  add_output_flags(self_cmd, self_cfg.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (kernel_cmd->parsed()) return run_kernel_eval(kernel_cfg);
    if (op_cmd->parsed()) return run_op_apply(op_cfg);
    if (heat_cmd->parsed()) return run_heat_kernel(heat_cfg);
    if (green_cmd->parsed()) return run_green(green_cfg);
    if (poisson_cmd->parsed()) return run_poisson(poisson_cfg);
    if (eigs_cmd->parsed()) return run_eigs(eigs_cfg);
    if (fk_cmd->parsed()) return run_faber_krahn(fk_cfg);
    if (so_cmd->parsed()) return run_small_order(so_cfg);
    if (self_cmd->parsed()) return run_selfcheck(self_cfg);
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
