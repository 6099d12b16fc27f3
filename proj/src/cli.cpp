#include "translab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "translab/analysis.hpp"
#include "translab/barriers.hpp"
#include "translab/bessel.hpp"
#include "translab/field_io.hpp"
#include "translab/geometry.hpp"
#include "translab/report.hpp"
#include "translab/solver.hpp"

namespace translab {

namespace {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat JSON objects as option files: {"h": 0.05, "box": [1, 10, -5, 5]}.
// Expands --config FILE into "--key value..." tokens for every key not
// already given on the command line, so the command line takes precedence and
// the usual validation applies to file-supplied values.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
  auto text = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  std::vector<std::string> out = args;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    out.push_back(flag);
    if (value.is_array())
      for (const auto& v : value) out.push_back(text(v));
    else
      out.push_back(text(value));
  }
  return out;
}

struct Call {
  std::string name;
  std::vector<double> args;
};

Call parse_call(const std::string& text) {
  Call c;
  const auto open = text.find('(');
  c.name = text.substr(0, open);
  if (open == std::string::npos) return c;
  if (text.back() != ')') throw ConfigError("malformed descriptor '" + text + "'");
  std::stringstream ss(text.substr(open + 1, text.size() - open - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      c.args.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "' in '" + text + "'");
    }
  }
  return c;
}

ExactSolution parse_exact(const std::string& text) {
  const Call c = parse_call(text);
  auto arg = [&](std::size_t k, double fallback) {
    return k < c.args.size() ? c.args[k] : fallback;
  };
  if (c.args.size() > 2) throw ConfigError("too many arguments in '" + text + "'");
  if (c.name == "plane") return ExactSolution(exact::Plane{arg(0, 0.0)});
  if (c.name == "tilted") return ExactSolution(exact::TiltedPlane{arg(0, 0.0), arg(1, 0.0)});
  if (c.name == "expend") return ExactSolution(exact::ExpEnd{arg(0, 0.5), arg(1, 0.0)});
  throw ConfigError("unknown exact solution '" + text + "'");
}

struct Common {
  std::string config;
  std::string out;
  std::string exact;
  std::string solution;
  std::string domain = "rectangle";
  std::vector<double> box{1.0, 10.0, -5.0, 5.0};
  double h = 0.05;

  [[nodiscard]] std::string out_dir() const {
    if (!out.empty()) return out;
    if (const char* env = std::getenv("TRANSLAB_OUT"); env && *env) return env;
    return "translab_out";
  }
  [[nodiscard]] json describe() const {
    return {{"exact", exact}, {"solution", solution}, {"domain", domain},
            {"box", box},     {"h", h}};
  }
};

void add_common(CLI::App* sub, Common& c, bool inputs) {
  sub->set_help_flag("--help", "Print this help message and exit");
  sub->add_option("--out", c.out, "Output directory (default: $TRANSLAB_OUT or translab_out)");
  sub->add_option("--domain", c.domain, "Shape descriptor, e.g. annulus(1,4,0,0)")
      ->capture_default_str();
  sub->add_option("--box", c.box, "Grid extent x1min,x1max,x2min,x2max")
      ->delimiter(',')
      ->expected(4)
      ->capture_default_str();
  sub->add_option("--h", c.h, "Grid spacing")->capture_default_str();
  if (inputs) {
    auto* e = sub->add_option("--exact", c.exact,
                              "Exact solution: plane(c) | tilted(a,b) | expend(C,D)");
    auto* s = sub->add_option("--solution", c.solution, "Solution grid file")
                  ->check(CLI::ExistingFile);
    e->excludes(s);
  }
  sub->add_option("--config", c.config,
                  "JSON object of option values; command-line options take precedence");
}

GridSpec grid_of(const Common& c) {
  if (!(c.h > 0)) throw ConfigError("grid spacing must be positive");
  const GridSpec g = GridSpec::covering(c.box[0], c.box[1], c.box[2], c.box[3], c.h);
  if (g.nx > 4096 || g.ny > 4096)
    throw ConfigError("grid of " + std::to_string(g.nx) + "x" + std::to_string(g.ny) +
                      " nodes exceeds the 4096^2 memory guard");
  return g;
}

DomainMask mask_of(const Common& c, const GridSpec& g) {
  return DomainMask(g, parse_shape(c.domain));
}

struct Source {
  std::optional<ExactSolution> exact;
  std::optional<ScalarField> field;
  HeightSampler sampler;
  double h = 0.0;
};

Source resolve(const Common& c, bool need_field) {
  Source s;
  if (!c.solution.empty()) {
    s.field = load_grid(c.solution);
    s.sampler = sampler_from(*s.field);
    s.h = s.field->grid.h;
  } else if (!c.exact.empty()) {
    s.exact = parse_exact(c.exact);
    s.sampler = sampler_from(*s.exact);
    s.h = c.h;
    if (need_field) {
      const GridSpec g = grid_of(c);
      s.field = eval_exact(*s.exact, g, mask_of(c, g));
    }
  } else {
    throw ConfigError("an input is required: --exact or --solution");
  }
  return s;
}

struct Run {
  Run(std::string d, std::string c) : dir(std::move(d)), command(std::move(c)) {
    std::filesystem::create_directories(dir);
  }

  std::string dir;
  std::string command;
  json config;
  json tolerances = json::object();
  std::vector<std::string> outputs;

  void write(const std::string& name, const std::string& text) {
    write_text(dir + "/" + name, text);
    outputs.push_back(name);
  }
  void finish(int code) {
    Manifest m{command, config, tolerances, outputs, code};
    write_text(dir + "/manifest.json", to_json(m).dump(2) + "\n");
  }
};

std::string csv_rows(const std::vector<AuditRow>& rows) {
  std::ostringstream os;
  write_audit_csv(os, rows);
  return os.str();
}

// ---------------------------------------------------------------- solve

struct SolveOpts {
  Common common;
  std::string boundary;
  SolverSettings settings;
};

ScalarField boundary_field(const SolveOpts& o) {
  const Call c = parse_call(o.boundary.substr(0, o.boundary.find(':')));
  if (o.boundary.rfind("file:", 0) == 0) return load_grid(o.boundary.substr(5));
  const GridSpec g = grid_of(o.common);
  const DomainMask m = mask_of(o.common, g);
  if (o.boundary.rfind("exact:", 0) == 0)
    return eval_exact(parse_exact(o.boundary.substr(6)), g, m);
  if (o.boundary == "zero") return ScalarField(g, m);
  if (c.name == "bump") {
    if (c.args.size() != 4) throw ConfigError("bump expects amp,cx,cy,width");
    const double amp = c.args[0], cx = c.args[1], cy = c.args[2], w = c.args[3];
    if (!(w > 0)) throw ConfigError("bump width must be positive");
    return ScalarField::sample(g, m, [&](Point2 x) {
      const double d2 = (x.x1 - cx) * (x.x1 - cx) + (x.x2 - cy) * (x.x2 - cy);
      return amp * std::exp(-d2 / (w * w));
    });
  }
  throw ConfigError("unknown boundary data '" + o.boundary + "'");
}

double sup_residual(const ScalarField& u) {
  const ScalarField r = residual(u);
  double m = 0.0;
  for (std::size_t k = 0; k < r.values.size(); ++k)
    if (r.mask.kind(k) == NodeKind::Interior) m = std::max(m, std::abs(r.values[k]));
  return m;
}

int cmd_solve(const SolveOpts& o, std::ostream& out) {
  Run run{o.common.out_dir(), "solve"};
  run.config = o.common.describe();
  run.config["boundary"] = o.boundary;
  run.config["settings"] = to_json(o.settings);
  const ScalarField b = boundary_field(o);
  const double h = b.grid.h;
  run.tolerances = {{"residual", o.settings.tol},
                    {"weak_gradient", 10 * h * h},
                    {"q_u2", 10 * h * h},
                    {"linear", o.settings.linear_tol}};
  const SolveReport rep = newton_solve({b}, o.settings);
  const std::string hash = content_hash(run.config);
  save_grid(run.dir + "/solution.grid", rep.solution);
  run.outputs.push_back("solution.grid");
  json rj = to_json(rep);
  rj["settings"] = to_json(o.settings);
  rj["nodes"] = {{"interior", b.mask.count(NodeKind::Interior)},
                 {"boundary", b.mask.count(NodeKind::Boundary)}};
  if (o.boundary.rfind("exact:", 0) == 0) {
    const ExactSolution ex = parse_exact(o.boundary.substr(6));
    double err = 0.0;
    for (int j = 0; j < b.grid.ny; ++j)
      for (int i = 0; i < b.grid.nx; ++i)
        if (b.mask.inside(i, j))
          err = std::max(err, std::abs(rep.solution.at(i, j) - ex.value(b.grid.node(i, j))));
    rj["error_vs_exact"] = err;
  }
  run.write("solve_report.json", rj.dump(2) + "\n");

  std::vector<AuditRow> rows;
  const double res = rep.residual_history.back();
  rows.push_back({"residual", hash, res, o.settings.tol, rep.converged});
  if (rep.converged) {
    const GradientAudit ga = weak_gradient_audit(rep.solution, std::max(1e-8, o.settings.tol));
    rows.push_back({"weak-gradient", hash, ga.excess, ga.tolerance, ga.pass});
    const SubsolutionAudit sa =
        subsolution_audit(rep.solution, std::max(1e-8, o.settings.tol));
    rows.push_back({"q-u2-sign", hash, sa.min_q_u2, sa.tolerance, sa.min_q_u2 >= -sa.tolerance});
    const double lv = std::min(sa.min_l_v2[0], sa.min_l_v2[1]);
    rows.push_back({"l-v2-sign", hash, lv, sa.tolerance, lv >= -sa.tolerance});
    rows.push_back({"q-u2-closed-form", hash, sa.closed_form_gap, sa.tolerance,
                    sa.closed_form_gap <= sa.tolerance});
  }
  run.write("audit.csv", csv_rows(rows));
  out << "solve: " << rep.message << " after " << rep.iterations
      << " iterations, residual " << format_double(res) << "\n";
  const int code = rep.converged ? kExitOk : kExitNumerical;
  run.finish(code);
  return code;
}

// ---------------------------------------------------------------- audit

struct AuditOpts {
  Common common;
  std::vector<std::string> names;
  std::vector<double> center{0.0, 0.0};
  double r_in = 0.0, r_out = 1.0, rho = 1.0, radius = 1.0, r1 = 1.0, r2 = 2.0;
  int samples = 512;
  std::string mode = "ray";
  std::vector<double> direction{1.0, 0.0}, offset{0.0, 0.0};
  double s0 = 1.0, s1 = 10.0, alpha = 8.0;
  std::vector<double> scales{1.0, 0.5, 0.25, 0.125};
  double m = 4.0;
  std::string kind = "bessel", flavor = "Q";
  double mu = 0.5;
  ScanSettings scan;
};

const std::set<std::string> kAudits = {"gauss-bonnet", "decay", "blowdown", "barrier",
                                       "ecker", "area-ratio", "slice"};

BarrierSpec spec_of(const std::string& kind, double mu, double alpha) {
  BarrierSpec spec;
  if (kind == "exp")
    spec = barrier::Exp{mu};
  else if (kind == "bessel")
    spec = barrier::Bessel{alpha};
  else
    throw ConfigError("unknown barrier kind '" + kind + "' (exp | bessel)");
  validate(spec);
  return spec;
}

SignFlavor flavor_of(const std::string& f) {
  if (f == "L") return SignFlavor::LinearL;
  if (f == "Q") return SignFlavor::QuasilinearQ;
  if (f == "Qself") return SignFlavor::QuasilinearSelf;
  throw ConfigError("unknown operator flavor '" + f + "' (L | Q | Qself)");
}

std::string scan_csv(const ScanResult& r) {
  std::ostringstream os;
  os << "r,max_value,max_relative\n";
  for (const ScanRing& ring : r.rings)
    os << format_double(ring.r) << ',' << format_double(ring.max_value) << ','
       << format_double(ring.max_relative) << '\n';
  return os.str();
}

std::string blowdown_csv(const BlowdownSequence& s) {
  std::ostringstream os;
  os << "lambda,sup_u,sup_du,undefined\n";
  for (std::size_t k = 0; k < s.scales.size(); ++k)
    os << format_double(s.scales[k]) << ',' << format_double(s.sup_u[k]) << ','
       << format_double(s.sup_du[k]) << ',' << s.undefined[k] << '\n';
  return os.str();
}

int cmd_audit(const AuditOpts& o, std::ostream& out) {
  for (const std::string& n : o.names)
    if (!kAudits.count(n)) throw ConfigError("unknown audit '" + n + "'");
  if (o.center.size() != 2 && o.center.size() != 3)
    throw ConfigError("--center takes 2 or 3 coordinates");
  Run run{o.common.out_dir(), "audit"};
  run.config = o.common.describe();
  run.config["audits"] = o.names;
  const bool need_field = std::find(o.names.begin(), o.names.end(), "ecker") != o.names.end() ||
                          std::find(o.names.begin(), o.names.end(), "area-ratio") != o.names.end();
  const bool only_barrier =
      std::all_of(o.names.begin(), o.names.end(), [](const auto& n) { return n == "barrier"; });
  Source src;
  if (!(only_barrier && o.common.exact.empty() && o.common.solution.empty()))
    src = resolve(o.common, need_field);
  const Point2 c2{o.center[0], o.center[1]};
  const Point3 c3{o.center[0], o.center[1], o.center.size() == 3 ? o.center[2] : 0.0};
  std::vector<AuditRow> rows;
  for (const std::string& name : o.names) {
    json params = {{"audit", name}, {"input", o.common.describe()}};
    AuditRow row;
    row.name = name;
    if (name == "gauss-bonnet") {
      params["region"] = {o.center, o.r_in, o.r_out};
      const Topology topo{1, 0, o.r_in > 0 ? 2 : 1};
      const auto a = gauss_bonnet_audit(src.sampler, c2, o.r_in, o.r_out, topo, src.h, o.samples);
      row.metric = std::abs(a.defect);
      row.tolerance = a.tolerance;
      row.pass = a.pass;
      out << "gauss-bonnet: interior " << format_double(a.interior) << " boundary "
          << format_double(a.boundary) << " euler " << format_double(a.euler) << " defect "
          << format_double(a.defect) << "\n";
    } else if (name == "decay") {
      params["mode"] = o.mode;
      if (o.mode == "ray") {
        if (o.direction.size() != 2 || o.offset.size() != 2)
          throw ConfigError("--direction and --offset take 2 coordinates");
        params["ray"] = {o.direction, o.offset, o.s0, o.s1};
        const DecayFit f = decay_fit_ray(src.sampler, {o.direction[0], o.direction[1]},
                                         {o.offset[0], o.offset[1]}, o.s0, o.s1);
        row.metric = f.mu;
        row.tolerance = f.width;
        row.pass = std::isfinite(f.mu) && f.mu > 0;
        out << "decay: mu " << format_double(f.mu) << " +- " << format_double(f.width)
            << " rms " << format_double(f.rms) << "\n";
      } else if (o.mode == "radial") {
        params["window"] = {o.r1, o.r2, o.alpha};
        const DecayFit f = decay_fit_radial(src.sampler, o.r1, o.r2, o.alpha);
        row.metric = f.envelope_excess;
        row.tolerance = 1.05;
        row.pass = f.compliant;
        out << "decay: beta " << format_double(f.beta) << " q " << format_double(f.q)
            << " better " << f.better << " envelope excess "
            << format_double(f.envelope_excess) << "\n";
      } else {
        throw ConfigError("unknown decay mode '" + o.mode + "' (ray | radial)");
      }
    } else if (name == "blowdown") {
      params["scales"] = o.scales;
      params["m"] = o.m;
      const BlowdownSequence s = blowdown(src.sampler, o.scales, o.m);
      row.metric = std::max(s.sup_u.back(), s.sup_du.back());
      row.tolerance = 1e-3;
      row.pass = s.monotone() && row.metric < 1e-3;
      run.write("blowdown.csv", blowdown_csv(s));
    } else if (name == "barrier") {
      params["barrier"] = {o.kind, o.mu, o.alpha, o.flavor, o.scan.r_min, o.scan.r_max,
                           o.scan.dr, o.scan.n_theta, o.scan.h, o.scan.analytic};
      const ScanResult r = barrier_scan(spec_of(o.kind, o.mu, o.alpha), flavor_of(o.flavor),
                                        o.scan, src.sampler);
      row.metric = r.r0;
      row.tolerance = o.scan.r_max;
      row.pass = r.found;
      run.write("barrier_scan.csv", scan_csv(r));
      out << "barrier: R0 " << format_double(r.r0) << " max relative value beyond R0 "
          << format_double(r.max_relative_beyond) << "\n";
    } else if (name == "ecker") {
      params["ball"] = {o.center, o.rho};
      const EckerAudit e = ecker_audit(shape_report(*src.field), c3, o.rho);
      row.metric = std::isnan(e.fitted_c) ? 0.0 : e.fitted_c;
      row.tolerance = kNaN;
      row.pass = std::isfinite(e.fitted_c) || e.lhs == 0.0;
      out << "ecker: lhs " << format_double(e.lhs) << " rhs " << format_double(e.rhs) << "\n";
    } else if (name == "area-ratio") {
      params["ball"] = {o.center, o.radius};
      const AreaRatio a = area_ratio(*src.field, c3, o.radius);
      row.metric = a.ratio;
      row.tolerance = kNaN;
      row.pass = !a.empty;
    } else if (name == "slice") {
      params["window"] = {o.center, o.r1, o.r2};
      const SliceResult s = coarea_slice(src.sampler, o.r1, o.r2, 16, c2);
      row.metric = s.line_energy;
      row.tolerance = s.budget;
      row.pass = s.line_energy <= s.budget;
      out << "slice: rho " << format_double(s.rho) << "\n";
    }
    row.inputs_hash = content_hash(params);
    rows.push_back(row);
  }
  run.write("audit.csv", csv_rows(rows));
  out << csv_rows(rows);
  run.finish(kExitOk);
  return kExitOk;
}

// ---------------------------------------------------------------- refine

struct RefineOpts {
  SolveOpts solve;
  int levels = 3;
};

double observed_order(double coarse, double fine) {
  if (!(coarse > 0) || !(fine > 0)) return kNaN;
  return std::log2(coarse / fine);
}

int cmd_refine(const RefineOpts& o, std::ostream& out) {
  if (o.levels < 3) throw ConfigError("refine needs at least 3 levels");
  if (o.solve.boundary.rfind("exact:", 0) != 0)
    throw ConfigError("refine needs exact boundary data (exact:<solution>)");
  const ExactSolution ex = parse_exact(o.solve.boundary.substr(6));
  Run run{o.solve.common.out_dir(), "refine"};
  run.config = o.solve.common.describe();
  run.config["boundary"] = o.solve.boundary;
  run.config["levels"] = o.levels;
  run.config["settings"] = to_json(o.solve.settings);
  run.tolerances = {{"residual", o.solve.settings.tol}, {"order", 0.2}};
  // Memory guard before any work.
  for (int l = 0; l < o.levels; ++l) {
    Common c = o.solve.common;
    c.h = o.solve.common.h / std::pow(2.0, l);
    (void)grid_of(c);
  }
  std::ostringstream table;
  table << "level,h,nodes,iterations,converged,solve_error,exact_residual,gb_defect,k0_1\n";
  std::vector<double> err, res, gb;
  int code = kExitOk;
  for (int l = 0; l < o.levels; ++l) {
    SolveOpts so = o.solve;
    so.common.h = o.solve.common.h / std::pow(2.0, l);
    const ScalarField b = boundary_field(so);
    const SolveReport rep = newton_solve({b}, so.settings);
    if (!rep.converged) code = kExitNumerical;
    double e = 0.0;
    for (int j = 0; j < b.grid.ny; ++j)
      for (int i = 0; i < b.grid.nx; ++i)
        if (b.mask.inside(i, j))
          e = std::max(e, std::abs(rep.solution.at(i, j) - ex.value(b.grid.node(i, j))));
    const double r = sup_residual(b);
    const auto& bx = so.common.box;
    const Point2 mid{0.5 * (bx[0] + bx[1]), 0.5 * (bx[2] + bx[3])};
    const double half = 0.5 * std::min(bx[1] - bx[0], bx[3] - bx[2]);
    const auto a = gauss_bonnet_audit(sampler_from(rep.solution), mid, 0.3 * half,
                                      0.7 * half, {1, 0, 2}, so.common.h);
    err.push_back(e);
    res.push_back(r);
    gb.push_back(std::abs(a.defect));
    table << l << ',' << format_double(so.common.h) << ','
          << b.mask.count(NodeKind::Interior) + b.mask.count(NodeKind::Boundary) << ','
          << rep.iterations << ',' << (rep.converged ? "true" : "false") << ','
          << format_double(e) << ',' << format_double(r) << ',' << format_double(std::abs(a.defect))
          << ',' << format_double(k0(1.0)) << '\n';
  }
  std::ostringstream orders;
  orders << "quantity,level,order\n";
  for (int l = 1; l < o.levels; ++l) {
    orders << "solve_error," << l << ',' << format_double(observed_order(err[l - 1], err[l])) << '\n';
    orders << "exact_residual," << l << ',' << format_double(observed_order(res[l - 1], res[l]))
           << '\n';
    orders << "gb_defect," << l << ',' << format_double(observed_order(gb[l - 1], gb[l])) << '\n';
  }
  run.write("refine.csv", table.str());
  run.write("orders.csv", orders.str());
  out << table.str() << orders.str();
  run.finish(code);
  return code;
}

// ---------------------------------------------------------------- scans

struct ScanOpts {
  Common common;
  std::string kind = "bessel", flavor = "Q";
  double mu = 0.5, alpha = 8.0;
  ScanSettings scan;
};

int cmd_barrier_scan(const ScanOpts& o, std::ostream& out) {
  Run run{o.common.out_dir(), "barrier-scan"};
  const BarrierSpec spec = spec_of(o.kind, o.mu, o.alpha);
  run.config = {{"barrier", to_json(spec)},
                {"flavor", o.flavor},
                {"background", o.common.exact.empty() ? "zero" : o.common.exact},
                {"r_min", o.scan.r_min},
                {"r_max", o.scan.r_max},
                {"dr", o.scan.dr},
                {"n_theta", o.scan.n_theta},
                {"stencil_h", o.scan.h},
                {"analytic", o.scan.analytic}};
  run.tolerances = {{"sign", 0.0}};
  HeightSampler bg;
  if (!o.common.exact.empty() || !o.common.solution.empty()) bg = resolve(o.common, false).sampler;
  const ScanResult r = barrier_scan(spec, flavor_of(o.flavor), o.scan, bg);
  run.write("barrier_scan.csv", scan_csv(r));
  json summary = {{"barrier", to_json(spec)},
                  {"found", r.found},
                  {"r0", r.found ? json(r.r0) : json(nullptr)},
                  {"max_relative_beyond",
                   r.found ? json(r.max_relative_beyond) : json(nullptr)}};
  run.write("barrier_scan.json", summary.dump(2) + "\n");
  out << "barrier-scan: " << describe(spec) << " R0 " << format_double(r.r0) << "\n";
  run.finish(kExitOk);
  return kExitOk;
}

struct BlowOpts {
  Common common;
  std::vector<double> scales{1.0, 0.5, 0.25, 0.125};
  double m = 4.0;
  int n_r = 64, n_theta = 256;
};

int cmd_blowdown(const BlowOpts& o, std::ostream& out) {
  Run run{o.common.out_dir(), "blowdown"};
  run.config = o.common.describe();
  run.config["scales"] = o.scales;
  run.config["m"] = o.m;
  run.tolerances = {{"plane", 1e-3}};
  const Source src = resolve(o.common, false);
  const BlowdownSequence s = blowdown(src.sampler, o.scales, o.m, o.n_r, o.n_theta);
  run.write("blowdown.csv", blowdown_csv(s));
  out << blowdown_csv(s) << "monotone " << (s.monotone() ? "true" : "false") << " truncated "
      << (s.truncated ? "true" : "false") << "\n";
  run.finish(kExitOk);
  return kExitOk;
}

void add_scan_options(CLI::App* sub, std::string& kind, std::string& flavor, double& mu,
                      double& alpha, ScanSettings& scan) {
  sub->add_option("--kind", kind, "Barrier kind: exp | bessel")->capture_default_str();
  sub->add_option("--flavor", flavor, "Operator: L | Q | Qself")->capture_default_str();
  sub->add_option("--mu", mu, "Rate of the exponential barrier")->capture_default_str();
  sub->add_option("--alpha", alpha, "Bessel barrier exponent parameter (> 4)")
      ->capture_default_str();
  sub->add_option("--r-min", scan.r_min, "First scanned radius")->capture_default_str();
  sub->add_option("--r-max", scan.r_max, "Last scanned radius")->capture_default_str();
  sub->add_option("--dr", scan.dr, "Radius step")->capture_default_str();
  sub->add_option("--n-theta", scan.n_theta, "Angles per ring")->capture_default_str();
  sub->add_option("--stencil-h", scan.h, "Difference step of the discrete operator")
      ->capture_default_str();
  sub->add_flag("--analytic", scan.analytic, "Use closed-form barrier derivatives");
}

void add_solver_options(CLI::App* sub, SolveOpts& o) {
  sub->add_option("--boundary", o.boundary,
                  "Boundary data: exact:<solution> | file:<grid> | zero | bump(amp,cx,cy,w)")
      ->required();
  sub->add_option("--tol", o.settings.tol, "Sup-norm residual tolerance")->capture_default_str();
  sub->add_option("--max-iter", o.settings.max_iter, "Newton iteration cap")
      ->capture_default_str();
  sub->add_option("--max-halvings", o.settings.max_halvings, "Step halvings before failure")
      ->capture_default_str();
}

int guarded(const std::function<int()>& f, std::ostream& err) {
  try {
    return f();
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::logic_error& e) {  // invalid_argument, DomainError
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"translab: numerical laboratory for graphical translators"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  SolveOpts solve;
  auto* s_solve = app.add_subcommand("solve", "Newton solve of the translator equation");
  add_common(s_solve, solve.common, false);
  add_solver_options(s_solve, solve);

  AuditOpts audit;
  auto* s_audit = app.add_subcommand("audit", "Run audits on an exact or solved graph");
  add_common(s_audit, audit.common, true);
  s_audit
      ->add_option("names", audit.names,
                   "gauss-bonnet | decay | blowdown | barrier | ecker | area-ratio | slice")
      ->required();
  s_audit->add_option("--center", audit.center, "Centre cx,cy[,cz]")->delimiter(',');
  s_audit->add_option("--r-in", audit.r_in, "Inner radius (gauss-bonnet)")->capture_default_str();
  s_audit->add_option("--r-out", audit.r_out, "Outer radius (gauss-bonnet)")->capture_default_str();
  s_audit->add_option("--rho", audit.rho, "Ball radius (ecker)")->capture_default_str();
  s_audit->add_option("--radius", audit.radius, "Ball radius (area-ratio)")->capture_default_str();
  s_audit->add_option("--r1", audit.r1, "Window start (slice, radial decay)")->capture_default_str();
  s_audit->add_option("--r2", audit.r2, "Window end (slice, radial decay)")->capture_default_str();
  s_audit->add_option("--samples", audit.samples, "Samples per circle")->capture_default_str();
  s_audit->add_option("--mode", audit.mode, "Decay mode: ray | radial")->capture_default_str();
  s_audit->add_option("--direction", audit.direction, "Ray direction")->delimiter(',');
  s_audit->add_option("--offset", audit.offset, "Ray origin")->delimiter(',');
  s_audit->add_option("--s0", audit.s0, "Ray start")->capture_default_str();
  s_audit->add_option("--s1", audit.s1, "Ray end")->capture_default_str();
  s_audit->add_option("--scales", audit.scales, "Blow-down scales")->delimiter(',');
  s_audit->add_option("--m", audit.m, "Blow-down annulus B_m minus B_1/m")->capture_default_str();
  add_scan_options(s_audit, audit.kind, audit.flavor, audit.mu, audit.alpha, audit.scan);

  RefineOpts refine;
  auto* s_refine = app.add_subcommand("refine", "Solve at h, h/2, h/4, ... and report orders");
  add_common(s_refine, refine.solve.common, false);
  add_solver_options(s_refine, refine.solve);
  s_refine->add_option("--levels", refine.levels, "Number of levels (>= 3)")->capture_default_str();

  ScanOpts scan;
  auto* s_scan = app.add_subcommand("barrier-scan", "Ring scan of the barrier operator sign");
  add_common(s_scan, scan.common, true);
  add_scan_options(s_scan, scan.kind, scan.flavor, scan.mu, scan.alpha, scan.scan);

  BlowOpts blow;
  auto* s_blow = app.add_subcommand("blowdown", "Blow-down sequence on a fixed annulus");
  add_common(s_blow, blow.common, true);
  s_blow->add_option("--scales", blow.scales, "Decreasing scales")->delimiter(',');
  s_blow->add_option("--m", blow.m, "Annulus parameter")->capture_default_str();
  s_blow->add_option("--n-r", blow.n_r, "Radial samples")->capture_default_str();
  s_blow->add_option("--n-theta", blow.n_theta, "Angular samples")->capture_default_str();

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(args);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::vector<const char*> argv{"translab"};
  for (const auto& a : expanded) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (s_solve->parsed()) return guarded([&] { return cmd_solve(solve, out); }, err);
  if (s_audit->parsed()) return guarded([&] { return cmd_audit(audit, out); }, err);
  if (s_refine->parsed()) return guarded([&] { return cmd_refine(refine, out); }, err);
  if (s_scan->parsed()) return guarded([&] { return cmd_barrier_scan(scan, out); }, err);
  if (s_blow->parsed()) return guarded([&] { return cmd_blowdown(blow, out); }, err);
  return kExitConfig;
}

}  // namespace translab
