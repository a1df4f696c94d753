#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "acceptance_suite.hpp"
#include "qspec/qspec.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using qspec::io::format_double;
using qspec::io::write_csv_row;

namespace {

/// Destination stream for --out ("-" is stdout); errors carry the path.
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_.open(path_, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open " + path_ + " for writing");
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
  void close() {
    if (path_ == "-") {
      std::cout.flush();
      return;
    }
    file_.close();
    if (!file_) throw std::runtime_error("error writing " + path_);
  }

 private:
  std::string path_;
  std::ofstream file_;
};

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> v(static_cast<std::size_t>(points));
  const double m = points - 1;
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = (lo * (m - i) + hi * i) / m;
  return v;
}

void write_file(const fs::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  Output out(path.string());
  write_csv_row(out.stream(), header);
  for (const auto& r : rows) write_csv_row(out.stream(), r);
  out.close();
  std::cerr << "wrote " << path.string() << "\n";
}

std::string flag(bool pole) { return pole ? "pole" : ""; }

/// lambda, exact, quadratic approximant, oscillatory approximant: three files.
struct CurveSet {
  std::function<double(double)> exact;
  std::function<double(double)> quadratic;
  std::function<qspec::Approximation(double)> oscillatory;
};

void emit_curves(const fs::path& dir, const std::string& stem, const std::string& column, int cap,
                 const std::vector<double>& grid, const CurveSet& c) {
  const double edge = std::sqrt(2.0 * cap + 1.0);
  std::vector<std::vector<std::string>> exact, quad, osc;
  for (double l : grid) {
    exact.push_back({format_double(l), format_double(c.exact(l))});
    if (std::fabs(l) > edge) quad.push_back({format_double(l), format_double(c.quadratic(l))});
    if (std::fabs(l) < edge) {
      const auto a = c.oscillatory(l);
      osc.push_back({format_double(l), format_double(a.value), flag(a.pole_flag)});
    }
  }
  write_file(dir / (stem + "_exact.csv"), {"lambda", column}, exact);
  write_file(dir / (stem + "_quadratic.csv"), {"lambda", column}, quad);
  write_file(dir / (stem + "_oscillatory.csv"), {"lambda", column, "flags"}, osc);
}

struct FigureArgs {
  std::string id;
  std::string outdir = ".";
  int cap = -1;
  std::vector<double> lambdas;
  int points = 0;
  bool animate = false;
  bool best_effort = false;
};

void figure(const FigureArgs& a) {
  const fs::path dir(a.outdir);
  fs::create_directories(dir);
  using qspec::Regime;
  if (a.id == "fig1_dn") {
    const int cap = a.cap < 0 ? 15 : a.cap;
    emit_curves(dir, "fig1_dn", "d", cap, linspace(-8, 8, a.points ? a.points : 1601),
                {[&](double l) { return qspec::d_measure(l, cap); },
                 [&](double l) { return qspec::d_approx_quadratic(l, cap, 2); },
                 [&](double l) { return qspec::d_approx_oscillatory(l, cap); }});
  } else if (a.id == "fig2_cdzeros") {
    std::vector<int> caps = a.cap < 0 ? std::vector<int>{5, 10, 25, 50} : std::vector<int>{a.cap};
    if (a.cap < 0 && a.best_effort) caps.insert(caps.end(), {150, 500});
    for (int cap : caps) {
      const bool relaxed = a.best_effort || cap > 100;
      const auto rs = qspec::complex_zeros(cap, relaxed);
      std::vector<std::vector<std::string>> rows;
      for (const auto& z : rs.roots) rows.push_back({format_double(z.real()), format_double(z.imag())});
      const std::string stem = "fig2_cdzeros_N" + std::to_string(cap);
      write_file(dir / (stem + ".csv"), {"re", "im"}, rows);
      if (relaxed) {
        Output side((dir / (stem + "_residuals.json")).string());
        side.stream() << json{{"cap", cap},
                              {"max_residual", rs.max_residual},
                              {"precision_bits", rs.precision_bits},
                              {"flagged", rs.flagged}}
                             .dump()
                      << "\n";
        side.close();
      }
    }
  } else if (a.id == "fig3_wavefunctions") {
    const int cap = a.cap < 0 ? 16 : a.cap;
    const auto xs = linspace(-10, 10, a.points ? a.points : 2001);
    auto curve = [&](double l) {
      std::vector<std::vector<std::string>> rows;
      for (double x : xs) rows.push_back({format_double(x), format_double(qspec::wavefunction(x, l, cap))});
      return rows;
    };
    const auto lambdas = a.lambdas.empty() ? std::vector<double>{-5, -2, 0, 2, 5, 10} : a.lambdas;
    for (double l : lambdas) write_file(dir / ("fig3_wavefunctions_lambda_" + format_double(l) + ".csv"), {"xi", "psi"}, curve(l));
    if (a.animate) {
      const fs::path frames = dir / "fig3_frames";
      fs::create_directories(frames);
      std::vector<std::vector<std::string>> index;
      const auto grid = linspace(-10, 10, 201);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.csv", k);
        write_file(frames / name, {"xi", "psi"}, curve(grid[k]));
        index.push_back({std::to_string(k), format_double(grid[k]), name});
      }
      write_file(frames / "frames.csv", {"frame", "lambda", "file"}, index);
    }
  } else if (a.id == "fig4_expectation") {
    const int cap = a.cap < 0 ? 16 : a.cap;
    emit_curves(dir, "fig4_expectation", "expectation", cap, linspace(-10, 10, a.points ? a.points : 2001),
                {[&](double l) { return qspec::expectation_xi(l, cap); },
                 [&](double l) { return qspec::expectation_approx(l, cap, Regime::quadratic).value; },
                 [&](double l) { return qspec::expectation_approx(l, cap, Regime::oscillatory); }});
  } else if (a.id == "fig5_dispersion") {
    const int cap = a.cap < 0 ? 8 : a.cap;
    emit_curves(dir, "fig5_dispersion", "var_truncated", cap, linspace(-8, 8, a.points ? a.points : 1601),
                {[&](double l) { return qspec::variance_truncated(l, cap); },
                 [&](double l) { return qspec::variance_truncated_approx(l, cap, Regime::quadratic).value; },
                 [&](double l) { return qspec::variance_truncated_approx(l, cap, Regime::oscillatory); }});
  } else if (a.id == "fig6_full_dispersion") {
    const int cap = a.cap < 0 ? 16 : a.cap;
    emit_curves(dir, "fig6_full_dispersion", "var_full", cap, linspace(-10, 10, a.points ? a.points : 2001),
                {[&](double l) { return qspec::variance_full(l, cap); },
                 [&](double l) { return qspec::variance_full_approx(l, cap, Regime::quadratic).value; },
                 [&](double l) { return qspec::variance_full_approx(l, cap, Regime::oscillatory); }});
  }
}

const std::vector<std::string> kSweepOutputs{"d",          "d_approx_quad", "d_approx_osc", "expectation",
                                             "expectation_approx", "var_trunc", "var_full", "var_full_approx"};

void sweep(int cap, double lo, double hi, int points, std::vector<std::string> outputs, const std::string& path) {
  if (!(lo < hi)) throw qspec::PreconditionError("sweep: lambda-min must be < lambda-max");
  if (points < 2) throw qspec::PreconditionError("sweep: points must be >= 2");
  const bool standard = outputs.empty();
  if (standard) outputs = {"d", "expectation", "var_trunc", "var_full"};
  std::vector<std::string> header{"lambda"};
  for (const auto& o : outputs) header.push_back(o == "var_trunc" && standard ? "var_truncated" : o);
  header.push_back("flags");
  const double edge = std::sqrt(2.0 * cap + 1.0);
  Output out(path);
  write_csv_row(out.stream(), header);
  for (double l : linspace(lo, hi, points)) {
    std::vector<std::string> row{format_double(l)};
    bool pole = false;
    auto approx = [&](qspec::Approximation a) {
      pole = pole || a.pole_flag;
      return format_double(a.value);
    };
    const auto regime = std::fabs(l) > edge ? qspec::Regime::quadratic : qspec::Regime::oscillatory;
    const bool on_edge = std::fabs(l) == edge;
    for (const auto& o : outputs) {
      if (o == "d") row.push_back(format_double(qspec::d_measure(l, cap)));
      else if (o == "d_approx_quad") row.push_back(std::fabs(l) > edge ? format_double(qspec::d_approx_quadratic(l, cap)) : "");
      else if (o == "d_approx_osc") row.push_back(std::fabs(l) < edge ? approx(qspec::d_approx_oscillatory(l, cap)) : "");
      else if (o == "expectation") row.push_back(format_double(qspec::expectation_xi(l, cap)));
      else if (o == "expectation_approx") row.push_back(on_edge ? "" : approx(qspec::expectation_approx(l, cap, regime)));
      else if (o == "var_trunc") row.push_back(format_double(qspec::variance_truncated(l, cap)));
      else if (o == "var_full") row.push_back(format_double(qspec::variance_full(l, cap)));
      else if (o == "var_full_approx") row.push_back(on_edge ? "" : approx(qspec::variance_full_approx(l, cap, regime)));
    }
    row.push_back(flag(pole));
    write_csv_row(out.stream(), row);
  }
  out.close();
}

int validate(const std::string& suite, const std::string& fault, const std::string& report) {
  acceptance::Options opt;
  opt.suite = suite == "fast" ? acceptance::Suite::fast : acceptance::Suite::full;
  if (fault == "offdiag") opt.offdiag_fault = 1e-6;
  int failed = 0;
  json entries = json::array();
  for (const auto& c : acceptance::criteria()) {
    const auto r = acceptance::run(c, opt);
    acceptance::print(std::cout, r);
    failed += !r.outcome.pass;
    entries.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.outcome.pass}, {"details", r.outcome.lines}});
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  if (!report.empty()) {
    Output out(report);
    out.stream() << json{{"suite", suite}, {"fault", fault}, {"failed", failed}, {"criteria", entries}}.dump(2) << "\n";
    out.close();
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated quadrature operators, pseudo-eigenstates and Christoffel-Darboux kernels"};
  app.require_subcommand(1);

  int cap = 1;
  double beta = 0.0;
  std::string format = "json", out = "-";
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and eigenvectors of the truncated quadrature");
  spectrum->add_option("--cap", cap, "Photon-number cutoff N")->required()->check(CLI::NonNegativeNumber);
  spectrum->add_option("--beta", beta, "Quadrature angle");
  spectrum->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  spectrum->add_option("--out", out, "Output path, - for stdout");

  FigureArgs fig;
  auto* figure_cmd = app.add_subcommand("figure", "Write the CSV data behind a figure");
  figure_cmd->add_option("id", fig.id)->required()->check(CLI::IsMember(
      {"fig1_dn", "fig2_cdzeros", "fig3_wavefunctions", "fig4_expectation", "fig5_dispersion", "fig6_full_dispersion"}));
  figure_cmd->add_option("--outdir", fig.outdir);
  figure_cmd->add_option("--cap", fig.cap, "Override the preset cutoff");
  figure_cmd->add_option("--lambda", fig.lambdas, "fig3: pseudo-eigenvalues to plot");
  figure_cmd->add_option("--points", fig.points, "Grid points");
  figure_cmd->add_flag("--animate", fig.animate, "fig3: also write frames over a lambda grid");
  figure_cmd->add_flag("--best-effort", fig.best_effort, "fig2: add N = 150, 500 with residual sidecars");

  qspec::LimitQuery query;
  std::string mode = "quadrature";
  std::vector<double> grid_spec;
  auto* limit = app.add_subcommand("limit", "Certificate of an eigenvalue (or phase point) near a target");
  limit->add_option("--target", query.target);
  limit->add_option("--epsilon", query.epsilon)->check(CLI::PositiveNumber);
  limit->add_option("--n0", query.n0)->check(CLI::NonNegativeNumber);
  limit->add_option("--mode", mode)->check(CLI::IsMember({"quadrature", "phase"}));
  limit->add_option("--theta0", query.theta0);
  limit->add_option("--grid", grid_spec, "FROM TO STEP: one certificate per grid point")->expected(3);

  std::string suite = "fast", fault = "none", report;
  auto* validate_cmd = app.add_subcommand("validate", "Run the acceptance suite");
  validate_cmd->add_option("--suite", suite)->check(CLI::IsMember({"fast", "full"}));
  validate_cmd->add_option("--inject-fault", fault)->check(CLI::IsMember({"none", "offdiag"}));
  validate_cmd->add_option("--report", report, "Write a JSON report");

  double lo = -8, hi = 8;
  int points = 1601;
  std::vector<std::string> outputs;
  auto* sweep_cmd = app.add_subcommand("sweep", "Moments over a lambda grid");
  sweep_cmd->add_option("--cap", cap)->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--lambda-min", lo);
  sweep_cmd->add_option("--lambda-max", hi);
  sweep_cmd->add_option("--points", points);
  sweep_cmd->add_option("--outputs", outputs)->check(CLI::IsMember(kSweepOutputs));
  sweep_cmd->add_option("--out", out);

  bool best_effort = false, with_report = false;
  auto* zeros = app.add_subcommand("zeros", "Complex zeros of the diagonal Christoffel-Darboux kernel");
  zeros->add_option("--cap", cap)->required()->check(CLI::PositiveNumber);
  zeros->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  zeros->add_flag("--best-effort", best_effort);
  zeros->add_flag("--report", with_report, "Include spacing statistics (json)");
  zeros->add_option("--out", out);

  double lambda = 0.0, mu = 0.0;
  auto* kernel_cmd = app.add_subcommand("kernel", "Christoffel-Darboux kernel K_N(lambda, mu)");
  kernel_cmd->add_option("--lambda", lambda)->required();
  kernel_cmd->add_option("--mu", mu)->required();
  kernel_cmd->add_option("--cap", cap)->required()->check(CLI::NonNegativeNumber);

  std::string norm = "unit";
  auto* state = app.add_subcommand("state", "Pseudo-eigenstate coefficients and moments");
  state->add_option("--lambda", lambda)->required();
  state->add_option("--cap", cap)->required()->check(CLI::PositiveNumber);
  state->add_option("--mode", norm)->check(CLI::IsMember({"unit", "position"}));

  int degree = 1;
  bool weights = false;
  auto* roots = app.add_subcommand("roots", "Roots of H_n and Gauss-Hermite weights");
  roots->add_option("--degree", degree)->required()->check(CLI::PositiveNumber);
  roots->add_flag("--weights", weights);

  int k = 0;
  auto* laurent = app.add_subcommand("laurent", "Coefficient alpha_k of d_N at infinity by residues");
  laurent->add_option("--cap", cap)->required()->check(CLI::PositiveNumber);
  laurent->add_option("--k", k)->required()->check(CLI::NonNegativeNumber);

  double theta0 = 0.0;
  auto* phase = app.add_subcommand("phase", "Equally spaced phase points of the N-truncation");
  phase->add_option("--cap", cap)->required()->check(CLI::NonNegativeNumber);
  phase->add_option("--theta0", theta0);

  auto* cayley = app.add_subcommand("cayley", "Norms of h_k(xi_N), k = 0..N+1");
  cayley->add_option("--cap", cap)->required()->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*spectrum) {
      const auto q = qspec::build(cap, beta);
      const auto dec = qspec::diagonalize(q);
      Output o(out);
      if (format == "csv") {
        write_csv_row(o.stream(), {"index", "eigenvalue"});
        for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i)
          write_csv_row(o.stream(), {std::to_string(i), format_double(dec.eigenvalues[i])});
      } else {
        json j = qspec::io::to_json(dec);
        j["beta"] = beta;
        if (beta != 0.0) {
          json vectors = json::array();
          for (std::size_t c = 0; c < dec.eigenvalues.size(); ++c) {
            json col = json::array();
            for (std::size_t n = 0; n < dec.eigenvalues.size(); ++n) {
              const auto v = q.phase_factors[n] * dec.eigenvectors(n, c);
              col.push_back({v.real(), v.imag()});
            }
            vectors.push_back(col);
          }
          j["eigenvectors"] = vectors;
        }
        o.stream() << j.dump() << "\n";
      }
      o.close();
    } else if (*figure_cmd) {
      figure(fig);
    } else if (*limit) {
      if (mode == "phase") query.mode = qspec::LimitMode::phase;
      if (grid_spec.empty()) {
        std::cout << qspec::io::to_json(qspec::find_near_eigenvalue(query)).dump() << "\n";
      } else {
        if (!(grid_spec[2] > 0)) throw qspec::PreconditionError("limit: grid step must be > 0");
        const auto n = static_cast<long>(std::floor((grid_spec[1] - grid_spec[0]) / grid_spec[2] + 1e-9));
        for (long i = 0; i <= n; ++i) {
          auto q = query;
          q.target = grid_spec[0] + grid_spec[2] * static_cast<double>(i);
          std::cout << qspec::io::to_json(qspec::find_near_eigenvalue(q)).dump() << "\n";
        }
      }
    } else if (*validate_cmd) {
      return validate(suite, fault, report);
    } else if (*sweep_cmd) {
      sweep(cap, lo, hi, points, outputs, out);
    } else if (*zeros) {
      const auto rs = qspec::complex_zeros(cap, best_effort);
      Output o(out);
      if (format == "csv") {
        qspec::io::write_roots_csv(o.stream(), rs);
      } else {
        json j = qspec::io::to_json(rs);
        if (with_report) {
          const auto r = qspec::zero_structure_report(rs);
          j["report"] = {{"spacing_mean", r.spacing_mean}, {"spacing_cv", r.spacing_cv},
                         {"gap_ratio_mean", r.gap_ratio_mean}, {"max_imag", r.max_imag},
                         {"min_imag", r.min_imag}, {"conjugate_residual", r.conjugate_residual},
                         {"spacings", r.spacings}};
        }
        o.stream() << j.dump() << "\n";
      }
      o.close();
    } else if (*kernel_cmd) {
      const auto e = qspec::kernel(lambda, mu, cap);
      std::cout << json{{"cap", cap}, {"lambda", lambda}, {"mu", mu}, {"value", e.value}, {"form", qspec::to_string(e.form_used)}}.dump()
                << "\n";
    } else if (*state) {
      const auto s = qspec::build_state(lambda, cap, norm == "unit" ? qspec::NormalizationMode::unit_norm
                                                                     : qspec::NormalizationMode::truncated_position_ket);
      const auto m = qspec::moment_report(lambda, cap);
      std::cout << json{{"cap", cap},
                        {"lambda", lambda},
                        {"coeffs", s.coeffs},
                        {"residual_tail", s.tail},
                        {"d", m.d_value},
                        {"expectation", m.expectation},
                        {"var_truncated", m.var_truncated},
                        {"var_full", m.var_full}}
                       .dump()
                << "\n";
    } else if (*roots) {
      const auto rs = qspec::hermite_roots(degree, weights);
      std::vector<std::string> header{"root"};
      if (weights) header.push_back("weight");
      write_csv_row(std::cout, header);
      for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        std::vector<std::string> row{format_double(rs.roots[i])};
        if (weights) row.push_back(format_double(rs.weights[i]));
        write_csv_row(std::cout, row);
      }
    } else if (*laurent) {
      std::cout << json{{"cap", cap}, {"k", k}, {"alpha", qspec::laurent_coefficient(cap, k)}}.dump() << "\n";
    } else if (*phase) {
      write_csv_row(std::cout, {"k", "theta"});
      const auto pts = qspec::phase_spectrum(cap, theta0);
      for (std::size_t i = 0; i < pts.size(); ++i) write_csv_row(std::cout, {std::to_string(i), format_double(pts[i])});
    } else if (*cayley) {
      const auto r = qspec::minimal_polynomial_check(cap);
      std::cout << json{{"cap", cap},
                        {"norms", r.norms},
                        {"residual", r.residual},
                        {"annihilates", r.annihilates},
                        {"lower_degrees_nonvanishing", r.lower_degrees_nonvanishing}}
                       .dump()
                << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
