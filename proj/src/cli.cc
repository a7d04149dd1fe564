#include "passivity/cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "passivity/experiments.h"
#include "passivity/model_io.h"
#include "passivity/normalization.h"
#include "passivity/passify.h"
#include "passivity/radius.h"
#include "passivity/riccati.h"
#include "passivity/xi.h"

namespace passivity {

namespace {

using Json = nlohmann::ordered_json;

Json MatrixJson(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

Json ModelJson(const StateSpaceModel& model) {
  return {{"A", MatrixJson(model.A)},
          {"B", MatrixJson(model.B)},
          {"C", MatrixJson(model.C)},
          {"D", MatrixJson(model.D)}};
}

Json PerturbationJson(const Perturbation& p) {
  const Matrix s = p.Assembled();
  return {{"deltaA", MatrixJson(p.deltaA)},
          {"deltaB", MatrixJson(p.deltaB)},
          {"deltaC", MatrixJson(p.deltaC)},
          {"deltaD", MatrixJson(p.deltaD)},
          {"norm2", norm2(s)},
          {"norm_fro", s.norm()}};
}

Json CertificateJson(const Certificate& c) {
  return {{"X", MatrixJson(c.X.matrix())},
          {"classification", ToString(c.classification)},
          {"lambda_min_W", c.lambda_min_W},
          {"lambda_min_X", c.lambda_min_X}};
}

Json TolerancesJson(const Tolerances& t) {
  return {{"rank", t.rank_tol},     {"psd", t.psd_tol},
          {"eig", t.eig_tol},       {"circle", t.circle_tol},
          {"golden", t.golden_tol}, {"bisect", t.bisect_tau}};
}

std::string Hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Options {
  Tolerances tol;
  std::string model_path;
  std::optional<double> x_scale;
  double tau = 1e-8;
  std::string norm = "2";
  std::uint64_t seed = 1;
  int count = 50;
  int n = 5;
  int m = 2;
  double margin = 0.1;
  double a = 0.5, b = 1.0, c = 1.0, d = 1.0;
  int grid = 41;
  std::string out_path;
  std::string csv_path;
  std::string model_out_path;
};

class Command {
 public:
  Command(std::string name, const Options& opt, std::vector<std::string> args)
      : opt_(opt) {
    report_["command"] = std::move(name);
    std::string digest_input;
    for (const auto& a : args) digest_input += a + '\0';
    if (!opt.model_path.empty()) {
      model_text_ = read_file(opt.model_path);
      digest_input += model_text_;
    }
    report_["input_digest"] = Hex(fnv1a64(digest_input));
    report_["tolerances"] = TolerancesJson(opt.tol);
    report_["results"] = Json::object();
    report_["warnings"] = Json::array();
  }

  const ModelFile& Model() {
    if (!file_) {
      if (opt_.model_path.empty()) {
        throw PassivityError(ErrorCode::kInput, "--model is required");
      }
      file_ = parse_model_text(model_text_, opt_.tol);
    }
    return *file_;
  }

  // --x c gives c·I; otherwise the file's X; otherwise the certificate that
  // attains Ξ. (X₋ + X₊)/2 is only a fallback: it is singular for n > m.
  HermitianMatrix ChooseX() {
    const ModelFile& f = Model();
    if (opt_.x_scale) {
      return HermitianMatrix::Scalar(f.model.n(), *opt_.x_scale);
    }
    if (f.X) return *f.X;
    try {
      const XiResult xi = xi_sup_bisection(f.model, opt_.tau, opt_.tol);
      if (xi.strictly_passive) {
        Warn("no certificate given; using the certificate attaining Xi");
        return xi_certificate(f.model, xi, opt_.tol).X;
      }
    } catch (const PassivityError&) {
    }
    const ExtremalSolutions ext = extremal_solutions(f.model, opt_.tol);
    Warn("no certificate given; using (X_minus + X_plus)/2");
    return (ext.minus.X + ext.plus.X) * 0.5;
  }

  void Warn(const std::string& w) { report_["warnings"].push_back(w); }
  Json& Results() { return report_["results"]; }
  const Json& Report() const { return report_; }

 private:
  const Options& opt_;
  std::string model_text_;
  std::optional<ModelFile> file_;
  Json report_;
};

void Analyze(Command& cmd, const Options& opt) {
  const ModelFile& f = cmd.Model();
  const MinimalityReport mr = validate_minimal(f.model, opt.tol);
  Json& r = cmd.Results();
  r["n"] = f.model.n();
  r["m"] = f.model.m();
  r["controllable"] = mr.controllable;
  r["observable"] = mr.observable;
  r["minimal"] = mr.minimal();
  r["spectral_radius"] = mr.spectral_radius;
  r["stable"] = mr.stable;
  r["asymptotically_stable"] = mr.asymptotically_stable;
  r["strictly_passive"] = is_strictly_passive(f.model, opt.tol);
  try {
    const ExtremalSolutions ext = extremal_solutions(f.model, opt.tol);
    r["passive"] = true;
    r["X_minus"] = MatrixJson(ext.minus.X.matrix());
    r["X_plus"] = MatrixJson(ext.plus.X.matrix());
  } catch (const PassivityError& e) {
    r["passive"] = r["strictly_passive"].get<bool>();
    cmd.Warn(std::string("extremal solutions unavailable: ") + e.what());
  }
  if (f.certificate) r["certificate"] = CertificateJson(*f.certificate);
}

void Normalize(Command& cmd, const Options& opt) {
  const ModelFile& f = cmd.Model();
  const Certificate cert = classify_certificate(cmd.ChooseX(), f.model, opt.tol);
  const NormalizedRealization mt = normalize(f.model, cert, opt.tol);
  const NormalizationCheck check = verify_normalized(mt.model, opt.tol);
  Json& r = cmd.Results();
  r["certificate"] = CertificateJson(cert);
  r["T"] = MatrixJson(mt.T);
  r["model"] = ModelJson(mt.model);
  r["normalized"] = check.normalized;
  r["lambda_min"] = check.lambda_min;
  r["norm_A"] = check.norm_A;
  if (!opt.model_out_path.empty()) write_model(opt.model_out_path, mt.model);
}

void Radius(Command& cmd, const Options& opt) {
  const ModelFile& f = cmd.Model();
  const HermitianMatrix x = cmd.ChooseX();
  const RadiusReport rep = x_passivity_radius(f.model, x, opt.tol);
  Json& r = cmd.Results();
  r["X"] = MatrixJson(x.matrix());
  r["rho"] = rep.rho;
  r["lower_bound"] = rep.lower_bound;
  r["upper_bound"] = rep.upper_bound;
  r["scaled_eig_bound"] = rep.scaled_eig_bound;
  r["lambda_min_What"] = rep.lambda_min_What;
  r["estimate"] = rep.estimate;
  r["estimate_radius"] = 1.0 / rep.estimate;
  r["alpha"] = rep.gamma.search.alpha;
  r["beta"] = rep.gamma.search.beta;
  r["gamma_star"] = rep.gamma.search.gamma_star;
  r["lambda_max_star"] = rep.gamma.search.lambda_max_star;
  r["delta"] = PerturbationJson(rep.delta);
  const HermitianMatrix perturbed =
      build_What(x, rep.delta.ApplyTo(f.model), opt.tol);
  r["lambda_min_What_perturbed"] = lambda_min(perturbed);
}

void Xi(Command& cmd, const Options& opt) {
  const ModelFile& f = cmd.Model();
  const XiResult bis = xi_sup_bisection(f.model, opt.tau, opt.tol);
  const XiResult eig = xi_sup_eigenvalue(f.model, opt.tau, opt.tol);
  const auto result_json = [](const XiResult& x) {
    return Json{{"xi_lo", x.xi_lo},
                {"xi_hi", x.xi_hi},
                {"iterations", x.iterations},
                {"method", ToString(x.method)},
                {"witness_frequencies", x.witness_frequencies}};
  };
  Json& r = cmd.Results();
  r["strictly_passive"] = bis.strictly_passive;
  r["bisection"] = result_json(bis);
  r["eigenvalue"] = result_json(eig);
  const double gap = std::abs(bis.xi_hi - eig.xi_hi);
  r["agreement"] = gap;
  r["agree"] = gap <= 2.0 * opt.tau;
  if (!(gap <= 2.0 * opt.tau)) cmd.Warn("Xi procedures disagree beyond 2 tau");
}

void Passify(Command& cmd, const Options& opt) {
  const ModelFile& f = cmd.Model();
  RefineOptions ro;
  if (opt.norm == "2") {
    ro.norm = PerturbationNorm::kTwo;
  } else if (opt.norm == "fro") {
    ro.norm = PerturbationNorm::kFrobenius;
  } else {
    throw PassivityError(ErrorCode::kInput, "--norm must be 2 or fro");
  }
  const DistanceReport rep = distance_to_passivity(f.model, opt.tau, ro, opt.tol);
  Json& r = cmd.Results();
  r["xi_big"] = rep.xi_big;
  r["delta_constrained"] = PerturbationJson(rep.delta_constrained);
  r["certificate"] = CertificateJson(rep.X_cert);
  if (rep.delta_refined) r["delta_refined"] = PerturbationJson(*rep.delta_refined);
  r["sigma2"] = rep.sigma2;
  r["sigma_frob"] = rep.sigma_frob;
  r["refinement_converged"] = rep.refinement_converged;
  if (!rep.refinement_converged) cmd.Warn("norm refinement did not converge");
}

void Stability(Command& cmd, const Options& opt) {
  const ModelFile& f = cmd.Model();
  const StabilityDistance s = distance_to_stability(f.model.A, opt.tol);
  Json& r = cmd.Results();
  r["xi"] = s.xi;
  r["attained"] = s.attained;
  r["relative_error_2"] = s.relative_error_2;
  r["relative_error_frob"] = s.relative_error_frob;
}

void WriteCsv(const CsvTable& table, const Options& opt, std::ostream& out) {
  if (opt.csv_path.empty()) {
    out << format_csv(table);
  } else {
    emit_csv(table, opt.csv_path);
  }
}

Json SummaryJson(const RatioSummary& s) {
  return {{"min", s.min}, {"median", s.median}, {"max", s.max}};
}

void Ensemble(Command& cmd, const Options& opt, std::ostream& out) {
  const EnsembleResult res =
      ensemble_experiment(opt.count, opt.n, opt.m, opt.seed, 4, opt.margin, opt.tol);
  Json& r = cmd.Results();
  r["rows"] = res.rows.size();
  r["skipped"] = res.skipped;
  r["ratio_lamW"] = SummaryJson(res.lamW);
  r["ratio_lamWt"] = SummaryJson(res.lamWt);
  r["ratio_lamDs"] = SummaryJson(res.lamDs);
  r["ratio_est"] = SummaryJson(res.est);
  WriteCsv(to_csv(res.rows), opt, out);
}

void Scalar(Command& cmd, const Options& opt, std::ostream& out) {
  const std::vector<SweepRow> rows =
      scalar_sweep(opt.a, opt.b, opt.c, opt.d, opt.grid, opt.tol);
  Json& r = cmd.Results();
  r["rows"] = rows.size();
  for (const SweepRow& row : rows) {
    if (row.balanced) {
      r["balanced_t"] = row.t;
      r["balanced_rho"] = row.rho_t;
    }
  }
  WriteCsv(to_csv(rows), opt, out);
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConvergence:
    case ErrorCode::kIo:
      return kExitInternal;
    default:
      return kExitDomain;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  Options opt;
  CLI::App app{"Passivity radius and robustness analysis for discrete-time "
               "state-space models"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol-rank", opt.tol.rank_tol, "rank tolerance");
  app.add_option("--tol-psd", opt.tol.psd_tol, "semidefiniteness tolerance");
  app.add_option("--tol-eig", opt.tol.eig_tol, "eigenvalue tolerance");
  app.add_option("--tol-circle", opt.tol.circle_tol, "unit-circle dead band");
  app.add_option("--tol-golden", opt.tol.golden_tol, "golden-section bracket");
  app.add_option("--tol-bisect", opt.tol.bisect_tau, "bisection width");
  app.add_option("--out", opt.out_path, "write the JSON report here");

  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", opt.model_path, "model JSON file")->required();
  };
  const auto add_x = [&](CLI::App* sub) {
    sub->add_option_function<double>(
        "--x", [&](const double& v) { opt.x_scale = v; },
        "use X = value * I as certificate");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "minimality, stability, passivity");
  add_model(analyze);
  CLI::App* normalize_cmd = app.add_subcommand("normalize", "normalized realization");
  add_model(normalize_cmd);
  add_x(normalize_cmd);
  normalize_cmd->add_option("--model-out", opt.model_out_path, "write the normalized model");
  CLI::App* radius = app.add_subcommand("radius", "X-passivity radius");
  add_model(radius);
  add_x(radius);
  CLI::App* xi = app.add_subcommand("xi", "supremum of the LMI shift");
  add_model(xi);
  xi->add_option("--tau", opt.tau, "bracket width");
  CLI::App* passify = app.add_subcommand("passify", "distance to passivity");
  add_model(passify);
  passify->add_option("--tau", opt.tau, "bracket width");
  passify->add_option("--norm", opt.norm, "2 or fro")
      ->check(CLI::IsMember({"2", "fro"}));
  CLI::App* stability = app.add_subcommand("stability", "distance to stability of A");
  add_model(stability);
  CLI::App* experiment = app.add_subcommand("experiment", "reproduce experiments");
  experiment->require_subcommand(1);
  CLI::App* ensemble = experiment->add_subcommand("ensemble", "random ensemble ratios");
  ensemble->add_option("--count", opt.count);
  ensemble->add_option("--n", opt.n);
  ensemble->add_option("--m", opt.m);
  ensemble->add_option("--seed", opt.seed);
  ensemble->add_option("--margin", opt.margin);
  ensemble->add_option("--csv", opt.csv_path, "CSV output path (default stdout)");
  CLI::App* scalar = experiment->add_subcommand("scalar", "scalar t sweep");
  scalar->add_option("--a", opt.a);
  scalar->add_option("--b", opt.b);
  scalar->add_option("--c", opt.c);
  scalar->add_option("--d", opt.d);
  scalar->add_option("--grid", opt.grid);
  scalar->add_option("--csv", opt.csv_path, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    opt.tol.Validate();
    CLI::App* chosen = app.get_subcommands().front();
    std::string name = chosen->get_name();
    if (chosen == experiment) {
      name += " " + experiment->get_subcommands().front()->get_name();
    }
    Command cmd(name, opt, args);
    std::ostringstream csv;
    if (chosen == analyze) Analyze(cmd, opt);
    if (chosen == normalize_cmd) Normalize(cmd, opt);
    if (chosen == radius) Radius(cmd, opt);
    if (chosen == xi) Xi(cmd, opt);
    if (chosen == passify) Passify(cmd, opt);
    if (chosen == stability) Stability(cmd, opt);
    if (chosen == experiment) {
      if (ensemble->parsed()) Ensemble(cmd, opt, csv);
      if (scalar->parsed()) Scalar(cmd, opt, csv);
    }
    const std::string report = cmd.Report().dump(2) + "\n";
    if (!opt.out_path.empty()) {
      std::ofstream f(opt.out_path, std::ios::binary);
      if (!f || !(f << report)) {
        throw PassivityError(ErrorCode::kIo, "cannot write " + opt.out_path);
      }
      out << csv.str();
    } else if (chosen == experiment && opt.csv_path.empty()) {
      out << csv.str();
      err << report;
    } else {
      out << report;
    }
    return kExitOk;
  } catch (const PassivityError& e) {
    err << "error [" << ToString(e.code()) << "]: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace passivity
