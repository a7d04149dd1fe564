// Acceptance checks. Each prints one PASS/FAIL line; the exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "passivity/experiments.h"
#include "passivity/kyp.h"
#include "passivity/normalization.h"
#include "passivity/passify.h"
#include "passivity/radius.h"
#include "passivity/riccati.h"
#include "passivity/xi.h"

namespace passivity {
namespace {

// Frozen oracle values.
// M₀ = {0.5, 1, 1, 1}: det W(x) = −x² + 2.5x − 1 has roots 0.5 and 2.
constexpr double kM0XMinus = 0.5;
constexpr double kM0XPlus = 2.0;
// M₁ = {0.5, 1, 0.5, 1}: X₋ = (2 − √3)/2, A_F = 2 − √3.
const double kM1XMinus = (2.0 - std::sqrt(3.0)) / 2.0;
const double kM1AF = 2.0 - std::sqrt(3.0);
// M_np = {0.5, 1, 1, −0.2}: Ξ is the root in (0, 1) of
// ((1+ξ)² − 1/4)(ξ − 0.2) + 1/2 − (1 + ξ), found with mpmath at 30 digits.
constexpr double kMnpXi = 0.6624404748406687;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Check = std::function<Outcome()>;

double Elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Fmt(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

double Scalar(const Matrix& m) { return m(0, 0).real(); }

// A strictly passive model in general coordinates together with an interior
// certificate: a normalized random system moved by a random state transform.
struct Sample {
  StateSpaceModel model;
  HermitianMatrix X;
};

Sample RandomSample(std::uint64_t index, int n, int m) {
  const NormalizedRealization base =
      random_passive_system(n, m, derive_seed(2024, index));
  std::mt19937_64 rng(derive_seed(77, index));
  std::normal_distribution<double> g;
  Matrix s(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) s(i, j) = Complex(g(rng), g(rng)) * 0.3;
  }
  s += Matrix::Identity(n, n);
  const Matrix s_inv = Eigen::PartialPivLU<Matrix>(s).inverse();
  return {transform_model(base.model, s), HermitianMatrix(s_inv.adjoint() * s_inv)};
}

int Dim(std::uint64_t index, int max) { return 1 + static_cast<int>(index % max); }

std::vector<Sample> Ensemble(int count) {
  std::vector<Sample> out;
  for (int k = 0; k < count; ++k) out.push_back(RandomSample(k, Dim(k, 6), Dim(k / 6, 3)));
  return out;
}

Outcome Criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const StateSpaceModel m = StateSpaceModel::Scalar(0.5, 1, 1, 1);
  const ExtremalSolutions e = extremal_solutions(m);
  const double xm = Scalar(e.minus.X.matrix());
  const double xp = Scalar(e.plus.X.matrix());
  const double det_m = build_W(e.minus.X, m).matrix().determinant().real();
  const double det_p = build_W(e.plus.X, m).matrix().determinant().real();
  const double t = Elapsed(start);
  Outcome o;
  o.pass = std::abs(xm - kM0XMinus) <= 1e-8 && std::abs(xp - kM0XPlus) <= 1e-8 &&
           std::abs(det_m) <= 1e-10 && std::abs(det_p) <= 1e-10 && t < 1.0;
  o.detail = Fmt("X- = %.12g, X+ = %.12g", xm, xp) +
             Fmt(", det W = %.2e / %.2e, %.3f s", det_m, det_p, t);
  return o;
}

Outcome Criterion2() {
  const StateSpaceModel m = StateSpaceModel::Scalar(0.5, 1, 0.5, 1);
  const RiccatiResult r = stabilizing_solution(m);
  const double x = Scalar(r.X.matrix());
  const double af = Scalar(*r.A_F);
  const double res = *r.residual_norm;
  std::vector<double> eig;
  const GeneralizedEigenvalues ev = pencil_eigenvalues(build_symplectic(m));
  for (int i = 0; i < ev.size(); ++i) {
    if (!ev.IsInfinite(i, 1e-12)) eig.push_back(std::abs(ev.Value(i)));
  }
  std::sort(eig.begin(), eig.end());
  Outcome o;
  o.pass = std::abs(x - kM1XMinus) <= 1e-10 && res <= 1e-12 &&
           std::abs(af - kM1AF) <= 1e-10 && std::abs(af) < 1.0 && eig.size() == 2 &&
           std::abs(eig[0] - kM1AF) <= 1e-10 && std::abs(eig[1] - 1.0 / kM1AF) <= 1e-9;
  o.detail = Fmt("X- = %.14g, residual = %.2e, A_F = %.14g", x, res, af);
  if (eig.size() == 2) o.detail += Fmt(", pencil {%.12g, %.12g}", eig[0], eig[1]);
  return o;
}

Outcome Criterion3() {
  StateSpaceModel m;
  m.A = Matrix::Zero(1, 1);
  m.B = Matrix::Zero(1, 1);
  m.C = Matrix::Zero(1, 1);
  m.D = Matrix::Identity(1, 1);
  const HermitianMatrix x = HermitianMatrix::Identity(1);
  const RadiusReport r = x_passivity_radius(m, x);
  const Matrix d = r.delta.Assembled();
  const int rank = numerical_rank(d, 1e-8);
  const double det = build_What(x, r.delta.ApplyTo(m)).matrix().determinant().real();
  Outcome o;
  o.pass = std::abs(r.rho - 1.0) <= 1e-8 && rank == 1 &&
           std::abs(norm2(d) - 1.0) <= 1e-8 && std::abs(det) <= 1e-8;
  o.detail = Fmt("rho = %.12g, |Delta| = %.12g, det What = %.2e", r.rho, norm2(d), det);
  return o;
}

// Criteria 4 and 5 share the ensemble and the radius computations.
std::vector<RadiusReport> g_ensemble_reports;
double g_ensemble_seconds = 0.0;

const std::vector<Sample>& RadiusEnsemble() {
  static const std::vector<Sample> samples = Ensemble(50);
  return samples;
}

void ComputeEnsembleRadii() {
  if (!g_ensemble_reports.empty()) return;
  const auto start = std::chrono::steady_clock::now();
  for (const Sample& s : RadiusEnsemble()) {
    g_ensemble_reports.push_back(x_passivity_radius(s.model, s.X));
  }
  g_ensemble_seconds = Elapsed(start);
}

Outcome Criterion4() {
  const auto start = std::chrono::steady_clock::now();
  ComputeEnsembleRadii();
  Outcome o;
  double worst_rel = 0.0;
  double worst_inner = INFINITY;
  for (size_t k = 0; k < RadiusEnsemble().size(); ++k) {
    const Sample& s = RadiusEnsemble()[k];
    const Perturbation& d = g_ensemble_reports[k].delta;
    const HermitianMatrix w = build_What(s.X, d.ApplyTo(s.model));
    const double rel = std::abs(lambda_min(w)) / norm2(w.matrix());
    Perturbation scaled{0.9 * d.deltaA, 0.9 * d.deltaB, 0.9 * d.deltaC, 0.9 * d.deltaD};
    const double inner = lambda_min(build_What(s.X, scaled.ApplyTo(s.model)));
    worst_rel = std::max(worst_rel, rel);
    worst_inner = std::min(worst_inner, inner);
    if (rel > 1e-6 || !(inner > 0.0)) o.pass = false;
  }
  const double t = Elapsed(start);
  o.pass = o.pass && t < 60.0;
  o.detail = Fmt("max |lmin|/|What| = %.2e, min lmin at 0.9 Delta = %.3e, %.2f s",
                 worst_rel, worst_inner, t);
  return o;
}

Outcome Criterion5() {
  ComputeEnsembleRadii();
  Outcome o;
  int ok = 0;
  for (const RadiusReport& r : g_ensemble_reports) {
    const double ab = r.gamma.search.alpha * r.gamma.search.beta;
    const double overlap = std::abs(r.sv_vhat.dot(r.sv_uhat));
    const bool chain = 1.0 / (2.0 * ab) - 1e-9 <= r.rho &&
                       r.rho <= 1.0 / ((1.0 + overlap) * ab) + 1e-9 &&
                       r.scaled_eig_bound <= r.rho + 1e-9;
    ok += chain;
  }
  o.pass = ok == static_cast<int>(g_ensemble_reports.size());
  o.detail = Fmt("%.0f/%.0f systems satisfy the bound chain", ok,
                 g_ensemble_reports.size());
  return o;
}

// Random interior certificate: a convex combination of the extremal solutions
// of ℳ_ξ for a few ξ in (0, Ξ). Each of them has ξ*(X) ≥ ξ > 0. The midpoint
// of X₋ and X₊ of ℳ itself is not used because it is singular for n > m.
HermitianMatrix RandomInterior(const StateSpaceModel& m, double xi_big,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  HermitianMatrix x(Matrix::Zero(m.n(), m.n()));
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    const ExtremalSolutions e =
        extremal_solutions(shift_model(m, unif(rng) * xi_big).model);
    const double wm = unif(rng);
    const double wp = unif(rng);
    x = x + e.minus.X * wm + e.plus.X * wp;
    total += wm + wp;
  }
  return x * (1.0 / total);
}

Outcome Criterion6() {
  Outcome o;
  double worst = 0.0;
  double smallest = INFINITY;
  std::mt19937_64 rng(6);
  const std::vector<Sample> samples = Ensemble(50);
  for (size_t k = 0; k < samples.size(); ++k) {
    const Sample& s = samples[k];
    // Alternate between the sample's own certificate and a random one.
    const HermitianMatrix x =
        k % 2 == 0 ? s.X
                   : RandomInterior(s.model, xi_sup_bisection(s.model, 1e-8).xi_lo, rng);
    const double formula = xi_star(s.model, x);
    const double diff = std::abs(formula - xi_star_bisection(s.model, x));
    worst = std::max(worst, diff);
    smallest = std::min(smallest, formula);
    if (diff > 1e-7 || !(formula > 0.0)) o.pass = false;
  }
  double boundary = 0.0;
  for (size_t k = 0; k < 5; ++k) {
    const ExtremalSolutions e = extremal_solutions(samples[k].model);
    boundary = std::max({boundary, xi_star(samples[k].model, e.minus.X),
                         xi_star(samples[k].model, e.plus.X)});
  }
  o.pass = o.pass && boundary == 0.0;
  o.detail = Fmt("max |formula - bisection| = %.2e, min xi* = %.3e, boundary xi* = %g",
                 worst, smallest, boundary);
  return o;
}

Outcome Criterion7() {
  constexpr double kTau = 1e-8;
  Outcome o;
  double worst_gap = 0.0;
  double worst_excess = -INFINITY;
  double best_ratio = 0.0;
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const Sample s = RandomSample(1000 + k, Dim(k, 6), Dim(k / 6, 3));
    const XiResult a = xi_sup_bisection(s.model, kTau);
    const XiResult b = xi_sup_eigenvalue(s.model, kTau);
    const double gap = std::abs(a.xi_hi - b.xi_hi);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 2 * kTau) o.pass = false;
    for (int j = 0; j < 10; ++j) {
      const double star = xi_star(s.model, RandomInterior(s.model, a.xi_lo, rng));
      worst_excess = std::max(worst_excess, star - a.xi_hi);
      best_ratio = std::max(best_ratio, star / a.xi_hi);
      if (star > a.xi_hi + 1e-6 || !(star > 0.0)) o.pass = false;
    }
  }
  o.detail = Fmt("max procedure gap = %.2e, max xi*(X) - Xi = %.2e, max xi*(X)/Xi = %.3f",
                 worst_gap, worst_excess, best_ratio);
  return o;
}

Outcome Criterion8() {
  Outcome o;
  double worst_lam = INFINITY;
  double worst_rho = INFINITY;
  std::vector<StateSpaceModel> models{StateSpaceModel::Scalar(0.5, 1, 1, 1)};
  for (int k = 0; k < 10; ++k) {
    models.push_back(RandomSample(2000 + k, Dim(k, 6), Dim(k / 6, 3)).model);
  }
  for (const StateSpaceModel& m : models) {
    const XiResult xi = xi_sup_bisection(m, 1e-9);
    const RiccatiResult cert = xi_certificate(m, xi);
    const NormalizedRealization mt = normalize(m, classify_certificate(cert.X, m));
    const HermitianMatrix id = HermitianMatrix::Identity(m.n());
    const double lam = lambda_min(ScaleDs(build_Wtilde(id, mt.model), m.n(), m.m()));
    const double rho = x_passivity_radius(mt.model, id).rho;
    worst_lam = std::min(worst_lam, lam - xi.xi_lo);
    worst_rho = std::min(worst_rho, rho - xi.xi_lo);
    if (lam < xi.xi_lo - 1e-6 || rho < xi.xi_lo - 1e-6) o.pass = false;
  }
  o.detail = Fmt("min lambda - Xi = %.2e, min rho - Xi = %.2e", worst_lam, worst_rho);
  return o;
}

Outcome Criterion9() {
  const EnsembleResult res = ensemble_experiment(50, 5, 2, 1);
  Outcome o;
  o.pass = res.rows.size() == 50;
  double worst_est = 0.0;
  std::vector<double> dev;
  for (const EnsembleRow& r : res.rows) {
    const bool ok = r.ratio_lamW >= 0.5 && r.ratio_lamW <= 2.0 &&
                    r.ratio_lamWt >= 0.5 && r.ratio_lamWt <= 2.0 &&
                    r.ratio_lamDs >= 0.5 && r.ratio_lamDs <= 1.0;
    if (!ok) o.pass = false;
    dev.push_back(std::abs(r.rho * r.est - 1.0));
    worst_est = std::max(worst_est, dev.back());
  }
  std::sort(dev.begin(), dev.end());
  const double median = dev.empty() ? INFINITY : dev[dev.size() / 2];
  o.pass = o.pass && median <= 0.05;
  o.detail = Fmt("W [%.3f, %.3f]", res.lamW.min, res.lamW.max) +
             Fmt(" Wt [%.3f, %.3f]", res.lamWt.min, res.lamWt.max) +
             Fmt(" DsWtDs [%.3f, %.3f]", res.lamDs.min, res.lamDs.max) +
             Fmt(" median |rho est - 1| = %.2e", median);
  return o;
}

Outcome Criterion10() {
  const std::vector<SweepRow> rows = scalar_sweep(0.5, 1, 1, 1, 41);
  Outcome o;
  size_t argmax = 0;
  size_t balanced = 0;
  for (size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].rho_t > rows[argmax].rho_t) argmax = k;
    if (rows[k].balanced) balanced = k;
  }
  const SweepRow& b = rows[balanced];
  const double gap = std::abs(b.lamDs_t - b.rho_t) / b.rho_t;
  o.pass = (argmax > balanced ? argmax - balanced : balanced - argmax) <= 1 &&
           gap <= 0.02;
  o.detail = Fmt("argmax t = %.4f, balanced t = %.4f, relative gap = %.2e",
                 rows[argmax].t, b.t, gap);
  return o;
}

Outcome Criterion11() {
  constexpr double kTau = 1e-8;
  const StateSpaceModel m = StateSpaceModel::Scalar(0.5, 1, 1, -0.2);
  const DistanceReport two = distance_to_passivity(m, kTau, {});
  RefineOptions fro_opt;
  fro_opt.norm = PerturbationNorm::kFrobenius;
  const DistanceReport fro = distance_to_passivity(m, kTau, fro_opt);
  const bool above = shifted_back_passive(m, two.xi_big + kTau);
  const bool below = shifted_back_passive(m, two.xi_big - kTau);
  Outcome o;
  o.pass = std::abs(two.xi_big - kMnpXi) <= 1e-6 && above && !below &&
           two.sigma2 <= two.constrained_sigma2 + 1e-12 &&
           fro.sigma_frob <= fro.constrained_sigma_frob + 1e-12;
  o.detail = Fmt("Xi = %.12g, |Delta|_2 %.6g -> %.6g", two.xi_big,
                 two.constrained_sigma2, two.sigma2) +
             Fmt(", |Delta|_F %.6g -> %.6g", fro.constrained_sigma_frob, fro.sigma_frob);
  return o;
}

Outcome Criterion12() {
  Outcome o;
  double worst_rel = 0.0;
  double worst_slack = INFINITY;
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    const Sample s = RandomSample(3000 + k, Dim(k, 6), Dim(k / 6, 3));
    std::vector<Vector> inputs;
    for (int step = 0; step < 20; ++step) {
      Vector u(s.model.m());
      for (int i = 0; i < u.size(); ++i) u(i) = Complex(g(rng), g(rng));
      inputs.push_back(u);
    }
    const bool psd = lambda_min(build_W(s.X, s.model)) >= 0.0;
    for (const DissipationStep& st : simulate_dissipation(s.model, s.X, inputs)) {
      const double scale = std::max(1.0, std::abs(st.quadratic_form));
      const double rel = std::abs(st.slack - st.quadratic_form) / scale;
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-10) o.pass = false;
      if (psd) {
        worst_slack = std::min(worst_slack, st.slack);
        if (st.slack < -1e-10) o.pass = false;
      }
    }
  }
  o.detail = Fmt("max relative mismatch = %.2e, min slack = %.3e", worst_rel, worst_slack);
  return o;
}

}  // namespace
}  // namespace passivity

int main() {
  using namespace passivity;
  const std::vector<std::pair<const char*, Check>> checks{
      {"1 scalar certificate set", Criterion1},
      {"2 Riccati consistency", Criterion2},
      {"3 radius of the zero model", Criterion3},
      {"4 perturbation reaches the boundary", Criterion4},
      {"5 radius bound chain", Criterion5},
      {"6 xi* formula vs bisection", Criterion6},
      {"7 Xi procedures agree", Criterion7},
      {"8 optimal normalized realization", Criterion8},
      {"9 ensemble ratio bounds", Criterion9},
      {"10 scalar sweep", Criterion10},
      {"11 distance to passivity", Criterion11},
      {"12 dissipation identity", Criterion12},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
