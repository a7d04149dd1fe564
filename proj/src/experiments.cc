#include "passivity/experiments.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "passivity/kyp.h"
#include "passivity/radius.h"

namespace passivity {

namespace {

constexpr int kMaxRedraws = 5;

StateSpaceModel DrawModel(int n, int m, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix s(n + m, n + m);
  for (int j = 0; j < n + m; ++j) {
    for (int i = 0; i < n + m; ++i) s(i, j) = normal(rng);
  }
  s.topRows(n) *= (1.0 - margin) / norm2(s.topRows(n));
  StateSpaceModel model = StateSpaceModel::FromSystemMatrix(s, n, m);
  const HermitianMatrix eye = HermitianMatrix::Identity(n);
  const auto lam = [&](double delta) {
    StateSpaceModel shifted = model;
    shifted.D += delta * Matrix::Identity(m, m);
    return lambda_min(build_W(eye, shifted));
  };
  // λ_min W is nondecreasing in δ; bracket, then bisect to the smallest δ.
  double lo = 0.0;
  double hi = 0.0;
  if (lam(0.0) < margin) {
    hi = 0.01;
    while (lam(hi) < margin) {
      lo = hi;
      hi *= 2.0;
    }
    for (int k = 0; k < 60 && hi - lo > 1e-12 * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      (lam(mid) >= margin ? hi : lo) = mid;
    }
  }
  model.D += hi * Matrix::Identity(m, m);
  return model;
}

RatioSummary Summarize(std::vector<double> values) {
  RatioSummary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  const std::size_t k = values.size() / 2;
  s.median = values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
  return s;
}

double LamDs(const StateSpaceModel& model) {
  const HermitianMatrix wt =
      build_Wtilde(HermitianMatrix::Identity(model.n()), model);
  return lambda_min(ScaleDs(wt, model.n(), model.m()));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

NormalizedRealization random_passive_system(int n, int m, std::uint64_t seed,
                                            double margin,
                                            const Tolerances& tol) {
  if (n < 1 || m < 1) {
    throw PassivityError(ErrorCode::kInput, "need n, m >= 1");
  }
  if (!(margin > 0.0 && margin < 1.0)) {
    throw PassivityError(ErrorCode::kInput, "margin must lie in (0, 1)",
                         margin);
  }
  std::uint64_t draw_seed = seed;
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    StateSpaceModel model = DrawModel(n, m, draw_seed, margin);
    if (validate_minimal(model, tol).minimal()) {
      return {model, Matrix::Identity(n, n), HermitianMatrix::Identity(n)};
    }
    draw_seed = derive_seed(seed, attempt);
  }
  throw PassivityError(ErrorCode::kMinimality,
                       "could not draw a minimal system");
}

double radius_to_digits(const StateSpaceModel& model, int digits,
                        const Tolerances& tol) {
  Tolerances t = tol;
  t.golden_tol = 1e-4;
  const double agree = 0.5 * std::pow(10.0, -digits);
  const HermitianMatrix eye = HermitianMatrix::Identity(model.n());
  double prev = x_passivity_radius(model, eye, t).rho;
  while (t.golden_tol > 1e-14) {
    t.golden_tol *= 0.5;
    const double cur = x_passivity_radius(model, eye, t).rho;
    if (std::abs(cur - prev) <= agree * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

EnsembleResult ensemble_experiment(int count, int n, int m, std::uint64_t seed,
                                 int rho_digits, double margin,
                                 const Tolerances& tol) {
  if (count < 1) {
    throw PassivityError(ErrorCode::kInput, "count must be >= 1");
  }
  EnsembleResult out;
  std::vector<double> r_w, r_wt, r_ds, r_est;
  for (int i = 0; i < count; ++i) {
    try {
      const NormalizedRealization mt =
          random_passive_system(n, m, derive_seed(seed, i), margin, tol);
      const StateSpaceModel& model = mt.model;
      const HermitianMatrix eye = HermitianMatrix::Identity(n);
      EnsembleRow row;
      row.index = i;
      row.rho = radius_to_digits(model, rho_digits, tol);
      row.lamW = lambda_min(build_W(eye, model));
      row.lamWt = lambda_min(build_Wtilde(eye, model));
      row.lamDs = LamDs(model);
      row.est = gamma_mean_estimate(mt, tol);
      row.ratio_lamW = row.lamW / row.rho;
      row.ratio_lamWt = row.lamWt / row.rho;
      row.ratio_lamDs = row.lamDs / row.rho;
      row.ratio_est = 1.0 / (row.est * row.rho);
      r_w.push_back(row.ratio_lamW);
      r_wt.push_back(row.ratio_lamWt);
      r_ds.push_back(row.ratio_lamDs);
      r_est.push_back(row.ratio_est);
      out.rows.push_back(row);
    } catch (const PassivityError& e) {
      out.skipped.push_back("sample " + std::to_string(i) + ": " +
                            ToString(e.code()) + ": " + e.what());
    }
  }
  out.lamW = Summarize(r_w);
  out.lamWt = Summarize(r_wt);
  out.lamDs = Summarize(r_ds);
  out.est = Summarize(r_est);
  return out;
}

std::vector<SweepRow> scalar_sweep(double a, double b, double c, double d,
                                   int grid, const Tolerances& tol) {
  if (grid < 1) {
    throw PassivityError(ErrorCode::kInput, "grid must be >= 1");
  }
  const double beta = (1.0 - a * a) * d + a * b * c;
  const double bc = b * c;
  if (!(std::abs(a) < 1.0) || bc == 0.0 || !(beta > std::abs(bc))) {
    throw PassivityError(
        ErrorCode::kDomain,
        "scalar model is not strictly passive: need |a| < 1, bc != 0 and "
        "(1-a^2)d + abc > |bc|",
        beta);
  }
  const double disc = std::sqrt(beta * beta - bc * bc);
  const double x_lo = (beta - disc) / (b * b);
  const double x_hi = (beta + disc) / (b * b);
  const double t_lo = std::sqrt(x_lo);
  const double t_hi = std::sqrt(x_hi);
  std::vector<SweepRow> rows;
  rows.reserve(grid);
  std::size_t balanced = 0;
  for (int k = 0; k < grid; ++k) {
    SweepRow row;
    row.t = t_lo + (k + 1) * (t_hi - t_lo) / (grid + 1);
    row.b_t = b * row.t;
    row.c_t = c / row.t;
    const StateSpaceModel model = StateSpaceModel::Scalar(a, row.b_t, row.c_t, d);
    const HermitianMatrix one = HermitianMatrix::Identity(1);
    row.rho_t = x_passivity_radius(model, one, tol).rho;
    row.lamW_t = lambda_min(build_W(one, model));
    row.lamDs_t = LamDs(model);
    if (std::abs(row.b_t - row.c_t) <
        std::abs(rows.empty() ? INFINITY
                              : rows[balanced].b_t - rows[balanced].c_t)) {
      balanced = rows.size();
    }
    rows.push_back(row);
  }
  rows[balanced].balanced = true;
  return rows;
}

CsvTable to_csv(const std::vector<EnsembleRow>& rows) {
  CsvTable t;
  t.header = {"index", "rho", "lamW", "lamWt", "lamDs", "est",
              "ratio_lamW", "ratio_lamWt", "ratio_lamDs", "ratio_est"};
  for (const EnsembleRow& r : rows) {
    t.rows.push_back({static_cast<double>(r.index), r.rho, r.lamW, r.lamWt,
                      r.lamDs, r.est, r.ratio_lamW, r.ratio_lamWt,
                      r.ratio_lamDs, r.ratio_est});
  }
  return t;
}

CsvTable to_csv(const std::vector<SweepRow>& rows) {
  CsvTable t;
  t.header = {"t", "b_t", "c_t", "rho_t", "lamW_t", "lamDs_t", "balanced"};
  for (const SweepRow& r : rows) {
    t.rows.push_back({r.t, r.b_t, r.c_t, r.rho_t, r.lamW_t, r.lamDs_t,
                      r.balanced ? 1.0 : 0.0});
  }
  return t;
}

}  // namespace passivity
