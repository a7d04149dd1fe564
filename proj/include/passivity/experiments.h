#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "passivity/normalization.h"

namespace passivity {

/// splitmix64 step, used to derive independent per-sample seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Random normalized strictly passive realization: a Gaussian system matrix
/// with ‖[A B]‖₂ = 1 − margin and D shifted by δI until λ_min W(I, ℳ) ≥
/// margin. Non-minimal draws are redrawn with derived seeds (up to 5 times).
NormalizedRealization random_passive_system(int n, int m, std::uint64_t seed,
                                            double margin = 0.1,
                                            const Tolerances& tol = {});

struct EnsembleRow {
  int index = 0;
  double rho = 0.0;
  double lamW = 0.0;
  double lamWt = 0.0;
  double lamDs = 0.0;
  double est = 0.0;  // g(γ_gm) in the normalized coordinates, ≈ 1/ρ
  double ratio_lamW = 0.0;
  double ratio_lamWt = 0.0;
  double ratio_lamDs = 0.0;
  double ratio_est = 0.0;  // (1/est)/ρ
};

struct RatioSummary {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct EnsembleResult {
  std::vector<EnsembleRow> rows;
  std::vector<std::string> skipped;  // one log entry per skipped sample
  RatioSummary lamW;
  RatioSummary lamWt;
  RatioSummary lamDs;
  RatioSummary est;
};

/// ρ_ℳ(I) with golden_tol halved until two successive values agree to
/// `digits` significant digits.
double radius_to_digits(const StateSpaceModel& model, int digits,
                        const Tolerances& tol = {});

EnsembleResult ensemble_experiment(int count, int n, int m, std::uint64_t seed,
                                 int rho_digits = 4, double margin = 0.1,
                                 const Tolerances& tol = {});

struct SweepRow {
  double t = 0.0;
  double b_t = 0.0;
  double c_t = 0.0;
  double rho_t = 0.0;
  double lamW_t = 0.0;
  double lamDs_t = 0.0;
  bool balanced = false;  // grid point with the smallest |b_t − c_t|
};

/// ρ, λ_min W(I,ℳ_t) and λ_min D_s W̃(I,ℳ_t) D_s for ℳ_t = {a, bt, c/t, d} on
/// `grid` interior points of (√x₋, √x₊).
std::vector<SweepRow> scalar_sweep(double a, double b, double c, double d,
                                   int grid, const Tolerances& tol = {});

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable to_csv(const std::vector<EnsembleRow>& rows);
CsvTable to_csv(const std::vector<SweepRow>& rows);

}  // namespace passivity
