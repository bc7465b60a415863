#pragma once

#include <string>
#include <vector>

#include "npduet/spectral_solver.hpp"

namespace npduet {

/// The gap probe set: 101 points on the closest-approach segment (inset
/// 1e-3 eps from each end) plus the 64 pullbacks T^-1(e^{i theta}) of the
/// unit circle, which threads the gap along Re z = -beta/2.
std::vector<Complex> gap_probes(const DiskPair& g);

/// Maximum over the probe set of |grad u| (order 1) or the Frobenius norm of
/// the Hessian (order 2).
double gap_scan(const FieldSolution& sol, int order);

struct SweepRecord {
  double eps = 0;
  double rho = 0;
  double lambda1 = 0, lambda2 = 0;
  int order = 1;
  double gap_max = 0;
  double bound_value = 0;
  double ratio = 0;      // gap_max / bound_value
  double u_sup = 0;      // sup |u| over the probe set (norm diagnostic)
  bool failed = false;
  std::string error;
};

/// Reference concentration bound for the detected contrast regime:
/// same-sign ((k1-1)(k2-1) > 0): (4 l1 l2 - 1 + r* sqrt(eps))^{-n};
/// opposite-sign: (4 |l1 l2| - 1 + r* sqrt(eps))^{-n+1}.
double concentration_bound(const DiskPair& g, double k1, double k2, int order);

/// One record per eps; per-eps failures are recorded, not fatal.
std::vector<SweepRecord> sweep(double r1, double r2, double k1, double k2, const SourceSpec& src,
                               const std::vector<double>& eps_list, int order,
                               const SolverOptions& opt = {});

/// Least-squares slope of ln(gap_max) against ln(eps).
LineFit fit_exponent(const std::vector<SweepRecord>& records);

/// gap_max / bound_value per record, regime-checked against sign((k1-1)(k2-1)).
std::vector<double> bound_ratio(const std::vector<SweepRecord>& records, double k1, double k2, int order);

}  // namespace npduet
