#include "npduet/analysis.hpp"

#include <cmath>

#include "npduet/errors.hpp"

namespace npduet {

std::vector<Complex> gap_probes(const DiskPair& g) {
  std::vector<Complex> pts;
  pts.reserve(101 + 64);
  const double a = g.gap_left() + 1e-3 * g.eps;
  const double b = g.gap_right() - 1e-3 * g.eps;
  for (int i = 0; i < 101; ++i) pts.emplace_back(a + (b - a) * i / 100.0, 0.0);
  for (int k = 0; k < 64; ++k) {
    const double theta = kTwoPi * (k + 0.5) / 64.0;  // avoid theta = 0 (image of infinity)
    pts.push_back(inverse_map(g, std::polar(1.0, theta)));
  }
  return pts;
}

double gap_scan(const FieldSolution& sol, int order) {
  if (order != 1 && order != 2) throw DomainError("gap_scan: order must be 1 or 2");
  double best = 0;
  for (const Complex& x : gap_probes(sol.geometry())) {
    const EvalResult r = sol.evaluate(x, order);
    const double m = order == 1
                         ? std::hypot(r.ux, r.uy)
                         : std::sqrt(r.uxx * r.uxx + 2 * r.uxy * r.uxy + r.uyy * r.uyy);
    best = std::max(best, m);
  }
  return best;
}

double concentration_bound(const DiskPair& g, double k1, double k2, int order) {
  const double l1 = lambda_from_k(k1), l2 = lambda_from_k(k2);
  const double prod = l1 * l2;
  const double s = g.r_star * std::sqrt(g.eps);
  const bool same_sign = prod > 0;  // sign((k1-1)(k2-1)) = sign(lambda1 lambda2)
  const double base = same_sign ? 4.0 * prod - 1.0 + s : 4.0 * std::abs(prod) - 1.0 + s;
  const double expo = same_sign ? -order : -(order - 1);
  return std::pow(base, expo);
}

std::vector<SweepRecord> sweep(double r1, double r2, double k1, double k2, const SourceSpec& src,
                               const std::vector<double>& eps_list, int order, const SolverOptions& opt) {
  std::vector<SweepRecord> records;
  records.reserve(eps_list.size());
  for (double eps : eps_list) {
    SweepRecord rec;
    rec.eps = eps;
    rec.order = order;
    try {
      const DiskPair g = derive_geometry(r1, r2, eps);
      rec.rho = g.rho;
      rec.lambda1 = lambda_from_k(k1);
      rec.lambda2 = lambda_from_k(k2);
      const FieldSolution sol = solve_field(g, k1, k2, src, opt);
      rec.gap_max = gap_scan(sol, order);
      rec.bound_value = concentration_bound(g, k1, k2, order);
      rec.ratio = rec.gap_max / rec.bound_value;
      for (const Complex& x : gap_probes(g)) rec.u_sup = std::max(rec.u_sup, std::abs(sol.evaluate(x, 0).u));
    } catch (const Error& e) {
      rec.failed = true;
      rec.error = e.what();
    }
    records.push_back(std::move(rec));
  }
  return records;
}

LineFit fit_exponent(const std::vector<SweepRecord>& records) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (r.failed) continue;
    if (!(r.gap_max > 0)) throw DomainError("fit_exponent: gap_max must be positive for a log-log fit");
    x.push_back(std::log(r.eps));
    y.push_back(std::log(r.gap_max));
  }
  if (x.size() < 3) throw DomainError("fit_exponent: need at least 3 successful records");
  return fit_line(x, y);
}

std::vector<double> bound_ratio(const std::vector<SweepRecord>& records, double k1, double k2, int order) {
  const double prod = lambda_from_k(k1) * lambda_from_k(k2);
  for (const auto& r : records) {
    if (r.failed) continue;
    if ((prod > 0) != (r.lambda1 * r.lambda2 > 0))
      throw ConfigError("bound_ratio: records were produced in a different contrast regime");
    if (r.order != order) throw ConfigError("bound_ratio: records carry a different derivative order");
  }
  std::vector<double> out;
  for (const auto& r : records)
    if (!r.failed) out.push_back(r.ratio);
  return out;
}

}  // namespace npduet
