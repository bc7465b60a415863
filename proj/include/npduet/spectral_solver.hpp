#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "npduet/geometry.hpp"
#include "npduet/harmonic_data.hpp"
#include "npduet/np_spectrum.hpp"
#include "npduet/numeric.hpp"

namespace npduet {

/// w1(xi) = sum a1[n] xi^n / (4 l1 l2 - rho^{2n}) on |xi| <= R1,
/// w2(xi) = sum conj(a2[n]) xi^{-n} / (4 l1 l2 - rho^{2n}) on |xi| >= R2.
/// deriv in {0,1,2} selects the term-wise derivative.
Complex series_w(const HarmonicPair& hp, double lambda1, double lambda2, int side, Complex xi,
                 int deriv = 0);

/// Functional forms w1(xi) = sum_l h1(rho^{2l} xi)/(4 l1 l2)^{l+1} and
/// w2(xi) = sum_l conj(h2(conj(rho^{-2l} xi)))/(4 l1 l2)^{l+1}, summed to
/// tolerance; cross-check evaluators for the coefficient form.
Complex series_w_functional(const DiskPair& g, double lambda1, double lambda2, int side,
                            const std::function<Complex(Complex)>& h, Complex xi, double tol = 1e-14);

/// Per-zone coefficient series of V = A1 + A2: the analytic part P(zeta) and
/// the anti-analytic part Q evaluated at conj(zeta). Built once per solve.
class ZoneSeries {
public:
  ZoneSeries() = default;
  ZoneSeries(const HarmonicPair& hp, double lambda1, double lambda2);

  struct Eval {
    Zone zone = Zone::annulus;
    Complex P, dP, ddP;    // analytic part and zeta-derivatives
    Complex Q, dQ, ddQ;    // anti-analytic part and omega-derivatives (omega = conj zeta)
    Complex value() const { return P + Q; }
  };
  Eval evaluate(Complex zeta, int order) const;

  int truncation() const { return N_; }
  const DiskPair& geometry() const { return g_; }

  /// Largest remaining term bound (order-2 weighted); used by the adequacy check.
  double tail_estimate() const { return tail_; }

private:
  DiskPair g_;
  int N_ = 0;
  double tail_ = 0;
  std::vector<Complex> p1_, pa_, qa_, q3_;
};

/// A1(zeta) + A2(zeta) split into analytic / anti-analytic parts.
struct PotentialParts {
  Complex analytic;
  Complex anti_analytic;
  Zone zone;
};
PotentialParts potential_A(const DiskPair& g, double lambda1, double lambda2, const HarmonicPair& hp,
                           Complex zeta);

struct SolverOptions {
  int nmax = 256;         // initial truncation, auto-escalated
  double tol = 1e-10;     // series tail tolerance
  int nmax_cap = 1 << 21;
  int flux_samples = 512; // angular samples for divergence-source data
  // Abscissa on the positive real axis where u - F is pinned to zero;
  // infinity selects the exact limit (the image angle zeta = 1).
  double far_anchor = std::numeric_limits<double>::infinity();
};

struct EvalResult {
  double u = 0;
  double ux = 0, uy = 0;
  double uxx = 0, uxy = 0, uyy = 0;
};

/// Evaluable solution u = w1 V1 + w2 V2 + F0 + Re V(T z) + const, with the
/// constant anchored so u - F -> 0 along the positive real axis at infinity.
class FieldSolution {
public:
  EvalResult evaluate(Complex x, int order) const;

  const DiskPair& geometry() const { return g; }
  const HarmonicPair& harmonic_pair() const { return hp; }
  const ModeCoefficients& modes() const { return mc; }
  const ZoneSeries& zone_series() const { return zs; }
  double additive_constant() const { return u_const; }
  double corrector_weight(int side) const { return side == 1 ? w1 : w2; }

  DiskPair g;
  double k1 = 1, k2 = 1;
  double lambda1 = 0, lambda2 = 0;
  HarmonicPair hp;
  ModeCoefficients mc;
  ZoneSeries zs;
  std::function<Jet2(Complex)> background;  // F0 jet (weighted Newtonian potential or Re chi)
  double u_const = 0;
  double w1 = 0, w2 = 0;
  std::shared_ptr<const Corrector> corr1, corr2;
};

FieldSolution solve_field(const DiskPair& g, double k1, double k2, const SourceSpec& src,
                          const SolverOptions& opt = {});

}  // namespace npduet
