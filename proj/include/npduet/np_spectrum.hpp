#pragma once

#include <utility>
#include <vector>

#include "npduet/geometry.hpp"
#include "npduet/numeric.hpp"

namespace npduet {

enum class Parity { plus, minus };

inline int parity_sign(Parity p) { return p == Parity::plus ? +1 : -1; }

/// lambda = (k+1)/(2(k-1)); k = inf -> 1/2, k = 0 -> -1/2, k = 1 rejected.
double lambda_from_k(double k);

/// One angular mode of the explicit NP spectrum. The two-disk value is the
/// canonical one (the solver operates on dD); the concentric value is its
/// negative.
struct SpectralMode {
  int n = 1;
  Parity parity = Parity::plus;
  double rho = 0;

  double eigenvalue_two_disks() const {
    return -0.5 * parity_sign(parity) * std::pow(rho, std::abs(n));
  }
  double eigenvalue_concentric() const { return -eigenvalue_two_disks(); }
};

/// f^{n,+-}(theta) = (e^{in theta}/R1, +- e^{in theta}/R2) on the concentric circles.
std::pair<Complex, Complex> eigenfunction_concentric(const DiskPair& g, int n, Parity parity, double theta);

/// Single layer potential of f^{n,+-} on the concentric circles, by the
/// three-zone closed form (continuous across both circles); n < 0 via the
/// conjugation rule.
Complex single_layer_mode(const DiskPair& g, int n, Parity parity, Complex zeta);

/// U^-1: density on dD from its image on the concentric circles,
/// phi(z) = (beta/|z|^2) phi*(T(z)).
Complex pullback_density(const DiskPair& g, Complex fstar_value, Complex z);

/// U: phi*(T(z)) = (|z|^2/beta) phi(z).
Complex pushforward_density(const DiskPair& g, Complex phi_value, Complex z);

/// ||phi^{n,+-}||^2 = ||f^{n,+-}||^2 = (2 pi/|n|)(1 +- rho^{|n|}).
double mode_norm_sq(const DiskPair& g, int n, Parity parity);

/// Per-mode data C_{n,+-} and solved densities a_{n,+-}, n = 1..N.
struct ModeCoefficients {
  int N = 0;
  double lambda1 = 0, lambda2 = 0, rho = 0;
  std::vector<Complex> C_plus, C_minus;
  std::vector<Complex> a_plus, a_minus;
};

/// Solves (Lambda - K*) per mode: for each n the symmetric 2x2 system
///   (lam1 + rho^n/2) a+ + (lam1 - rho^n/2) a- = C+ + C-
///   (lam2 + rho^n/2) a+ - (lam2 - rho^n/2) a- = C+ - C-
/// whose inverse is
///   a+ = 2[(lam1+lam2-rho^n) C+ - (lam1-lam2) C-] / (4 lam1 lam2 - rho^{2n})
///   a- = 2[-(lam1-lam2) C+ + (lam1+lam2+rho^n) C-] / (4 lam1 lam2 - rho^{2n}).
ModeCoefficients solve_modes(double lambda1, double lambda2, double rho,
                             const std::vector<Complex>& C_plus, const std::vector<Complex>& C_minus);

/// Guard threshold on |4 lam1 lam2 - rho^{2n}|.
inline constexpr double kResonanceGuard = 1e-12;

}  // namespace npduet
