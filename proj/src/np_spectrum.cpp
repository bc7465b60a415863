#include "npduet/np_spectrum.hpp"

#include <cmath>

#include "npduet/errors.hpp"

namespace npduet {

double lambda_from_k(double k) {
  if (std::isinf(k)) return 0.5;
  if (k == 0.0) return -0.5;
  if (!(k > 0)) throw DomainError("lambda_from_k: conductivity must be >= 0");
  if (k == 1.0) throw DomainError("lambda_from_k: k = 1 is a degenerate contrast (no inclusion)");
  return (k + 1.0) / (2.0 * (k - 1.0));
}

std::pair<Complex, Complex> eigenfunction_concentric(const DiskPair& g, int n, Parity parity, double theta) {
  if (n == 0) throw DomainError("eigenfunction_concentric: n must be nonzero");
  const Complex e = std::polar(1.0, n * theta);
  return {e / g.R1, static_cast<double>(parity_sign(parity)) * e / g.R2};
}

Complex single_layer_mode(const DiskPair& g, int n, Parity parity, Complex zeta) {
  if (n == 0) throw DomainError("single_layer_mode: n must be nonzero");
  if (n < 0) return std::conj(single_layer_mode(g, -n, parity, zeta));
  const double s = parity_sign(parity);
  const double a = std::abs(zeta);
  const double nn = n;
  if (a <= g.R1) {
    return -(std::pow(g.R1, -nn) + s * std::pow(g.R2, -nn)) / (2 * nn) * std::pow(zeta, n);
  }
  if (a <= g.R2) {
    const Complex zbinv = std::pow(std::conj(zeta), -n);
    return -(std::pow(g.R1, nn) * zbinv + s * std::pow(g.R2, -nn) * std::pow(zeta, n)) / (2 * nn);
  }
  return -(std::pow(g.R1, nn) + s * std::pow(g.R2, nn)) / (2 * nn) * std::pow(std::conj(zeta), -n);
}

Complex pullback_density(const DiskPair& g, Complex fstar_value, Complex z) {
  const double a2 = std::norm(z);
  if (a2 == 0.0) throw PoleError("pullback_density: z = 0");
  return g.beta / a2 * fstar_value;
}

Complex pushforward_density(const DiskPair& g, Complex phi_value, Complex z) {
  const double a2 = std::norm(z);
  if (a2 == 0.0) throw PoleError("pushforward_density: z = 0");
  return a2 / g.beta * phi_value;
}

double mode_norm_sq(const DiskPair& g, int n, Parity parity) {
  if (n == 0) throw DomainError("mode_norm_sq: n must be nonzero");
  const double an = std::abs(n);
  return kTwoPi / an * (1.0 + parity_sign(parity) * std::pow(g.rho, an));
}

ModeCoefficients solve_modes(double lambda1, double lambda2, double rho,
                             const std::vector<Complex>& C_plus, const std::vector<Complex>& C_minus) {
  if (C_plus.size() != C_minus.size()) throw DomainError("solve_modes: coefficient lists must have equal length");
  ModeCoefficients mc;
  mc.N = static_cast<int>(C_plus.size());
  mc.lambda1 = lambda1;
  mc.lambda2 = lambda2;
  mc.rho = rho;
  mc.C_plus = C_plus;
  mc.C_minus = C_minus;
  mc.a_plus.resize(mc.N);
  mc.a_minus.resize(mc.N);
  const double lp = lambda1 + lambda2;
  const double lm = lambda1 - lambda2;
  for (int i = 0; i < mc.N; ++i) {
    const double rn = std::pow(rho, i + 1);
    const double den = 4.0 * lambda1 * lambda2 - rn * rn;
    if (std::abs(den) < kResonanceGuard)
      throw ResonanceError("solve_modes: near-resonant denominator (plasmonic regime unsupported)");
    mc.a_plus[i] = 2.0 / den * ((lp - rn) * C_plus[i] - lm * C_minus[i]);
    mc.a_minus[i] = 2.0 / den * (-lm * C_plus[i] + (lp + rn) * C_minus[i]);
  }
  return mc;
}

}  // namespace npduet
