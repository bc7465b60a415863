#include "npduet/geometry.hpp"

#include <cmath>
#include <sstream>

#include "npduet/errors.hpp"

namespace npduet {

DiskPair derive_geometry(double r1, double r2, double eps) {
  if (!(r1 > 0) || !(r2 > 0) || !(eps > 0)) {
    std::ostringstream os;
    os << "derive_geometry: r1, r2, eps must be positive (got " << r1 << ", " << r2 << ", " << eps << ")";
    throw DomainError(os.str());
  }
  DiskPair g;
  g.r1 = r1;
  g.r2 = r2;
  g.eps = eps;
  const double s = r1 + r2 + eps;
  g.beta = std::sqrt(eps) * std::sqrt((2 * r1 + eps) * (2 * r2 + eps) * (2 * r1 + 2 * r2 + eps)) / s;
  g.c1 = (r2 * r2 - r1 * r1 - s * s) / (2 * s) - g.beta / 2;
  g.c2 = g.c1 + s;
  g.R1 = std::sqrt(1 + g.beta / g.c1);  // c1 < 0, so R1 < 1
  g.R2 = std::sqrt(1 + g.beta / g.c2);
  g.rho = g.R1 / g.R2;
  g.r_star = std::sqrt(2 * (r1 + r2) / (r1 * r2));
  g.p1 = Complex(-g.beta, 0.0);
  g.p2 = Complex(0.0, 0.0);
  return g;
}

Complex forward_map(const DiskPair& g, Complex z) {
  if (z == Complex(0.0, 0.0)) throw PoleError("forward_map: z = 0 is the pole of T");
  if (is_point_at_infinity(z)) return Complex(1.0, 0.0);
  return g.beta / z + 1.0;
}

Complex inverse_map(const DiskPair& g, Complex zeta) {
  if (zeta == Complex(1.0, 0.0)) throw PoleError("inverse_map: zeta = 1 is the pole of T^-1");
  if (is_point_at_infinity(zeta)) return Complex(0.0, 0.0);
  return g.beta / (zeta - 1.0);
}

Zone classify_zone(const DiskPair& g, Complex zeta) {
  const double a = std::abs(zeta);
  if (a <= g.R1) return Zone::inclusion1;
  if (a <= g.R2) return Zone::annulus;
  return Zone::inclusion2;
}

double singular_function_q1(const DiskPair& g, Complex z) {
  const double d1 = std::abs(z - g.p1);
  const double d2 = std::abs(z - g.p2);
  if (d1 == 0.0 || d2 == 0.0) throw PoleError("singular_function_q1: z is a fixed point");
  return (std::log(d1) - std::log(d2)) / kTwoPi;
}

Complex singular_function_q1_gradient(const DiskPair& g, Complex z) {
  const Complex d1 = z - g.p1;
  const Complex d2 = z - g.p2;
  if (d1 == Complex(0.0, 0.0) || d2 == Complex(0.0, 0.0))
    throw PoleError("singular_function_q1_gradient: z is a fixed point");
  // grad ln|z-p| = (z-p)/|z-p|^2 = 1/conj(z-p)
  return (1.0 / std::conj(d1) - 1.0 / std::conj(d2)) / kTwoPi;
}

Complex contraction_map(const DiskPair& g, int side, int l, double t, Complex z) {
  if (side != 1 && side != 2) throw DomainError("contraction_map: side must be 1 or 2");
  if (l < 0) throw DomainError("contraction_map: l must be >= 0");
  if (!(t >= g.rho * g.rho && t <= 1.0)) throw DomainError("contraction_map: t must lie in [rho^2, 1]");
  const double rc = g.radius(side);
  const Complex cc = g.center(side);
  if (std::abs(z - cc) > rc * (1 + 1e-12)) throw DomainError("contraction_map: z outside the stated disk");
  const double scale = side == 1 ? t * std::pow(g.rho, 2.0 * l) : t * std::pow(g.rho, -2.0 * l - 1.0);
  // T^-1(scale * T(z)) = beta z / (beta scale - (1 - scale) z)
  const Complex denom = g.beta * scale - (1.0 - scale) * z;
  if (denom == Complex(0.0, 0.0)) throw PoleError("contraction_map: composed pole");
  return g.beta * z / denom;
}

Complex reflection_map_G(const DiskPair& g, Complex z) {
  if (std::abs(z - g.center(1)) < g.r1 * (1 - 1e-12)) throw DomainError("reflection_map_G: z inside open D1");
  // G(z) = beta (beta + z) / ((R1^2 - 1) z - beta)
  const Complex denom = (g.R1 * g.R1 - 1.0) * z - g.beta;
  if (denom == Complex(0.0, 0.0)) throw PoleError("reflection_map_G: pole of the composed map");
  if (is_point_at_infinity(z)) return g.beta / Complex(g.R1 * g.R1 - 1.0, 0.0);
  return g.beta * (g.beta + z) / denom;
}

FramedDiskPair derive_geometry_from_centers(Complex center1, double r1, Complex center2, double r2) {
  const Complex d = center2 - center1;
  const double dist = std::abs(d);
  const double eps = dist - r1 - r2;
  if (!(eps > 0)) throw GeometryError("derive_geometry_from_centers: disks must be disjoint (eps > 0)");
  FramedDiskPair out;
  out.pair = derive_geometry(r1, r2, eps);
  const Complex axis = d / dist;  // unit vector from center1 toward center2
  // to_solver maps center1 -> (c1, 0): solver = rot*(user - shift) with rot = conj(axis)
  out.frame.rotation = std::conj(axis);
  out.frame.shift = center1 - Complex(out.pair.c1, 0.0) * axis;
  return out;
}

}  // namespace npduet
