#pragma once

#include "npduet/numeric.hpp"

namespace npduet {

/// Two disks on the real axis, separated by eps, together with every constant
/// of the Mobius normalization T(z) = beta/z + 1 that sends both boundary
/// circles to circles centered at the origin:
///
///   T(dD1) = {|zeta| = R1},  T(dD2) = {|zeta| = R2},  0 < R1 < 1 < R2,
///
/// rho = R1/R2 is the spectral ratio, and p1 = -beta, p2 = 0 are the common
/// fixed points of the combined reflections (both circles are Apollonius
/// circles of p1, p2).
struct DiskPair {
  double r1 = 0, r2 = 0, eps = 0;
  double c1 = 0, c2 = 0;
  double beta = 0;
  double R1 = 0, R2 = 0;
  double rho = 0;
  double r_star = 0;
  Complex p1, p2;

  Complex center(int side) const { return {side == 1 ? c1 : c2, 0.0}; }
  double radius(int side) const { return side == 1 ? r1 : r2; }
  double gap_left() const { return c1 + r1; }
  double gap_right() const { return c2 - r2; }
};

enum class Zone { inclusion1, annulus, inclusion2 };

DiskPair derive_geometry(double r1, double r2, double eps);

/// zeta = T(z) = beta/z + 1. Throws at the pole z = 0; callers that need the
/// image of the pole use kPointAtInfinity explicitly.
Complex forward_map(const DiskPair& g, Complex z);

/// z = T^-1(zeta) = beta/(zeta - 1). Throws at zeta = 1.
Complex inverse_map(const DiskPair& g, Complex zeta);

/// |zeta| <= R1 -> inclusion1, R1 < |zeta| <= R2 -> annulus, else inclusion2.
Zone classify_zone(const DiskPair& g, Complex zeta);

/// q1(x) = (ln|x-p1| - ln|x-p2|)/(2 pi); constant on each boundary circle.
double singular_function_q1(const DiskPair& g, Complex z);

/// Gradient of q1 as a complex number gx + i*gy.
Complex singular_function_q1_gradient(const DiskPair& g, Complex z);

/// Phi_{l,t} (side 1) / Psi_{l,t} (side 2): T^-1(t rho^{2l} T(z)) and
/// T^-1(t rho^{-2l-1} T(z)); each maps its disk into itself.
Complex contraction_map(const DiskPair& g, int side, int l, double t, Complex z);

/// G(z) = T^-1(R1^2 conj(T(z))^-1); maps the complement of D1 into closure(D1),
/// fixing dD1 pointwise in modulus.
Complex reflection_map_G(const DiskPair& g, Complex z);

/// Rigid motion between a user frame (arbitrary centers) and the solver frame.
struct RigidFrame {
  Complex shift;     // solver = rotation * (user - shift)
  Complex rotation;  // unit modulus

  Complex to_solver(Complex z) const { return rotation * (z - shift); }
  Complex from_solver(Complex z) const { return z / rotation + shift; }
  // Vectors (gradients) rotate without translating.
  Complex vector_to_solver(Complex v) const { return rotation * v; }
  Complex vector_from_solver(Complex v) const { return v / rotation; }
};

struct FramedDiskPair {
  DiskPair pair;
  RigidFrame frame;
};

/// Normalizes two arbitrary disk centers into the canonical frame.
FramedDiskPair derive_geometry_from_centers(Complex center1, double r1, Complex center2, double r2);

}  // namespace npduet
