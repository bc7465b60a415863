#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "npduet/geometry.hpp"
#include "npduet/numeric.hpp"

namespace npduet {

struct SupportBox {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

/// H = Re sum_m b[m] z^m, harmonic entire polynomial; degree capped at 32.
struct HarmonicPolynomialSource {
  std::vector<Complex> b;
};

/// Inhomogeneity f = div g with compact support. Either f or g must be
/// supplied; when a closed-form weighted Newtonian potential is known it can
/// be given directly and the quadrature route is bypassed. The inclusion
/// integrals may also be supplied in closed form (needed for discontinuous f
/// like characteristic functions, where area quadrature cannot reach 1e-9).
struct DivergenceSource {
  std::function<double(Complex)> f;
  std::function<std::array<double, 2>(Complex)> g;
  SupportBox support;
  std::function<Jet2(Complex)> closed_form_potential;  // already weighted by 1/k_j inside D_j
  std::optional<double> integral_D1;
  std::optional<double> integral_D2;
};

struct SourceSpec {
  std::variant<HarmonicPolynomialSource, DivergenceSource> value;

  bool is_harmonic_background() const { return std::holds_alternative<HarmonicPolynomialSource>(value); }
  static SourceSpec harmonic(std::vector<Complex> b) { return {HarmonicPolynomialSource{std::move(b)}}; }
  static SourceSpec divergence(DivergenceSource d) { return {std::move(d)}; }
};

/// Uniform bump f = amplitude * chi_{B(center, radius)} with B inside one
/// region; closed-form weighted potential and exact inclusion integrals.
SourceSpec disk_bump_source(const DiskPair& g, double k1, double k2, Complex center, double radius,
                            double amplitude = 1.0);

/// Truncated analytic data of the transmission problem: Taylor coefficients
/// a1[m] of h1 at 0 and Laurent coefficients a2[m] of h2 at infinity
/// (m = 1..N, stored 0-based; the constants are normalized away).
struct HarmonicPair {
  DiskPair geom;
  int N = 0;
  std::vector<Complex> a1, a2;
  double tail_bound_a1 = 0, tail_bound_a2 = 0;  // A with |a_j[m]| <= A r_s^{-m} at the sampling radius
  double noise_floor = 0;  // reconstruction error bound at the zone boundaries (DFT route)
};

/// Neumann solve on one disk in Fourier space: flux mode m of d_nu F maps to
/// trace mode (r/|m|) of H_j; the constant mode must vanish (compatibility).
/// Input and output are one-sided coefficient lists (index m, real data
/// implied by conjugate symmetry).
std::vector<Complex> neumann_disk_solve(double radius, const std::vector<Complex>& flux_modes,
                                        double compat_tol = 1e-10);

/// One-sided Fourier coefficients (e^{im theta}, m = 0..samples/2-1) of real
/// samples on a uniform angular grid.
std::vector<Complex> fourier_modes_from_samples(const std::vector<double>& samples);

/// Taylor-series evaluator around a center (analytic completion chi_j of H_j).
struct TaylorSeries {
  Complex center;
  double radius = 1.0;  // coefficients are for ((z-center)/radius)^m
  std::vector<Complex> coef;

  Complex eval(Complex z) const;
  Complex derivative(Complex z) const;        // d chi/dz
  Complex second_derivative(Complex z) const;
};

/// Extracts (a1, a2) from analytic completions chi1 (on D1) and chi2 (on D2)
/// by sampling h_j = chi_j(T^-1 zeta) on |zeta| = 0.9 R1 and R2/0.9 and
/// taking the DFT; N auto-escalates until the reported tail bound satisfies
/// A 0.9^N < 1e-12 ||data||, within the double-precision reliability range.
HarmonicPair pullback_coefficients(const DiskPair& g, const std::function<Complex(Complex)>& chi1,
                                   const std::function<Complex(Complex)>& chi2, int N);

/// Closed-form coefficients for a polynomial completion chi(z) = sum b[p] z^p
/// (both disks see the same entire function): a_{1,m} and a_{2,m} of
/// chi(beta/(zeta-1)) via negative-binomial expansions, exact to any order.
HarmonicPair harmonic_pair_from_polynomial(const DiskPair& g, const std::vector<Complex>& b, int N);

/// C_{n,+-} = 2 pi (a1[n] R1^n +- conj(a2[n]) R2^{-n}).
void mode_data(const DiskPair& g, const HarmonicPair& hp, std::vector<Complex>& C_plus,
               std::vector<Complex>& C_minus);

/// Weighted Newtonian potential of a divergence source by adaptive panel
/// quadrature (or the closed form when supplied): value, gradient, Hessian.
Jet2 newtonian_potential_jet(const SourceSpec& src, const DiskPair& g, double k1, double k2, Complex x);
double newtonian_potential(const SourceSpec& src, const DiskPair& g, double k1, double k2, Complex x);

/// Corrector of one inclusion: V = Theta(theta) R(r) U(r, theta) around the
/// disk center, with Theta a smooth bump on the outward-facing half-angles
/// normalized so that r_j int Theta cos theta dtheta = 1, R a quintic
/// cutoff == 1 on [0, r_j], and U the single-disk transmission profile. The
/// weighted Newtonian potential of div v (v = sigma grad V) is evaluated by
/// a radial Fourier-mode reduction.
class Corrector {
public:
  Corrector(const DiskPair& g, int side, double k);

  int side() const { return side_; }
  double k() const { return k_; }
  double support_outer_radius() const { return r_ + width_; }

  /// V_side with gradient and Hessian.
  Jet2 value_jet(Complex x) const;
  double value(Complex x) const { return value_jet(x).v; }

  /// v_side = grad V outside the disk, k grad V inside.
  std::array<double, 2> vector_field(Complex x) const;

  /// Pointwise div v (no interface delta; v.nu is continuous by construction).
  double div_v(Complex x) const;

  /// Weighted source density m = (1/k) div v inside, div v outside; equals
  /// Delta V pointwise, so the weighted Newtonian potential solves
  /// Delta W = m classically.
  double poisson_density(Complex x) const;

  /// Weighted Newtonian potential of div v (value, gradient, Hessian).
  Jet2 potential_jet(Complex x) const;

  /// int_{D_side} div v (should be 1).
  double divergence_integral() const;

private:
  struct RadialModes;

  void build_modes();
  double theta_cut(double theta) const;
  Jet2 theta_jet(Complex local) const;
  Jet2 radial_jet(Complex local) const;
  Jet2 profile_jet(Complex local) const;  // U

  DiskPair g_;
  int side_;
  double k_;
  double r_;      // own radius
  double cx_;     // own center abscissa
  double width_;  // radial cutoff width
  double amp_;    // bump amplitude fixing the normalization
  std::shared_ptr<RadialModes> modes_;  // built at construction; immutable afterward
};

/// One-shot evaluation V_side(x) and v_side(x) without keeping the Corrector.
struct CorrectorValue {
  double V = 0;
  std::array<double, 2> v{0, 0};
};
CorrectorValue corrector_field(const DiskPair& g, int side, double k, Complex x);

/// Inclusion weights and the residual-source bookkeeping of the corrector
/// decomposition u = w1 V1 + w2 V2 + u0.
struct Decomposition {
  double w1 = 0, w2 = 0;
  double residual_integral_D1 = 0, residual_integral_D2 = 0;
};

Decomposition source_decompose(const DiskPair& g, double k1, double k2, const SourceSpec& src);

/// int_{D_j} f for either source variant (closed form when supplied).
double inclusion_integral(const DiskPair& g, const SourceSpec& src, int side);

}  // namespace npduet
