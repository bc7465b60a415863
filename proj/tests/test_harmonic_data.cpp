#include <doctest.h>

#include <cmath>
#include <random>

#include "npduet/errors.hpp"
#include "npduet/harmonic_data.hpp"
#include "npduet/numeric.hpp"

using namespace npduet;

namespace {
const DiskPair g0 = derive_geometry(1.2, 0.8, 0.05);
}

TEST_CASE("neumann_disk_solve maps flux modes to trace modes") {
  // flux = cos(theta) on the unit disk -> trace = cos(theta) (H = x1 restricted)
  std::vector<Complex> flux(8, Complex(0, 0));
  flux[1] = Complex(0.5, 0);  // cos = (e^{i t} + e^{-i t})/2, one-sided coefficient 1/2
  auto trace = neumann_disk_solve(1.0, flux);
  CHECK(trace[1].real() == doctest::Approx(0.5).epsilon(1e-15));
  // zero flux -> zero trace
  auto zero = neumann_disk_solve(1.0, std::vector<Complex>(8, Complex(0, 0)));
  for (const auto& c : zero) CHECK(std::abs(c) == 0.0);
  // flux = cos(2 theta) on radius 2 -> trace = cos(2 theta)
  std::vector<Complex> f2(8, Complex(0, 0));
  f2[2] = Complex(0.5, 0);
  auto t2 = neumann_disk_solve(2.0, f2);
  CHECK(t2[2].real() == doctest::Approx(0.5).epsilon(1e-15));
  // nonzero mean is rejected
  std::vector<Complex> bad(4, Complex(0, 0));
  bad[0] = Complex(0.1, 0);
  CHECK_THROWS_AS(neumann_disk_solve(1.0, bad), CompatibilityError);
}

TEST_CASE("harmonic extension agrees with a radial-ODE finite-difference Neumann solve") {
  // mode cos(2 theta) on the radius-2 disk: u = f(r) cos(2 theta) with
  // f'' + f'/r - 4 f/r^2 = 0, f'(2) = 1, f bounded at 0. The closed form the
  // library encodes is f(r) = (r/2)^2 * (R/|m|) = r^2/4.
  const double R = 2.0;
  const int m = 2;
  const int n = 20000;
  const double h = R / n;
  // second-order FD on f with a one-sided regular start f(h/2...)
  std::vector<double> sub(n, 0), diag(n, 0), sup(n, 0), rhs(n, 0);
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) * h;
    sub[i] = 1.0 / (h * h) - 1.0 / (2 * r * h);
    diag[i] = -2.0 / (h * h) - m * m / (r * r);
    sup[i] = 1.0 / (h * h) + 1.0 / (2 * r * h);
  }
  // r = 0 regularity: f ~ r^m so f(-h/2) = -f(h/2) for odd..., use f(0)=0 ghost: fold
  diag[0] += 0.0;
  sub[0] = 0.0;
  // Neumann at r = R: ghost f(n) = f(n-1) + h (using f'(R) = 1)
  rhs[n - 1] -= sup[n - 1] * h;
  diag[n - 1] += sup[n - 1];
  sup[n - 1] = 0;
  // Thomas solve
  for (int i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> f(n);
  f[n - 1] = rhs[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) f[i] = (rhs[i] - sup[i] * f[i + 1]) / diag[i];
  // compare with r^2/4 at a few radii (both are defined up to the same gauge: f(R) fixes it)
  const double gauge = f[n - 1] - (R - 0.5 * h) * (R - 0.5 * h) / 4.0;
  for (int i : {n / 4, n / 2, 3 * n / 4}) {
    const double r = (i + 0.5) * h;
    CHECK(f[i] - gauge == doctest::Approx(r * r / 4.0).epsilon(1e-6));
  }
}

TEST_CASE("pullback coefficients: H = x gives the geometric-series data") {
  auto chi = [](Complex z) { return z; };
  const HarmonicPair hp = pullback_coefficients(g0, chi, chi, 64);
  REQUIRE(hp.N >= 64);
  for (int m = 1; m <= 24; ++m) {
    CHECK(hp.a1[m - 1].real() == doctest::Approx(-g0.beta).epsilon(1e-11));
    CHECK(std::abs(hp.a1[m - 1].imag()) < 1e-11);
    CHECK(hp.a2[m - 1].real() == doctest::Approx(g0.beta).epsilon(1e-11));
  }
  // closed-form route agrees in the usage-weighted norm (the DFT noise floor
  // amplifies like (1/0.9)^m; what matters is the contribution at |xi| = R_j)
  const HarmonicPair hc = harmonic_pair_from_polynomial(g0, {Complex(0, 0), Complex(1, 0)}, hp.N);
  for (int m = 1; m <= hp.N; ++m) {
    CHECK(std::abs(hp.a1[m - 1] - hc.a1[m - 1]) * std::pow(g0.R1, m) < 1e-9);
    CHECK(std::abs(hp.a2[m - 1] - hc.a2[m - 1]) * std::pow(g0.R2, -m) < 1e-9);
  }
}

TEST_CASE("pullback coefficients: H = Re z^2 against the squared series") {
  auto chi = [](Complex z) { return z * z; };
  const HarmonicPair hp = pullback_coefficients(g0, chi, chi, 64);
  // (beta/(zeta-1))^2 = beta^2 sum (m+1) zeta^m
  for (int m = 1; m <= 30; ++m)
    CHECK(hp.a1[m - 1].real() == doctest::Approx(g0.beta * g0.beta * (m + 1)).epsilon(1e-12));
  // constant background: all coefficients vanish
  auto c = [](Complex) { return Complex(2.5, 0); };
  const HarmonicPair hz = pullback_coefficients(g0, c, c, 16);
  for (const auto& a : hz.a1) CHECK(std::abs(a) < 1e-12);
  for (const auto& a : hz.a2) CHECK(std::abs(a) < 1e-12);
}

TEST_CASE("coefficient extraction is radius-independent") {
  // DFT extraction against the closed form, measured where the coefficients
  // are used (the noise floor of the 0.9-radius sampling grows like (1/0.9)^m).
  auto chi = [](Complex z) { return z * z * z; };
  const HarmonicPair hp = pullback_coefficients(g0, chi, chi, 32);
  const HarmonicPair hc = harmonic_pair_from_polynomial(
      g0, {Complex(0, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)}, hp.N);
  const double bound = 3.0 * std::max(1e-10, hp.noise_floor);
  for (int m = 1; m <= hp.N; ++m) {
    CHECK(std::abs(hp.a1[m - 1] - hc.a1[m - 1]) * std::pow(g0.R1, m) < bound);
    CHECK(std::abs(hp.a2[m - 1] - hc.a2[m - 1]) * std::pow(g0.R2, -m) < bound);
  }
  for (int m = 1; m <= 20; ++m) {
    CHECK(std::abs(hp.a1[m - 1] - hc.a1[m - 1]) < 1e-10 * (1 + std::abs(hc.a1[m - 1])));
    CHECK(std::abs(hp.a2[m - 1] - hc.a2[m - 1]) < 1e-10 * (1 + std::abs(hc.a2[m - 1])));
  }
}

TEST_CASE("mode_data instances") {
  // only a1[3] = 1 -> C_{3,+} = C_{3,-} = 2 pi R1^3
  HarmonicPair hp;
  hp.geom = g0;
  hp.N = 5;
  hp.a1.assign(5, Complex(0, 0));
  hp.a2.assign(5, Complex(0, 0));
  hp.a1[2] = Complex(1, 0);
  std::vector<Complex> Cp, Cm;
  mode_data(g0, hp, Cp, Cm);
  for (int n = 1; n <= 5; ++n) {
    if (n == 3) {
      CHECK(Cp[n - 1].real() == doctest::Approx(kTwoPi * std::pow(g0.R1, 3)).epsilon(1e-14));
      CHECK(Cm[n - 1].real() == doctest::Approx(kTwoPi * std::pow(g0.R1, 3)).epsilon(1e-14));
    } else {
      CHECK(std::abs(Cp[n - 1]) == 0.0);
      CHECK(std::abs(Cm[n - 1]) == 0.0);
    }
  }
  // H = x case: C_{n,+-} = 2 pi beta (-R1^n +- R2^{-n})
  const HarmonicPair hx = harmonic_pair_from_polynomial(g0, {Complex(0, 0), Complex(1, 0)}, 8);
  mode_data(g0, hx, Cp, Cm);
  for (int n = 1; n <= 8; ++n) {
    const double expplus = kTwoPi * g0.beta * (-std::pow(g0.R1, n) + std::pow(g0.R2, -n));
    const double expminus = kTwoPi * g0.beta * (-std::pow(g0.R1, n) - std::pow(g0.R2, -n));
    CHECK(Cp[n - 1].real() == doctest::Approx(expplus).epsilon(1e-12));
    CHECK(Cm[n - 1].real() == doctest::Approx(expminus).epsilon(1e-12));
  }
}

TEST_CASE("mode_data is linear in the harmonic pair") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1, 1);
  HarmonicPair a, b, s;
  a.geom = b.geom = s.geom = g0;
  a.N = b.N = s.N = 6;
  for (int m = 0; m < 6; ++m) {
    a.a1.emplace_back(u(rng), u(rng));
    a.a2.emplace_back(u(rng), u(rng));
    b.a1.emplace_back(u(rng), u(rng));
    b.a2.emplace_back(u(rng), u(rng));
    s.a1.push_back(a.a1[m] + b.a1[m]);
    s.a2.push_back(a.a2[m] + b.a2[m]);
  }
  std::vector<Complex> Cpa, Cma, Cpb, Cmb, Cps, Cms;
  mode_data(g0, a, Cpa, Cma);
  mode_data(g0, b, Cpb, Cmb);
  mode_data(g0, s, Cps, Cms);
  for (int m = 0; m < 6; ++m) {
    CHECK(std::abs(Cps[m] - Cpa[m] - Cpb[m]) < 1e-14);
    CHECK(std::abs(Cms[m] - Cma[m] - Cmb[m]) < 1e-14);
  }
}

TEST_CASE("newtonian potential of a uniform bump: shell theorem") {
  // bump outside both disks, weight 1
  const Complex x0(2.6, 1.8);
  const double a = 0.15;
  const SourceSpec src = disk_bump_source(g0, 5.0, 10.0, x0, a);
  // closed form bypass
  for (const Complex x : {Complex(4.0, 2.0), Complex(-1.0, -2.0)}) {
    const double expect = a * a / 2.0 * std::log(std::abs(x - x0));
    CHECK(newtonian_potential(src, g0, 5.0, 10.0, x) == doctest::Approx(expect).epsilon(1e-12));
  }
  // quadrature route on a smooth radial source against 1D radial integration
  DivergenceSource ds;
  ds.support = {x0.real() - 0.5, x0.real() + 0.5, x0.imag() - 0.5, x0.imag() + 0.5};
  ds.f = [x0](Complex y) {
    const double s2 = std::norm(y - x0);
    return s2 < 0.25 ? (0.25 - s2) * (0.25 - s2) : 0.0;
  };
  const SourceSpec smooth = SourceSpec::divergence(std::move(ds));
  // radial oracle: F(x) = int_0^[0.5] ln(max(|x-x0|, t))/(2pi) f(t) 2 pi t dt for |x-x0| > 0.5
  auto radial_f = [](double t) { return (0.25 - t * t) * (0.25 - t * t); };
  std::vector<double> qx, qw;
  gauss_legendre(200, qx, qw);
  for (const Complex x : {Complex(3.4, 2.1), Complex(2.0, 0.6)}) {
    const double d = std::abs(x - x0);
    double expect = 0;
    for (std::size_t i = 0; i < qx.size(); ++i) {
      const double t = 0.25 * (qx[i] + 1);
      expect += 0.25 * qw[i] * std::log(std::max(d, t)) * radial_f(t) * t;
    }
    CHECK(newtonian_potential(smooth, g0, 5.0, 10.0, x) == doctest::Approx(expect).epsilon(1e-8));
  }
  // zero source
  DivergenceSource zero;
  zero.support = {0, 1, 0, 1};
  zero.f = [](Complex) { return 0.0; };
  CHECK(newtonian_potential(SourceSpec::divergence(std::move(zero)), g0, 5.0, 10.0, Complex(4, 4)) == 0.0);
}

TEST_CASE("bump inside an inclusion carries the 1/k weight") {
  const Complex x0 = g0.center(1);
  const double a = 0.2, k1 = 5.0;
  const SourceSpec src = disk_bump_source(g0, k1, 10.0, x0, a);
  const Complex x(3.0, 0.5);
  const double expect = a * a / 2.0 * std::log(std::abs(x - x0)) / k1;
  CHECK(newtonian_potential(src, g0, k1, 10.0, x) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(inclusion_integral(g0, src, 1) == doctest::Approx(kPi * a * a).epsilon(1e-14));
  CHECK(inclusion_integral(g0, src, 2) == 0.0);
  CHECK_THROWS_AS(disk_bump_source(g0, k1, 10.0, Complex(g0.gap_left() + 0.01, 0), 0.2), GeometryError);
}

TEST_CASE("corrector: normalization, support, and contrast decay") {
  for (int side : {1, 2}) {
    const Corrector c(g0, side, 5.0);
    CHECK(c.divergence_integral() == doctest::Approx(1.0).epsilon(1e-8));
    // supported strictly on the outward half plane of its disk
    const double cx = side == 1 ? g0.c1 : g0.c2;
    std::mt19937_64 rng(47 + side);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 200; ++i) {
      const Complex x(cx + (side == 1 ? std::abs(u(rng)) : -std::abs(u(rng))), u(rng));
      CHECK(c.value(x) == 0.0);
    }
  }
  // sup norm on the closed disk decays like 1/k
  double prev = 1e300;
  for (double k : {1e2, 1e4, 1e6}) {
    const Corrector c(g0, 1, k);
    double sup = 0;
    for (int i = 0; i < 64; ++i)
      for (double frac : {0.3, 0.7, 0.99})
        sup = std::max(sup, std::abs(c.value(g0.center(1) + frac * g0.r1 * std::polar(1.0, kTwoPi * i / 64))));
    CHECK(sup <= 10.0 / k);
    CHECK(sup < prev);
    prev = sup;
  }
  CHECK_THROWS_AS(Corrector(g0, 1, 0.0), DomainError);
}

TEST_CASE("corrector jets match finite differences") {
  const Corrector c(g0, 1, 7.0);
  const double h = 1e-6;
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> rad(0.2, 0.95), ang(0.6 * kPi, 1.4 * kPi);
  int checked = 0;
  while (checked < 25) {
    const Complex x = g0.center(1) + (rad(rng) * (g0.r1 + 0.4 * g0.eps)) * std::polar(1.0, ang(rng));
    const double r = std::abs(x - g0.center(1));
    if (std::abs(r - g0.r1) < 0.02) continue;  // gradient jumps across the interface
    const Jet2 j = c.value_jet(x);
    if (j.v == 0.0) continue;
    ++checked;
    const double fx = (c.value(x + h) - c.value(x - h)) / (2 * h);
    const double fy = (c.value(x + Complex(0, h)) - c.value(x - Complex(0, h))) / (2 * h);
    CHECK(j.gx == doctest::Approx(fx).epsilon(1e-5));
    CHECK(j.gy == doctest::Approx(fy).epsilon(1e-5));
    const double fxx = (c.value(x + h) - 2 * c.value(x) + c.value(x - h)) / (h * h);
    CHECK(j.hxx == doctest::Approx(fxx).epsilon(5e-3));
  }
}

TEST_CASE("corrector potential solves the Poisson identity and matches direct quadrature") {
  const Corrector c(g0, 1, 7.0);
  // direct 2D quadrature of Gamma * m at two exterior points; the radial
  // integral splits at r1 where the density kinks
  std::vector<double> qx, qw;
  gauss_legendre(80, qx, qw);
  const double rmax = c.support_outer_radius();
  for (const Complex x : {Complex(1.5, 1.2), Complex(-3.4, 0.4)}) {
    CompensatedSum<double> acc;
    for (const auto& [a, b] : {std::pair{0.0, g0.r1}, {g0.r1, rmax}}) {
      for (std::size_t i = 0; i < qx.size(); ++i) {
        const double t = (a + b) / 2 + (b - a) / 2 * qx[i];
        for (int j = 0; j < 256; ++j) {
          const double th = kTwoPi * j / 256;
          const Complex y = g0.center(1) + std::polar(t, th);
          acc.add((b - a) / 2 * qw[i] * t * kTwoPi / 256 * c.poisson_density(y) *
                  std::log(std::abs(x - y)) / kTwoPi);
        }
      }
    }
    CHECK(c.potential_jet(x).v == doctest::Approx(acc.value()).epsilon(1e-7));
  }
  // Poisson identity Delta W = m at interior and ring points
  for (const Complex x : {g0.center(1) + Complex(-0.4, 0.3), g0.center(1) + Complex(-g0.r1 - 0.2 * g0.eps, 0.01)}) {
    const Jet2 w = c.potential_jet(x);
    CHECK(w.laplacian() == doctest::Approx(c.poisson_density(x)).epsilon(1e-6));
  }
  // harmonic far away
  const Jet2 far = c.potential_jet(Complex(2.2, 1.4));
  CHECK(far.laplacian() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("source_decompose zeroes the inclusion integrals") {
  // bump strictly inside D1
  const double a = 0.2;
  const SourceSpec src = disk_bump_source(g0, 5.0, 10.0, g0.center(1), a);
  const Decomposition d = source_decompose(g0, 5.0, 10.0, src);
  CHECK(d.w1 == doctest::Approx(kPi * a * a).epsilon(1e-14));
  CHECK(d.w2 == 0.0);
  CHECK(std::abs(d.residual_integral_D1) < 1e-9);
  CHECK(std::abs(d.residual_integral_D2) < 1e-9);
  // a source with vanishing inclusion integrals is untouched
  const SourceSpec out = disk_bump_source(g0, 5.0, 10.0, Complex(2.8, 2.0), a);
  const Decomposition d2 = source_decompose(g0, 5.0, 10.0, out);
  CHECK(d2.w1 == 0.0);
  CHECK(d2.w2 == 0.0);
}
