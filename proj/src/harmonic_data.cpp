#include "npduet/harmonic_data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "npduet/errors.hpp"

namespace npduet {

namespace {

constexpr int kDegreeCap = 32;
constexpr double kBumpHalfWidthTrim = 0.05;  // delta in s = (theta - theta_c)/(pi/2 - delta)

// Radial scalar u(|x - x0|) as a jet in x, from u, u', u''.
Jet2 radial_scalar_jet(double v, double d1, double d2, Complex rel) {
  const double s = std::abs(rel);
  const double cx = rel.real() / s, cy = rel.imag() / s;
  Jet2 j;
  j.v = v;
  j.gx = d1 * cx;
  j.gy = d1 * cy;
  j.hxx = d2 * cx * cx + d1 * cy * cy / s;
  j.hyy = d2 * cy * cy + d1 * cx * cx / s;
  j.hxy = (d2 - d1 / s) * cx * cy;
  return j;
}

}  // namespace

SourceSpec disk_bump_source(const DiskPair& g, double k1, double k2, Complex center, double radius,
                            double amplitude) {
  if (!(radius > 0)) throw DomainError("disk_bump_source: radius must be positive");
  const double d1 = std::abs(center - g.center(1));
  const double d2 = std::abs(center - g.center(2));
  double weight = 1.0;
  int inside = 0;
  if (d1 + radius <= g.r1) {
    inside = 1;
    weight = std::isinf(k1) ? 0.0 : 1.0 / k1;
  } else if (d2 + radius <= g.r2) {
    inside = 2;
    weight = std::isinf(k2) ? 0.0 : 1.0 / k2;
  } else if (d1 - radius < g.r1 || d2 - radius < g.r2) {
    throw GeometryError("disk_bump_source: bump must lie entirely inside one region");
  }
  if (inside != 0 && ((inside == 1 && k1 == 0.0) || (inside == 2 && k2 == 0.0)))
    throw DomainError("disk_bump_source: an insulating inclusion admits no interior source");

  DivergenceSource ds;
  const double a = radius;
  ds.support = {center.real() - a, center.real() + a, center.imag() - a, center.imag() + a};
  ds.f = [center, a, amplitude](Complex y) { return std::abs(y - center) <= a ? amplitude : 0.0; };
  ds.integral_D1 = inside == 1 ? amplitude * kPi * a * a : 0.0;
  ds.integral_D2 = inside == 2 ? amplitude * kPi * a * a : 0.0;
  const double c = amplitude * weight;
  ds.closed_form_potential = [center, a, c](Complex x) {
    const Complex rel = x - center;
    const double s = std::abs(rel);
    if (s >= a) {
      const double A = c * a * a / 2.0;
      return radial_scalar_jet(A * std::log(s), A / s, -A / (s * s), rel);
    }
    const double v = c * (a * a / 2.0 * std::log(a) + (s * s - a * a) / 4.0);
    if (s < 1e-14 * a) return Jet2{v, 0, 0, c / 2.0, 0, c / 2.0};
    return radial_scalar_jet(v, c * s / 2.0, c / 2.0, rel);
  };
  return SourceSpec::divergence(std::move(ds));
}

std::vector<Complex> neumann_disk_solve(double radius, const std::vector<Complex>& flux_modes,
                                        double compat_tol) {
  if (!(radius > 0)) throw DomainError("neumann_disk_solve: radius must be positive");
  std::vector<Complex> trace(flux_modes.size(), Complex(0, 0));
  if (flux_modes.empty()) return trace;
  double scale = 0;
  for (const auto& c : flux_modes) scale = std::max(scale, std::abs(c));
  if (std::abs(flux_modes[0]) > compat_tol * std::max(1.0, scale)) {
    std::ostringstream os;
    os << "neumann_disk_solve: flux has nonzero mean " << std::abs(flux_modes[0]) << " (compatibility violated)";
    throw CompatibilityError(os.str());
  }
  for (std::size_t m = 1; m < flux_modes.size(); ++m)
    trace[m] = radius / static_cast<double>(m) * flux_modes[m];
  return trace;
}

std::vector<Complex> fourier_modes_from_samples(const std::vector<double>& samples) {
  const std::size_t M = samples.size();
  if (M == 0 || (M & (M - 1)) != 0) throw DomainError("fourier_modes_from_samples: need a power-of-two sample count");
  std::vector<Complex> work(M);
  for (std::size_t j = 0; j < M; ++j) work[j] = samples[j];
  fft(work);
  std::vector<Complex> modes(M / 2);
  for (std::size_t m = 0; m < M / 2; ++m) modes[m] = work[m] / static_cast<double>(M);
  return modes;
}

Complex TaylorSeries::eval(Complex z) const {
  const Complex t = (z - center) / radius;
  Complex acc(0, 0);
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Complex TaylorSeries::derivative(Complex z) const {
  const Complex t = (z - center) / radius;
  Complex acc(0, 0);
  for (std::size_t m = coef.size(); m-- > 1;) acc = acc * t + static_cast<double>(m) * coef[m];
  return acc / radius;
}

Complex TaylorSeries::second_derivative(Complex z) const {
  const Complex t = (z - center) / radius;
  Complex acc(0, 0);
  for (std::size_t m = coef.size(); m-- > 2;) acc = acc * t + static_cast<double>(m * (m - 1)) * coef[m];
  return acc / (radius * radius);
}

namespace {

std::vector<Complex> sample_dft(const std::function<Complex(Complex)>& h, double radius, int M) {
  std::vector<Complex> w(M);
  for (int j = 0; j < M; ++j) w[j] = h(std::polar(radius, kTwoPi * j / M));
  fft(w);
  for (auto& c : w) c /= static_cast<double>(M);
  return w;
}

// Largest order recoverable before the (1/0.9)^m noise amplification defeats
// double precision.
constexpr int kDftReliableOrder = 320;

}  // namespace

HarmonicPair pullback_coefficients(const DiskPair& g, const std::function<Complex(Complex)>& chi1,
                                   const std::function<Complex(Complex)>& chi2, int N) {
  if (N < 1) throw DomainError("pullback_coefficients: N must be positive");
  HarmonicPair hp;
  hp.geom = g;

  const auto h1 = [&](Complex zeta) { return chi1(inverse_map(g, zeta)); };
  const auto h2 = [&](Complex zeta) { return chi2(inverse_map(g, zeta)); };
  const double rs1 = 0.9 * g.R1;
  const double rs2 = g.R2 / 0.9;

  const double tol = 1e-12;
  const int M = 4096;
  const auto c1 = sample_dft(h1, rs1, M);
  const auto c2 = sample_dft(h2, rs2, M);
  double data_norm = 0;
  for (int m = 0; m < M; ++m) data_norm = std::max(data_norm, std::abs(c1[m]) + std::abs(c2[m]));
  // Scaled coefficients below this are roundoff of the sampling, not signal;
  // amplifying them by r_s^{-m} would inject (1/0.9)^m junk into the series.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(data_norm, 1e-300);

  int n = N;
  for (;;) {
    double A1 = 0, A2 = 0;  // |a_j[m]| <= A r_s^{-+m}
    for (int m = 1; m <= n; ++m) {
      A1 = std::max(A1, std::abs(c1[m]));
      A2 = std::max(A2, std::abs(c2[M - m]));
    }
    // Converged once the last block of scaled coefficients is at the sampling
    // tolerance A 0.9^n < tol ||data|| or has reached the roundoff floor.
    double last_block = 0;
    for (int m = std::max(1, n - 7); m <= n; ++m)
      last_block = std::max(last_block, std::max(std::abs(c1[m]), std::abs(c2[M - m])));
    const bool signal_done = last_block <= std::max(tol * data_norm, floor);
    const bool tail_ok = std::max(A1, A2) * std::pow(0.9, n) < tol * std::max(data_norm, 1e-300);
    if (signal_done || tail_ok) {
      hp.N = n;
      hp.a1.assign(n, Complex(0, 0));
      hp.a2.assign(n, Complex(0, 0));
      int m_keep = 0;
      for (int m = 1; m <= n; ++m) {
        if (std::abs(c1[m]) > floor) {
          hp.a1[m - 1] = c1[m] * std::pow(rs1, -static_cast<double>(m));
          m_keep = m;
        }
        if (std::abs(c2[M - m]) > floor) {
          hp.a2[m - 1] = c2[M - m] * std::pow(rs2, static_cast<double>(m));
          m_keep = std::max(m_keep, m);
        }
      }
      hp.tail_bound_a1 = A1;
      hp.tail_bound_a2 = A2;
      // Reconstruction error bound at the zone boundaries |xi| = R1, R2: the
      // floor-level junk of the last kept coefficient dominates there.
      hp.noise_floor = std::max(last_block, floor) * std::pow(1.0 / 0.9, m_keep);
      return hp;
    }
    if (n >= kDftReliableOrder)
      throw TruncationError(
          "pullback_coefficients: data needs more terms than the DFT range supports; "
          "supply closed-form coefficients or widen the gap",
          2 * n);
    n = std::min(2 * n, kDftReliableOrder);
  }
}

HarmonicPair harmonic_pair_from_polynomial(const DiskPair& g, const std::vector<Complex>& b, int N) {
  if (static_cast<int>(b.size()) > kDegreeCap + 1)
    throw DomainError("harmonic_pair_from_polynomial: polynomial degree exceeds the cap of 32");
  if (N < 1) throw DomainError("harmonic_pair_from_polynomial: N must be positive");
  HarmonicPair hp;
  hp.geom = g;
  hp.N = N;
  hp.a1.assign(N, Complex(0, 0));
  hp.a2.assign(N, Complex(0, 0));
  // chi(beta/(zeta-1)):  z^p = (-beta)^p sum_m C(m+p-1, p-1) zeta^m   (Taylor at 0)
  //                      z^p = beta^p sum_{m>=p} C(m-1, p-1) zeta^{-m} (Laurent at inf)
  for (std::size_t p = 1; p < b.size(); ++p) {
    if (b[p] == Complex(0, 0)) continue;
    const Complex w1 = b[p] * std::pow(Complex(-g.beta, 0), static_cast<double>(p));
    double binom = static_cast<double>(p);  // C(p, p-1)
    for (int m = 1; m <= N; ++m) {
      hp.a1[m - 1] += w1 * binom;
      binom *= static_cast<double>(m + p) / static_cast<double>(m + 1);
    }
    const Complex w2 = b[p] * std::pow(Complex(g.beta, 0), static_cast<double>(p));
    binom = 1.0;  // C(p-1, p-1)
    for (int m = static_cast<int>(p); m <= N; ++m) {
      hp.a2[m - 1] += w2 * binom;
      binom *= static_cast<double>(m) / static_cast<double>(m - p + 1);
    }
  }
  const double rs1 = 0.9 * g.R1, rs2 = g.R2 / 0.9;
  for (int m = 1; m <= N; ++m) {
    hp.tail_bound_a1 = std::max(hp.tail_bound_a1, std::abs(hp.a1[m - 1]) * std::pow(rs1, m));
    hp.tail_bound_a2 = std::max(hp.tail_bound_a2, std::abs(hp.a2[m - 1]) * std::pow(rs2, -m));
  }
  return hp;
}

void mode_data(const DiskPair& g, const HarmonicPair& hp, std::vector<Complex>& C_plus,
               std::vector<Complex>& C_minus) {
  C_plus.resize(hp.N);
  C_minus.resize(hp.N);
  for (int n = 1; n <= hp.N; ++n) {
    const Complex t1 = hp.a1[n - 1] * std::pow(g.R1, n);
    const Complex t2 = std::conj(hp.a2[n - 1]) * std::pow(g.R2, -n);
    C_plus[n - 1] = kTwoPi * (t1 + t2);
    C_minus[n - 1] = kTwoPi * (t1 - t2);
  }
}

// ---------------------------------------------------------------------------
// Newtonian potential
// ---------------------------------------------------------------------------

namespace {

double region_weight(const DiskPair& g, double k1, double k2, Complex y) {
  if (std::abs(y - g.center(1)) < g.r1) return std::isinf(k1) ? 0.0 : 1.0 / k1;
  if (std::abs(y - g.center(2)) < g.r2) return std::isinf(k2) ? 0.0 : 1.0 / k2;
  return 1.0;
}

struct PanelQuad {
  std::vector<double> x, w;
  PanelQuad() { gauss_legendre(10, x, w); }
};

class AdaptiveIntegrator {
public:
  explicit AdaptiveIntegrator(std::function<double(Complex)> f) : f_(std::move(f)) {}

  double integrate(const SupportBox& box, double tol) {
    tol_ = tol;
    return recurse(box.x0, box.x1, box.y0, box.y1, 0);
  }

private:
  double panel(double x0, double x1, double y0, double y1) const {
    static const PanelQuad q;
    const double hx = (x1 - x0) / 2, mx = (x0 + x1) / 2;
    const double hy = (y1 - y0) / 2, my = (y0 + y1) / 2;
    double acc = 0;
    for (std::size_t i = 0; i < q.x.size(); ++i)
      for (std::size_t j = 0; j < q.x.size(); ++j)
        acc += q.w[i] * q.w[j] * f_(Complex(mx + hx * q.x[i], my + hy * q.x[j]));
    return acc * hx * hy;
  }

  double recurse(double x0, double x1, double y0, double y1, int depth) {
    const double coarse = panel(x0, x1, y0, y1);
    const double mx = (x0 + x1) / 2, my = (y0 + y1) / 2;
    const double fine =
        panel(x0, mx, y0, my) + panel(mx, x1, y0, my) + panel(x0, mx, my, y1) + panel(mx, x1, my, y1);
    if (std::abs(fine - coarse) <= tol_ * std::max(1.0, std::abs(fine)) || depth >= 14) {
      if (depth >= 14 && std::abs(fine - coarse) > 1e3 * tol_ * std::max(1.0, std::abs(fine)))
        throw AccuracyError("newtonian_potential: refinement budget exhausted near a singular cell");
      return fine;
    }
    return recurse(x0, mx, y0, my, depth + 1) + recurse(mx, x1, y0, my, depth + 1) +
           recurse(x0, mx, my, y1, depth + 1) + recurse(mx, x1, my, y1, depth + 1);
  }

  std::function<double(Complex)> f_;
  double tol_ = 1e-9;
};

}  // namespace

Jet2 newtonian_potential_jet(const SourceSpec& src, const DiskPair& g, double k1, double k2, Complex x) {
  const auto* ds = std::get_if<DivergenceSource>(&src.value);
  if (!ds) throw DomainError("newtonian_potential: requires the divergence_source variant");
  if (ds->closed_form_potential) return ds->closed_form_potential(x);

  if (ds->f) {
    const auto& f = ds->f;
    auto weighted = [&](const std::function<double(Complex)>& kern) {
      AdaptiveIntegrator ai([&](Complex y) {
        const double fv = f(y);
        return fv == 0.0 ? 0.0 : fv * region_weight(g, k1, k2, y) * kern(y);
      });
      return ai.integrate(ds->support, 1e-10);
    };
    Jet2 j;
    j.v = weighted([&](Complex y) { return std::log(std::abs(x - y)) / kTwoPi; });
    j.gx = weighted([&](Complex y) { return (x - y).real() / (kTwoPi * std::norm(x - y)); });
    j.gy = weighted([&](Complex y) { return (x - y).imag() / (kTwoPi * std::norm(x - y)); });
    j.hxx = weighted([&](Complex y) {
      const Complex d = x - y;
      const double r2 = std::norm(d);
      return (r2 - 2 * d.real() * d.real()) / (kTwoPi * r2 * r2);
    });
    j.hyy = weighted([&](Complex y) {
      const Complex d = x - y;
      const double r2 = std::norm(d);
      return (r2 - 2 * d.imag() * d.imag()) / (kTwoPi * r2 * r2);
    });
    j.hxy = weighted([&](Complex y) {
      const Complex d = x - y;
      const double r2 = std::norm(d);
      return -2 * d.real() * d.imag() / (kTwoPi * r2 * r2);
    });
    return j;
  }

  if (ds->g) {
    // Integrate by parts onto the kernel: F = sum_j (1/k_j - 1) oint Gamma (g.nu)
    // + int grad_x Gamma . g w dy. Value and gradient only on this route.
    const auto& gv = ds->g;
    Jet2 j;
    auto add_volume = [&](double& out, const std::function<double(Complex)>& kern_dot_g) {
      AdaptiveIntegrator ai([&](Complex y) { return region_weight(g, k1, k2, y) * kern_dot_g(y); });
      out += ai.integrate(ds->support, 1e-10);
    };
    add_volume(j.v, [&](Complex y) {
      const auto gy = gv(y);
      const Complex d = x - y;
      return (d.real() * gy[0] + d.imag() * gy[1]) / (kTwoPi * std::norm(d));
    });
    add_volume(j.gx, [&](Complex y) {
      const auto gy = gv(y);
      const Complex d = x - y;
      const double r2 = std::norm(d);
      const double kxx = (r2 - 2 * d.real() * d.real()) / (kTwoPi * r2 * r2);
      const double kxy = -2 * d.real() * d.imag() / (kTwoPi * r2 * r2);
      return kxx * gy[0] + kxy * gy[1];
    });
    add_volume(j.gy, [&](Complex y) {
      const auto gy = gv(y);
      const Complex d = x - y;
      const double r2 = std::norm(d);
      const double kyy = (r2 - 2 * d.imag() * d.imag()) / (kTwoPi * r2 * r2);
      const double kxy = -2 * d.real() * d.imag() / (kTwoPi * r2 * r2);
      return kxy * gy[0] + kyy * gy[1];
    });
    for (int side = 1; side <= 2; ++side) {
      const double kk = side == 1 ? k1 : k2;
      if (kk == 1.0) continue;
      const double w = (std::isinf(kk) ? 0.0 : 1.0 / kk) - 1.0;
      const int M = 512;
      const Complex c = g.center(side);
      const double r = g.radius(side);
      CompensatedSum<double> v, gx, gyv;
      for (int i = 0; i < M; ++i) {
        const Complex nu = std::polar(1.0, kTwoPi * i / M);
        const Complex y = c + r * nu;
        const auto gval = gv(y);
        const double gn = gval[0] * nu.real() + gval[1] * nu.imag();
        const Complex d = x - y;
        v.add(std::log(std::abs(d)) / kTwoPi * gn);
        gx.add(d.real() / (kTwoPi * std::norm(d)) * gn);
        gyv.add(d.imag() / (kTwoPi * std::norm(d)) * gn);
      }
      const double ws = w * kTwoPi * r / M;
      j.v += v.value() * ws;
      j.gx += gx.value() * ws;
      j.gy += gyv.value() * ws;
    }
    return j;
  }
  throw DomainError("newtonian_potential: divergence source must carry f, g, or a closed-form potential");
}

double newtonian_potential(const SourceSpec& src, const DiskPair& g, double k1, double k2, Complex x) {
  return newtonian_potential_jet(src, g, k1, k2, x).v;
}

// ---------------------------------------------------------------------------
// Corrector
// ---------------------------------------------------------------------------

namespace {

// exp(-1/(1-s^2)) on |s| < 1 with two derivatives.
void bump_eval(double s, double& b, double& b1, double& b2) {
  const double u = 1.0 - s * s;
  if (u <= 0) {
    b = b1 = b2 = 0;
    return;
  }
  b = std::exp(-1.0 / u);
  const double d = -2.0 * s / (u * u);
  b1 = b * d;
  const double dd = -2.0 / (u * u) - 8.0 * s * s / (u * u * u);
  b2 = b * (d * d + dd);
}

double angdiff(double a, double b) {
  double d = a - b;
  while (d > kPi) d -= kTwoPi;
  while (d < -kPi) d += kTwoPi;
  return d;
}

}  // namespace

struct Corrector::RadialModes {
  int Q = 192;
  int Mtheta = 512;
  std::vector<Complex> n_modes;  // modes of n(theta) = m(t,theta) t on (0, rA)
  struct Node {
    double t = 0, w = 0;
    std::vector<Complex> m_modes;
  };
  std::vector<Node> nodes;  // region B quadrature
  double rA = 0, rB = 0;
};

Corrector::Corrector(const DiskPair& g, int side, double k) : g_(g), side_(side), k_(k) {
  if (side != 1 && side != 2) throw DomainError("Corrector: side must be 1 or 2");
  if (k == 0.0) throw DomainError("Corrector: insulating inclusion (k = 0) admits no interior source");
  if (!(k > 0)) throw DomainError("Corrector: conductivity must be positive (inf allowed)");
  r_ = g.radius(side);
  cx_ = side == 1 ? g.c1 : g.c2;
  width_ = std::min(g.eps, r_) / 2.0;
  // Normalization r int Theta(theta) cos(theta) dtheta = 1 fixes the amplitude.
  std::vector<double> qx, qw;
  gauss_legendre(64, qx, qw);
  const double half = kPi / 2.0 - kBumpHalfWidthTrim;
  const double thc = side == 1 ? kPi : 0.0;
  double acc = 0;
  for (std::size_t i = 0; i < qx.size(); ++i) {
    double b, b1, b2;
    bump_eval(qx[i], b, b1, b2);
    acc += qw[i] * b * std::cos(thc + half * qx[i]);
  }
  acc *= half;
  amp_ = 1.0 / (r_ * acc);  // negative on side 1 where cos < 0 on the support
  build_modes();
}

double Corrector::theta_cut(double theta) const {
  const double half = kPi / 2.0 - kBumpHalfWidthTrim;
  const double thc = side_ == 1 ? kPi : 0.0;
  double b, b1, b2;
  bump_eval(angdiff(theta, thc) / half, b, b1, b2);
  return amp_ * b;
}

Jet2 Corrector::theta_jet(Complex local) const {
  const double half = kPi / 2.0 - kBumpHalfWidthTrim;
  const double thc = side_ == 1 ? kPi : 0.0;
  const double th = std::atan2(local.imag(), local.real());
  const double s = angdiff(th, thc) / half;
  double b, b1, b2;
  bump_eval(s, b, b1, b2);
  if (b == 0.0) return Jet2{};
  const double x = local.real(), y = local.imag();
  const double r2 = x * x + y * y;
  Jet2 tj;  // theta as a jet
  tj.v = th;
  tj.gx = -y / r2;
  tj.gy = x / r2;
  tj.hxx = 2 * x * y / (r2 * r2);
  tj.hyy = -2 * x * y / (r2 * r2);
  tj.hxy = (y * y - x * x) / (r2 * r2);
  return jet_compose(amp_ * b, amp_ * b1 / half, amp_ * b2 / (half * half), tj);
}

Jet2 Corrector::radial_jet(Complex local) const {
  const double r = std::abs(local);
  if (r <= r_) return Jet2::constant(1.0);
  if (r >= r_ + width_) return Jet2{};
  const double t = (r - r_) / width_;
  const double p = 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
  const double p1 = -30.0 * t * t * (1.0 - t) * (1.0 - t) / width_;
  const double p2 = -(60.0 * t - 180.0 * t * t + 120.0 * t * t * t) / (width_ * width_);
  Jet2 rj;  // r as a jet
  rj.v = r;
  rj.gx = local.real() / r;
  rj.gy = local.imag() / r;
  rj.hxx = local.imag() * local.imag() / (r * r * r);
  rj.hyy = local.real() * local.real() / (r * r * r);
  rj.hxy = -local.real() * local.imag() / (r * r * r);
  return jet_compose(p, p1, p2, rj);
}

Jet2 Corrector::profile_jet(Complex local) const {
  const double r = std::abs(local);
  Jet2 xj;
  xj.v = local.real();
  xj.gx = 1.0;
  const bool infinite = std::isinf(k_);
  if (r <= r_) {
    if (infinite) return Jet2{};
    return xj * (1.0 / k_);
  }
  const double alpha = infinite ? 0.5 : (k_ + 1.0) / (2.0 * k_);
  const double gamma = infinite ? -r_ * r_ / 2.0 : -(k_ - 1.0) * r_ * r_ / (2.0 * k_);
  const double r2 = r * r;
  Jet2 r2j;
  r2j.v = r2;
  r2j.gx = 2 * local.real();
  r2j.gy = 2 * local.imag();
  r2j.hxx = 2;
  r2j.hyy = 2;
  const Jet2 inv = jet_compose(1.0 / r2, -1.0 / (r2 * r2), 2.0 / (r2 * r2 * r2), r2j);
  return xj * alpha + (xj * inv) * gamma;
}

Jet2 Corrector::value_jet(Complex x) const {
  const Complex local = x - Complex(cx_, 0.0);
  const double r = std::abs(local);
  if (r >= r_ + width_ || r < 1e-300) return Jet2{};
  if (theta_cut(std::atan2(local.imag(), local.real())) == 0.0) return Jet2{};
  return theta_jet(local) * radial_jet(local) * profile_jet(local);
}

std::array<double, 2> Corrector::vector_field(Complex x) const {
  const Complex local = x - Complex(cx_, 0.0);
  const double r = std::abs(local);
  if (r <= r_) {
    // v = k grad V with V = Theta x/k; the k cancels and the limit k = inf is finite.
    const Jet2 th = theta_jet(local);
    return {th.v + local.real() * th.gx, local.real() * th.gy};
  }
  const Jet2 j = value_jet(x);
  return {j.gx, j.gy};
}

double Corrector::div_v(Complex x) const {
  const Complex local = x - Complex(cx_, 0.0);
  const double r = std::abs(local);
  if (r >= r_ + width_) return 0.0;
  if (r <= r_) {
    // div v = k Delta V = Delta(Theta(theta) x), independent of k.
    const Jet2 th = theta_jet(local);
    Jet2 xj;
    xj.v = local.real();
    xj.gx = 1.0;
    return (th * xj).laplacian();
  }
  return value_jet(x).laplacian();
}

double Corrector::poisson_density(Complex x) const {
  const Complex local = x - Complex(cx_, 0.0);
  const double r = std::abs(local);
  if (r >= r_ + width_) return 0.0;
  if (r <= r_) return std::isinf(k_) ? 0.0 : div_v(x) / k_;
  return value_jet(x).laplacian();
}

void Corrector::build_modes() {
  {
    auto md = std::make_shared<RadialModes>();
    md->rA = r_;
    md->rB = r_ + width_;
    const int Mt = md->Mtheta;
    {
      // interior density m = n(theta)/t; sample n at one radius
      const double probe = 0.5 * r_;
      std::vector<Complex> w(Mt);
      for (int j = 0; j < Mt; ++j)
        w[j] = poisson_density(Complex(cx_, 0.0) + std::polar(probe, kTwoPi * j / Mt)) * probe;
      fft(w);
      md->n_modes.resize(md->Q + 1);
      for (int q = 0; q <= md->Q; ++q) md->n_modes[q] = w[q] / static_cast<double>(Mt);
    }
    std::vector<double> qx, qw;
    gauss_legendre(16, qx, qw);
    const int panels = 8;
    for (int p = 0; p < panels; ++p) {
      const double a = md->rA + width_ * p / panels;
      const double b = md->rA + width_ * (p + 1) / panels;
      for (std::size_t i = 0; i < qx.size(); ++i) {
        RadialModes::Node node;
        node.t = (a + b) / 2 + (b - a) / 2 * qx[i];
        node.w = (b - a) / 2 * qw[i];
        std::vector<Complex> w(Mt);
        for (int j = 0; j < Mt; ++j)
          w[j] = poisson_density(Complex(cx_, 0.0) + std::polar(node.t, kTwoPi * j / Mt));
        fft(w);
        node.m_modes.resize(md->Q + 1);
        for (int q = 0; q <= md->Q; ++q) node.m_modes[q] = w[q] / static_cast<double>(Mt);
        md->nodes.push_back(std::move(node));
      }
    }
    modes_ = md;
  }
}

Jet2 Corrector::potential_jet(Complex x) const {
  const auto& md = *modes_;

  const Complex local = x - Complex(cx_, 0.0);
  double s = std::abs(local);
  if (s < 1e-12 * r_) s = 1e-12 * r_;
  const double th = std::atan2(local.imag(), local.real());
  const int Q = md.Q;
  std::vector<Complex> Wq(Q + 1, Complex(0, 0)), dWq(Q + 1, Complex(0, 0));
  std::vector<Complex> mq(Q + 1, Complex(0, 0));

  // region A: t m_q(t) = n_q constant on (0, rA)
  for (int q = 0; q <= Q; ++q) {
    const Complex nq = md.n_modes[q];
    if (q == 0) {
      if (s >= md.rA) {
        Wq[0] += nq * md.rA * std::log(s);
        dWq[0] += nq * md.rA / s;
      } else {
        Wq[0] += nq * (md.rA * std::log(md.rA) - md.rA + s);
        dWq[0] += nq;
      }
    } else {
      const double qq = q;
      if (s >= md.rA) {
        const double below = std::pow(md.rA / s, qq) * md.rA / (qq + 1);
        Wq[q] += -nq / (2 * qq) * below;
        dWq[q] += nq / (2 * s) * below;  // -(1/2q) d/ds of s^{-q}-kernel part
      } else {
        const double below = s / (qq + 1);
        const double above =
            q == 1 ? s * std::log(md.rA / s)
                   : (std::pow(s, qq) * std::pow(md.rA, 1 - qq) - s) / (1 - qq);
        Wq[q] += -nq / (2 * qq) * (below + above);
        dWq[q] += -nq * (above - below) / (2 * s);
      }
    }
    if (s <= md.rA) mq[q] += md.n_modes[q] / s;
  }

  auto add_node = [&](double t, double w, const std::vector<Complex>& modes) {
    for (int q = 0; q <= Q; ++q) {
      const Complex m = modes[q];
      if (q == 0) {
        if (t <= s) {
          Wq[0] += w * t * m * std::log(s);
          dWq[0] += w * t * m / s;
        } else {
          Wq[0] += w * t * m * std::log(t);
        }
      } else {
        const double qq = q;
        if (t <= s) {
          const Complex part = std::pow(t / s, qq) * t * m * w;
          Wq[q] += -part / (2 * qq);
          dWq[q] += part / (2 * s);
        } else {
          const Complex part = std::pow(s / t, qq) * t * m * w;
          Wq[q] += -part / (2 * qq);
          dWq[q] += -part / (2 * s);
        }
      }
    }
  };

  if (s <= md.rA || s >= md.rB) {
    for (const auto& node : md.nodes) add_node(node.t, node.w, node.m_modes);
  } else {
    // s splits region B; integrate both halves with fresh rows
    std::vector<double> qx, qw;
    gauss_legendre(16, qx, qw);
    for (int hside = 0; hside < 2; ++hside) {
      const double a = hside == 0 ? md.rA : s;
      const double b = hside == 0 ? s : md.rB;
      const int panels = 6;
      for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        for (std::size_t i = 0; i < qx.size(); ++i) {
          const double t = (pa + pb) / 2 + (pb - pa) / 2 * qx[i];
          const double w = (pb - pa) / 2 * qw[i];
          std::vector<Complex> row(md.Mtheta);
          for (int j = 0; j < md.Mtheta; ++j)
            row[j] = poisson_density(Complex(cx_, 0.0) + std::polar(t, kTwoPi * j / md.Mtheta));
          fft(row);
          std::vector<Complex> modes(Q + 1);
          for (int q = 0; q <= Q; ++q) modes[q] = row[q] / static_cast<double>(md.Mtheta);
          add_node(t, w, modes);
        }
      }
    }
    std::vector<Complex> row(md.Mtheta);
    for (int j = 0; j < md.Mtheta; ++j)
      row[j] = poisson_density(Complex(cx_, 0.0) + std::polar(s, kTwoPi * j / md.Mtheta));
    fft(row);
    for (int q = 0; q <= Q; ++q) mq[q] += row[q] / static_cast<double>(md.Mtheta);
  }

  CompensatedSum<double> v, Wr, Wth, Wrth, Wthth;
  double msum = 0;
  for (int q = 0; q <= Q; ++q) {
    const Complex e = std::polar(1.0, q * th);
    const double mult = q == 0 ? 1.0 : 2.0;
    v.add(mult * (Wq[q] * e).real());
    Wr.add(mult * (dWq[q] * e).real());
    if (q > 0) {
      Wth.add(2.0 * (Complex(0, q) * Wq[q] * e).real());
      Wrth.add(2.0 * (Complex(0, q) * dWq[q] * e).real());
      Wthth.add(-2.0 * q * q * (Wq[q] * e).real());
    }
    msum += mult * (mq[q] * e).real();
  }
  const double ur = Wr.value(), uth = Wth.value();
  const double urth = Wrth.value(), uthth = Wthth.value();
  // Poisson closure for the remaining Hessian entry: u_rr = m - u_r/s - u_thth/s^2.
  const double urr = msum - ur / s - uthth / (s * s);
  const double c = std::cos(th), sn = std::sin(th);
  Jet2 out;
  out.v = v.value();
  out.gx = ur * c - uth * sn / s;
  out.gy = ur * sn + uth * c / s;
  out.hxx = urr * c * c - 2 * urth * c * sn / s + uthth * sn * sn / (s * s) + ur * sn * sn / s +
            2 * uth * c * sn / (s * s);
  out.hyy = urr * sn * sn + 2 * urth * c * sn / s + uthth * c * c / (s * s) + ur * c * c / s -
            2 * uth * c * sn / (s * s);
  out.hxy = urr * c * sn + urth * (c * c - sn * sn) / s - uthth * c * sn / (s * s) - ur * c * sn / s -
            uth * (c * c - sn * sn) / (s * s);
  return out;
}

double Corrector::divergence_integral() const {
  // Interior div v = n_div(theta)/t, so int_D div v = r int n_div dtheta.
  std::vector<double> qx, qw;
  gauss_legendre(96, qx, qw);
  const double half = kPi / 2.0 - kBumpHalfWidthTrim;
  const double thc = side_ == 1 ? kPi : 0.0;
  const double t0 = 0.5 * r_;
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < qx.size(); ++i) {
    const double th = thc + half * qx[i];
    acc.add(qw[i] * div_v(Complex(cx_, 0.0) + std::polar(t0, th)) * t0);
  }
  return acc.value() * half * r_;
}

CorrectorValue corrector_field(const DiskPair& g, int side, double k, Complex x) {
  const Corrector c(g, side, k);
  return {c.value(x), c.vector_field(x)};
}

Decomposition source_decompose(const DiskPair& g, double k1, double k2, const SourceSpec& src) {
  if (src.is_harmonic_background()) return Decomposition{};
  Decomposition d;
  d.w1 = inclusion_integral(g, src, 1);
  d.w2 = inclusion_integral(g, src, 2);
  double i11 = 0, i22 = 0;
  if (d.w1 != 0.0) {
    Corrector c1(g, 1, k1);
    if (c1.support_outer_radius() > std::abs(g.c2 - g.c1) - g.r2)
      throw GeometryError("source_decompose: corrector support collides with the other disk");
    i11 = c1.divergence_integral();
  }
  if (d.w2 != 0.0) {
    Corrector c2(g, 2, k2);
    if (c2.support_outer_radius() > std::abs(g.c2 - g.c1) - g.r1)
      throw GeometryError("source_decompose: corrector support collides with the other disk");
    i22 = c2.divergence_integral();
  }
  d.residual_integral_D1 = d.w1 - d.w1 * i11;
  d.residual_integral_D2 = d.w2 - d.w2 * i22;
  return d;
}

double inclusion_integral(const DiskPair& g, const SourceSpec& src, int side) {
  if (src.is_harmonic_background()) return 0.0;
  const auto& ds = std::get<DivergenceSource>(src.value);
  if (side == 1 && ds.integral_D1) return *ds.integral_D1;
  if (side == 2 && ds.integral_D2) return *ds.integral_D2;
  const Complex c = g.center(side);
  const double r = g.radius(side);
  if (ds.g && !ds.f) {
    const int M = 1024;
    CompensatedSum<double> acc;
    for (int i = 0; i < M; ++i) {
      const Complex nu = std::polar(1.0, kTwoPi * i / M);
      const auto gv = ds.g(c + r * nu);
      acc.add(gv[0] * nu.real() + gv[1] * nu.imag());
    }
    return acc.value() * kTwoPi * r / M;
  }
  if (!ds.f) throw DomainError("inclusion_integral: source carries neither f nor g");
  std::vector<double> qx, qw;
  gauss_legendre(48, qx, qw);
  CompensatedSum<double> acc;
  const int Mth = 192;
  for (std::size_t i = 0; i < qx.size(); ++i) {
    const double t = r * (qx[i] + 1) / 2;
    const double wt = r / 2 * qw[i] * t;
    for (int j = 0; j < Mth; ++j) acc.add(wt * kTwoPi / Mth * ds.f(c + std::polar(t, kTwoPi * j / Mth)));
  }
  return acc.value();
}

}  // namespace npduet
