#pragma once

#include <complex>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace npduet {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Explicit sentinel for the point at infinity (T and T^-1 each have one pole).
inline const Complex kPointAtInfinity{std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity()};

inline bool is_point_at_infinity(Complex z) {
  return std::isinf(z.real()) || std::isinf(z.imag());
}

// Neumaier compensated accumulator; exact enough for series with ~1e4 O(1)-ratio terms.
template <class T>
class CompensatedSum {
public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

private:
  T sum_{};
  T comp_{};
};

// Complex version sums real and imaginary parts independently.
class CompensatedComplexSum {
public:
  void add(Complex z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

// In-place radix-2 FFT, forward: X_k = sum_j x_j e^{-2pi i jk/n}. n must be a power of two.
void fft(std::vector<Complex>& a, bool inverse = false);

// Second-order scalar jet: value, gradient, Hessian at a point in R^2.
struct Jet2 {
  double v = 0, gx = 0, gy = 0, hxx = 0, hxy = 0, hyy = 0;

  Jet2 operator+(const Jet2& o) const { return {v + o.v, gx + o.gx, gy + o.gy, hxx + o.hxx, hxy + o.hxy, hyy + o.hyy}; }
  Jet2 operator-(const Jet2& o) const { return {v - o.v, gx - o.gx, gy - o.gy, hxx - o.hxx, hxy - o.hxy, hyy - o.hyy}; }
  Jet2 operator*(double s) const { return {v * s, gx * s, gy * s, hxx * s, hxy * s, hyy * s}; }
  Jet2 operator*(const Jet2& o) const {
    return {v * o.v,
            gx * o.v + v * o.gx,
            gy * o.v + v * o.gy,
            hxx * o.v + 2 * gx * o.gx + v * o.hxx,
            hxy * o.v + gx * o.gy + gy * o.gx + v * o.hxy,
            hyy * o.v + 2 * gy * o.gy + v * o.hyy};
  }
  Jet2& operator+=(const Jet2& o) { return *this = *this + o; }

  static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
  double laplacian() const { return hxx + hyy; }
};

// f(u) with u a jet and f given by value and two derivatives at u.v.
inline Jet2 jet_compose(double f, double fp, double fpp, const Jet2& u) {
  return {f,
          fp * u.gx,
          fp * u.gy,
          fpp * u.gx * u.gx + fp * u.hxx,
          fpp * u.gx * u.gy + fp * u.hxy,
          fpp * u.gy * u.gy + fp * u.hyy};
}

// Ordinary least squares of y against x; returns (slope, intercept, r^2).
struct LineFit {
  double slope = 0, intercept = 0, r_squared = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace npduet
