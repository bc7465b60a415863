#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "npduet/harmonic_data.hpp"
#include "npduet/numeric.hpp"

namespace npduet {

/// Parses "x", "x^2-y^2", "2*x*y + x", ... into the coefficient list b with
/// H = Re sum b[m] z^m; rejects non-harmonic polynomials symbolically.
std::vector<Complex> parse_harmonic_polynomial(const std::string& text);

struct GridSpec {
  double x0 = -3, x1 = 3, y0 = -2, y1 = 2;
  int n = 100;  // samples per axis
};

struct DiskBumpSpec {
  double x0 = 0, y0 = 0;
  double radius = 0.1;
  double amplitude = 1.0;
};

struct RunConfig {
  double r1 = 1.0, r2 = 1.0;
  std::optional<double> eps;
  std::vector<double> eps_list;
  std::string k1 = "2", k2 = "2";   // nonneg real or the literals "inf", "0"
  std::string source = "x";         // harmonic polynomial text
  std::optional<DiskBumpSpec> bump; // divergence-source alternative
  int nmax = 256;
  double tol = 1e-10;
  double far_anchor = std::numeric_limits<double>::infinity();  // default: exact limit
  int nodes = 256;                  // oracle nodes per circle
  int order = 1;                    // sweep derivative order
  std::string out_path;             // empty = stdout
  std::string format = "csv";      // csv | json
  GridSpec grid;
};

double parse_conductivity(const std::string& text);

/// Entry point used by the binary; argv excludes the program name.
int run_cli(const std::vector<std::string>& argv);

}  // namespace npduet
