#include "npduet/bie_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "npduet/errors.hpp"

namespace npduet {

namespace {

// One circle's nodes from a parameterization z(t), t_i = 2 pi i / N.
struct CircleNodes {
  std::vector<Complex> z;
  std::vector<double> t;
  std::vector<double> speed;  // |dz/dt|
};

CircleNodes uniform_nodes(const NystromSystem::CircleSpec& cs, int N) {
  CircleNodes out;
  out.z.resize(N);
  out.t.resize(N);
  out.speed.assign(N, cs.radius);
  for (int i = 0; i < N; ++i) {
    out.t[i] = kTwoPi * i / N;
    out.z[i] = cs.center + cs.radius * std::polar(1.0, out.t[i]);
  }
  return out;
}

// Uniform in the Mobius image angle: z(t) = T^-1(R_img e^{it}), snapped back
// onto the exact circle to remove roundoff drift.
CircleNodes conformal_nodes(const DiskPair& g, const NystromSystem::CircleSpec& cs, double R_img, int N) {
  CircleNodes out;
  out.z.resize(N);
  out.t.resize(N);
  out.speed.resize(N);
  for (int i = 0; i < N; ++i) {
    out.t[i] = kTwoPi * i / N;
    const Complex zeta = std::polar(R_img, out.t[i]);
    const Complex z = g.beta / (zeta - 1.0);
    out.z[i] = cs.center + cs.radius * (z - cs.center) / std::abs(z - cs.center);
    out.speed[i] = g.beta * R_img / std::norm(zeta - 1.0);
  }
  return out;
}

NystromSystem assemble_circles(const std::array<NystromSystem::CircleSpec, 2>& circles,
                               const std::array<CircleNodes, 2>& param, int N, NodeLayout layout) {
  if (N < 16 || N % 2 != 0) throw DomainError("assemble: nodes_per_circle must be even and >= 16");
  NystromSystem sys;
  sys.circles = circles;
  sys.nodes_per_circle = N;
  sys.layout = layout;
  const int M = 2 * N;
  sys.nodes.resize(M);
  sys.normals.resize(M);
  sys.angles.resize(M);
  sys.speeds.resize(M);
  sys.weights.resize(M);
  for (int c = 0; c < 2; ++c) {
    const auto& cs = circles[c];
    for (int i = 0; i < N; ++i) {
      const int idx = c * N + i;
      sys.nodes[idx] = param[c].z[i];
      sys.angles[idx] = param[c].t[i];
      sys.speeds[idx] = param[c].speed[i];
      sys.normals[idx] = cs.orient * (param[c].z[i] - cs.center) / cs.radius;
      sys.weights[idx] = param[c].speed[i] * kTwoPi / N;
    }
  }

  sys.K.setZero(M, M);
  sys.S.setZero(M, M);

  // K: exact constant kernel on the diagonal blocks, trapezoid elsewhere.
  for (int i = 0; i < M; ++i) {
    const int ci = sys.circle_of(i);
    for (int j = 0; j < M; ++j) {
      double kern;
      if (sys.circle_of(j) == ci) {
        kern = circles[ci].orient / (2.0 * circles[ci].radius);
      } else {
        const Complex d = sys.nodes[i] - sys.nodes[j];
        kern = (d.real() * sys.normals[i].real() + d.imag() * sys.normals[i].imag()) / std::norm(d);
      }
      sys.K(i, j) = kern / kTwoPi * sys.weights[j];
    }
  }

  // S diagonal blocks: Kussmaul-Martensen splitting in the parameter. The
  // singular factor ln|2 sin((t-s)/2)| carries the exact Fourier symbol
  // -1/(2|q|); the remainder is a smooth periodic kernel for the trapezoid.
  std::vector<double> m1(N);
  for (int m = 0; m < N; ++m) {
    double acc = 0;
    for (int q = 1; q < N / 2; ++q) acc += std::cos(kTwoPi * q * m / N) / q;
    acc += std::cos(kPi * m) / N;  // Nyquist mode, single weight
    m1[m] = -acc / N;
  }
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < N; ++i) {
      const int gi = c * N + i;
      for (int k = 0; k < N; ++k) {
        const int gk = c * N + k;
        double smooth;
        if (i == k) {
          smooth = std::log(sys.speeds[gk]);
        } else {
          const double chord = std::abs(sys.nodes[gi] - sys.nodes[gk]);
          const double sinf = std::abs(2.0 * std::sin((sys.angles[gi] - sys.angles[gk]) / 2.0));
          smooth = std::log(chord / sinf);
        }
        sys.S(gi, gk) = (m1[(i - k + N) % N] + smooth / N) * sys.speeds[gk];
      }
    }
  }
  // S off-diagonal blocks: smooth log kernel, trapezoid.
  for (int i = 0; i < M; ++i) {
    const int ci = sys.circle_of(i);
    for (int j = 0; j < M; ++j) {
      if (sys.circle_of(j) == ci) continue;
      sys.S(i, j) = std::log(std::abs(sys.nodes[i] - sys.nodes[j])) / kTwoPi * sys.weights[j];
    }
  }
  return sys;
}

}  // namespace

NystromSystem assemble(const DiskPair& g, int nodes_per_circle, NodeLayout layout) {
  if (g.eps < 1e-5 * std::min(g.r1, g.r2))
    throw AccuracyError("assemble: eps below the oracle floor 1e-5*min(r1,r2); trapezoid accuracy is not honest there");
  std::array<NystromSystem::CircleSpec, 2> cs = {
      NystromSystem::CircleSpec{Complex(g.c1, 0.0), g.r1, +1.0},
      NystromSystem::CircleSpec{Complex(g.c2, 0.0), g.r2, +1.0},
  };
  std::array<CircleNodes, 2> param;
  if (layout == NodeLayout::uniform) {
    param = {uniform_nodes(cs[0], nodes_per_circle), uniform_nodes(cs[1], nodes_per_circle)};
  } else {
    param = {conformal_nodes(g, cs[0], g.R1, nodes_per_circle),
             conformal_nodes(g, cs[1], g.R2, nodes_per_circle)};
  }
  return assemble_circles(cs, param, nodes_per_circle, layout);
}

NystromSystem assemble_concentric(const DiskPair& g, int nodes_per_circle) {
  std::array<NystromSystem::CircleSpec, 2> cs = {
      NystromSystem::CircleSpec{Complex(0.0, 0.0), g.R1, -1.0},
      NystromSystem::CircleSpec{Complex(0.0, 0.0), g.R2, +1.0},
  };
  std::array<CircleNodes, 2> param = {uniform_nodes(cs[0], nodes_per_circle),
                                      uniform_nodes(cs[1], nodes_per_circle)};
  return assemble_circles(cs, param, nodes_per_circle, NodeLayout::uniform);
}

double symmetrization_residual(const NystromSystem& sys) {
  const Eigen::MatrixXd B = sys.weights.asDiagonal() * sys.S;
  const Eigen::MatrixXd R = B * sys.K - sys.K.transpose() * B;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(R);
  return svd.singularValues()(0);
}

Complex oracle_inner_product(const NystromSystem& sys, const std::vector<Complex>& phi,
                             const std::vector<Complex>& psi) {
  const int M = sys.size();
  if (static_cast<int>(phi.size()) != M || static_cast<int>(psi.size()) != M)
    throw DomainError("oracle_inner_product: density size mismatch");
  Eigen::VectorXd pr(M), pi(M);
  for (int i = 0; i < M; ++i) {
    pr(i) = psi[i].real();
    pi(i) = psi[i].imag();
  }
  const Eigen::VectorXd sr = sys.S * pr;
  const Eigen::VectorXd si = sys.S * pi;
  CompensatedComplexSum acc;
  for (int i = 0; i < M; ++i) acc.add(-sys.weights(i) * phi[i] * std::conj(Complex(sr(i), si(i))));
  return acc.value();
}

namespace {

Eigen::VectorXd solve_lambda_system(const NystromSystem& sys, double lambda1, double lambda2,
                                    const Eigen::VectorXd& eta) {
  const int M = sys.size();
  const int N = sys.nodes_per_circle;
  Eigen::MatrixXd A = -sys.K;
  for (int i = 0; i < M; ++i) A(i, i) += (i < N ? lambda1 : lambda2);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::VectorXd phi = lu.solve(eta);
  const double resid = (A * phi - eta).norm();
  if (!phi.allFinite() || resid > 1e-8 * (1.0 + eta.norm()))
    throw LinalgError("oracle_solve: dense solve failed or is badly conditioned");
  return phi;
}

}  // namespace

Eigen::VectorXd oracle_solve(const NystromSystem& sys, double lambda1, double lambda2,
                             const Eigen::VectorXd& eta) {
  const int M = sys.size();
  const int N = sys.nodes_per_circle;
  if (eta.size() != M) throw DomainError("oracle_solve: eta size mismatch");
  const double scale = eta.cwiseAbs().maxCoeff() + 1e-300;
  for (int c = 0; c < 2; ++c) {
    double mean = 0, wsum = 0;
    for (int i = c * N; i < (c + 1) * N; ++i) {
      mean += sys.weights(i) * eta(i);
      wsum += sys.weights(i);
    }
    if (std::abs(mean / wsum) > 1e-8 * scale) {
      std::ostringstream os;
      os << "oracle_solve: eta has nonzero quadrature mean " << mean / wsum << " on circle " << c + 1;
      throw CompatibilityError(os.str());
    }
  }
  // Deflated solve on the zero-quadrature-mean subspace: the full-space system
  // is nearly singular against E_{1/2} when a lambda approaches +-1/2, so the
  // restriction is imposed directly through a bordered system with one
  // multiplier per circle (the discrete counterpart of working on H_0^{-1/2}).
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M + 2, M + 2);
  A.topLeftCorner(M, M) = -sys.K;
  for (int i = 0; i < M; ++i) A(i, i) += (i < N ? lambda1 : lambda2);
  for (int c = 0; c < 2; ++c) {
    for (int i = c * N; i < (c + 1) * N; ++i) {
      A(i, M + c) = 1.0;                 // per-circle constant added to the equation
      A(M + c, i) = sys.weights(i);      // quadrature-mass constraint
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(M + 2);
  rhs.head(M) = eta;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite() || (A * sol - rhs).norm() > 1e-8 * (1.0 + eta.norm()))
    throw LinalgError("oracle_solve: bordered solve failed");
  // The multipliers absorb the quadrature-level failure of K to preserve the
  // zero-mean subspace; they decay spectrally in N (5e-7 at N=64 for a
  // moderate gap) and anything larger signals an unresolved system.
  if (std::max(std::abs(sol(M)), std::abs(sol(M + 1))) > 1e-5 * (1.0 + eta.cwiseAbs().maxCoeff()))
    throw LinalgError("oracle_solve: deflation multipliers exceed tolerance");
  return sol.head(M);
}

Eigen::VectorXd oracle_solve_raw(const NystromSystem& sys, double lambda1, double lambda2,
                                 const Eigen::VectorXd& eta) {
  if (eta.size() != sys.size()) throw DomainError("oracle_solve_raw: eta size mismatch");
  return solve_lambda_system(sys, lambda1, lambda2, eta);
}

double oracle_field(const NystromSystem& sys, const Eigen::VectorXd& phi,
                    const std::function<double(Complex)>& background, Complex x, FieldAccuracy* accuracy) {
  const int M = sys.size();
  if (phi.size() != M) throw DomainError("oracle_field: density size mismatch");
  if (accuracy) *accuracy = FieldAccuracy{};
  for (int c = 0; c < 2; ++c) {
    const auto& cs = sys.circles[c];
    const double dist = std::abs(std::abs(x - cs.center) - cs.radius);
    double h = 0;  // largest local node spacing on this circle
    for (int i = c * sys.nodes_per_circle; i < (c + 1) * sys.nodes_per_circle; ++i)
      h = std::max(h, sys.weights(i));
    if (dist < h && accuracy) {
      accuracy->near_boundary = true;
      // Trapezoid error of a near-boundary single layer decays like exp(-2 pi dist/h).
      accuracy->estimated_error =
          std::max(accuracy->estimated_error, phi.cwiseAbs().maxCoeff() * std::exp(-kTwoPi * dist / h));
    }
  }
  CompensatedSum<double> acc;
  for (int i = 0; i < M; ++i)
    acc.add(std::log(std::abs(x - sys.nodes[i])) / kTwoPi * phi(i) * sys.weights(i));
  return acc.value() + (background ? background(x) : 0.0);
}

Complex single_layer_at(const NystromSystem& sys, const std::vector<Complex>& phi, Complex x) {
  const int M = sys.size();
  if (static_cast<int>(phi.size()) != M) throw DomainError("single_layer_at: density size mismatch");
  CompensatedComplexSum acc;
  for (int i = 0; i < M; ++i)
    acc.add(std::log(std::abs(x - sys.nodes[i])) / kTwoPi * phi[i] * sys.weights(i));
  return acc.value();
}

Complex apply_K_at(const NystromSystem& sys, const std::vector<Complex>& phi, Complex x, int circle_index) {
  const int M = sys.size();
  if (static_cast<int>(phi.size()) != M) throw DomainError("apply_K_at: density size mismatch");
  if (circle_index != 0 && circle_index != 1) throw DomainError("apply_K_at: circle_index must be 0 or 1");
  const auto& cs = sys.circles[circle_index];
  const Complex nu = cs.orient * (x - cs.center) / std::abs(x - cs.center);
  CompensatedComplexSum acc;
  for (int i = 0; i < M; ++i) {
    double kern;
    if (sys.circle_of(i) == circle_index) {
      kern = cs.orient / (2.0 * cs.radius);
    } else {
      const Complex d = x - sys.nodes[i];
      kern = (d.real() * nu.real() + d.imag() * nu.imag()) / std::norm(d);
    }
    acc.add(kern / kTwoPi * sys.weights(i) * phi[i]);
  }
  return acc.value();
}

std::vector<EigenCluster> oracle_spectrum(const NystromSystem& sys, int count, double cluster_tol) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(sys.K, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw LinalgError("oracle_spectrum: eigensolver failed");
  std::vector<double> vals;
  vals.reserve(sys.size());
  for (int i = 0; i < sys.size(); ++i) vals.push_back(es.eigenvalues()(i).real());
  std::sort(vals.begin(), vals.end());
  std::vector<EigenCluster> clusters;
  for (std::size_t i = 0; i < vals.size();) {
    std::size_t j = i + 1;
    double sum = vals[i];
    while (j < vals.size() && vals[j] - vals[j - 1] <= cluster_tol) {
      sum += vals[j];
      ++j;
    }
    clusters.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const EigenCluster& a, const EigenCluster& b) { return std::abs(a.value) > std::abs(b.value); });
  if (count > 0 && static_cast<int>(clusters.size()) > count) clusters.resize(count);
  return clusters;
}

std::vector<EigenPair> oracle_eigenpairs(const NystromSystem& sys) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(sys.K, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) throw LinalgError("oracle_eigenpairs: eigensolver failed");
  std::vector<EigenPair> out(sys.size());
  for (int i = 0; i < sys.size(); ++i) {
    out[i].value = es.eigenvalues()(i).real();
    out[i].vector = es.eigenvectors().col(i).real();
  }
  std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
  return out;
}

}  // namespace npduet
