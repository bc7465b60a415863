#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "npduet/geometry.hpp"
#include "npduet/numeric.hpp"

namespace npduet {

/// Dense Nystrom discretization of the NP system on a pair of circles.
///
/// K maps density samples to (K* density) samples; S maps density samples to
/// single-layer samples. Diagonal blocks of K use the exact circle identity
/// (x-y).nu_x/|x-y|^2 = orient/(2r); diagonal blocks of S use the exact
/// Fourier symbol of the log kernel on a circle (product quadrature), so both
/// are spectrally accurate. Off-diagonal blocks are smooth and use the plain
/// trapezoid rule.
/// Node placement on the circles: uniform in the geometric angle, or uniform
/// in the Mobius image angle (nodes grade toward the gap; the explicit
/// eigendensities become exact trigonometric polynomials in the parameter).
enum class NodeLayout { uniform, conformal };

struct NystromSystem {
  struct CircleSpec {
    Complex center;
    double radius = 0;
    double orient = 1.0;  // +1: normal radially outward, -1: inward
  };

  std::array<CircleSpec, 2> circles;
  int nodes_per_circle = 0;
  NodeLayout layout = NodeLayout::uniform;

  std::vector<Complex> nodes;    // 2N positions, circle 1 first
  std::vector<Complex> normals;  // unit normals with orientation applied
  std::vector<double> angles;    // parameter values t_i (geometric angle for uniform layout)
  std::vector<double> speeds;    // |dz/dt| at the nodes
  Eigen::VectorXd weights;       // arclength weights speed * 2 pi / N

  Eigen::MatrixXd K;
  Eigen::MatrixXd S;

  int size() const { return 2 * nodes_per_circle; }
  int circle_of(int idx) const { return idx < nodes_per_circle ? 0 : 1; }
};

/// Two-disk system in the solver frame, outward normals.
NystromSystem assemble(const DiskPair& g, int nodes_per_circle, NodeLayout layout = NodeLayout::uniform);

/// Concentric image system on {|zeta|=R1}, {|zeta|=R2} with normals outward
/// of the annulus (inward on R1, outward on R2), the orientation under which
/// K*[f^{n,+-}] = +-(rho^|n|/2) f^{n,+-} and K* U = -U K* hold.
NystromSystem assemble_concentric(const DiskPair& g, int nodes_per_circle);

/// Operator-norm residual of the discrete Plemelj identity, ||B K - K^T B||_2
/// with B = diag(w) S the symmetric bilinear-form matrix.
double symmetrization_residual(const NystromSystem& sys);

/// Energy inner product <phi, psi> = -sum_i w_i phi_i conj((S psi)_i).
Complex oracle_inner_product(const NystromSystem& sys, const std::vector<Complex>& phi,
                             const std::vector<Complex>& psi);

/// Solves (Lambda - K) phi = eta for zero-mean eta (checked per circle), then
/// projects the solution back to zero mean per circle.
Eigen::VectorXd oracle_solve(const NystromSystem& sys, double lambda1, double lambda2,
                             const Eigen::VectorXd& eta);

/// Unrestricted dense solve, no mean checks or deflation. Valid for finite
/// contrasts where (Lambda - K) is invertible on the full space.
Eigen::VectorXd oracle_solve_raw(const NystromSystem& sys, double lambda1, double lambda2,
                                 const Eigen::VectorXd& eta);

struct FieldAccuracy {
  bool near_boundary = false;
  double estimated_error = 0;
};

/// background(x) + single layer of phi at x by the trapezoid rule. Points
/// closer than 2 pi r/N to a circle are flagged with an error estimate.
double oracle_field(const NystromSystem& sys, const Eigen::VectorXd& phi,
                    const std::function<double(Complex)>& background, Complex x,
                    FieldAccuracy* accuracy = nullptr);

/// Single layer potential alone (complex densities allowed).
Complex single_layer_at(const NystromSystem& sys, const std::vector<Complex>& phi, Complex x);

/// (K* phi)(x) for x on one of the system circles, by the same quadrature
/// used in assembly (the self-circle kernel is constant on a circle, so
/// arbitrary boundary targets are admissible).
Complex apply_K_at(const NystromSystem& sys, const std::vector<Complex>& phi, Complex x, int circle_index);

struct EigenCluster {
  double value = 0;
  int multiplicity = 0;
};

/// Dense real-Schur eigensolve of K; eigenvalues clustered at the given
/// tolerance and sorted by |value| descending. Returns at most `count`
/// clusters (count <= 0 returns all).
std::vector<EigenCluster> oracle_spectrum(const NystromSystem& sys, int count, double cluster_tol = 1e-9);

/// Eigendecomposition access for subspace checks (eigenvectors of K).
struct EigenPair {
  double value = 0;
  Eigen::VectorXd vector;
};
std::vector<EigenPair> oracle_eigenpairs(const NystromSystem& sys);

}  // namespace npduet
