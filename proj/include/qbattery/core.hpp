#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace qb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical tolerances shared by all contract checks. The defaults are
/// sized for double-precision eigensolver noise at dimensions <= 128.
struct Tolerances {
  double herm = 1e-10;
  double trace = 1e-10;
  double unitary = 1e-10;
  double psd = 1e-9;
  double eig = 1e-10;
};

/// max |a_ij| — the entrywise norm used by every tolerance check.
double max_abs(const Matrix& a);

/// Battery or composite state. Construction does not validate; call
/// validate_density to get the per-invariant residuals.
struct DensityMatrix {
  Matrix mat;

  DensityMatrix() = default;
  explicit DensityMatrix(Matrix m) : mat(std::move(m)) {}

  Index dim() const { return mat.rows(); }

  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix basis_projector(Index dim, Index k);
  static DensityMatrix maximally_mixed(Index dim);
};

struct UnitaryOperator {
  Matrix mat;

  UnitaryOperator() = default;
  explicit UnitaryOperator(Matrix m) : mat(std::move(m)) {}

  Index dim() const { return mat.rows(); }
  Matrix adjoint() const { return mat.adjoint(); }

  /// ||U^dag U - I||_max
  double unitarity_residual() const;
};

/// CPTP map given by its Kraus operators: rho -> sum_k K_k rho K_k^dag.
struct QuantumChannel {
  std::vector<Matrix> kraus;

  Index dim() const { return kraus.empty() ? 0 : kraus.front().rows(); }

  /// ||sum_k K_k^dag K_k - I||_max
  double completeness_residual() const;

  static QuantumChannel from_unitary(const UnitaryOperator& u);
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending,
/// eigenvector phases fixed so the first nonzero component is real positive.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;  // orthonormal columns, column j pairs with eigenvalues[j]
};

struct ValidationReport {
  bool ok = false;
  double herm_residual = 0.0;
  double trace_residual = 0.0;
  double min_eigenvalue = 0.0;
};

/// Checks the three density-matrix invariants (Hermitian, unit trace, PSD)
/// and reports the residuals. Throws std::invalid_argument on non-square input.
ValidationReport validate_density(const Matrix& rho, const Tolerances& tol = {});

/// Throws std::invalid_argument if a is not Hermitian within tol.herm.
SpectralDecomposition eig_hermitian(const Matrix& a, const Tolerances& tol = {});

/// Kronecker product with battery-major ordering: the left factor's index
/// varies slower, (A (x) B)_{(i,k),(j,l)} = A_ij B_kl.
Matrix tensor_product(const Matrix& a, const Matrix& b);

/// Trace out the environment (right, faster-varying) factor.
DensityMatrix partial_trace_env(const DensityMatrix& rho_total, Index dim_b, Index dim_e);

/// Trace out the battery (left, slower-varying) factor.
DensityMatrix partial_trace_battery(const DensityMatrix& rho_total, Index dim_b, Index dim_e);

/// rho -> sum_k K_k rho K_k^dag. Throws if the channel is incomplete beyond
/// tol.unitary or dimensions mismatch.
DensityMatrix apply_channel(const QuantumChannel& m, const DensityMatrix& rho,
                            const Tolerances& tol = {});

/// Tr[H rho], real part. Throws on dimension mismatch.
double expected_energy(const Matrix& h, const DensityMatrix& rho);

/// exp(-i h t) computed spectrally; h must be Hermitian within tol.herm.
Matrix hermitian_propagator(const Matrix& h, double t, const Tolerances& tol = {});

/// Choi matrix sum_ij E_ij (x) M[E_ij] (battery-major blocks). Two channels
/// are equal as maps iff their Choi matrices coincide.
Matrix choi_matrix(const QuantumChannel& m);

}  // namespace qb
