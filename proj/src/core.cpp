#include "qbattery/core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace qb {

double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("pure state: zero vector");
  Vector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_projector(Index dim, Index k) {
  if (k < 0 || k >= dim) throw std::invalid_argument("basis_projector: index out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim < 1) throw std::invalid_argument("maximally_mixed: dim must be positive");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double UnitaryOperator::unitarity_residual() const {
  return max_abs(mat.adjoint() * mat - Matrix::Identity(mat.rows(), mat.cols()));
}

double QuantumChannel::completeness_residual() const {
  if (kraus.empty()) return 1.0;
  const Index d = kraus.front().rows();
  Matrix acc = Matrix::Zero(d, d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw std::invalid_argument("QuantumChannel: Kraus operators must share one square shape");
    acc += k.adjoint() * k;
  }
  return max_abs(acc - Matrix::Identity(d, d));
}

QuantumChannel QuantumChannel::from_unitary(const UnitaryOperator& u) {
  return QuantumChannel{{u.mat}};
}

ValidationReport validate_density(const Matrix& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("validate_density: non-square input");
  ValidationReport rep;
  rep.herm_residual = max_abs(rho - rho.adjoint());
  rep.trace_residual = std::abs(rho.trace() - Complex(1.0, 0.0));
  Matrix sym = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.ok = rep.herm_residual <= tol.herm && rep.trace_residual <= tol.trace &&
           rep.min_eigenvalue >= -tol.psd;
  return rep;
}

SpectralDecomposition eig_hermitian(const Matrix& a, const Tolerances& tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eig_hermitian: non-square input");
  if (max_abs(a - a.adjoint()) > tol.herm)
    throw std::invalid_argument("eig_hermitian: input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
  SpectralDecomposition sd;
  sd.eigenvalues = es.eigenvalues();
  sd.eigenvectors = es.eigenvectors();
  // fix each eigenvector phase: first component above threshold made real positive
  for (Index j = 0; j < sd.eigenvectors.cols(); ++j) {
    for (Index i = 0; i < sd.eigenvectors.rows(); ++i) {
      const Complex c = sd.eigenvectors(i, j);
      if (std::abs(c) > 1e-12) {
        sd.eigenvectors.col(j) *= std::conj(c) / std::abs(c);
        break;
      }
    }
  }
  return sd;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix partial_trace_env(const DensityMatrix& rho_total, Index dim_b, Index dim_e) {
  if (rho_total.dim() != dim_b * dim_e)
    throw std::invalid_argument("partial_trace_env: dimension mismatch");
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Index i = 0; i < dim_b; ++i)
    for (Index j = 0; j < dim_b; ++j)
      for (Index k = 0; k < dim_e; ++k)
        out(i, j) += rho_total.mat(i * dim_e + k, j * dim_e + k);
  return DensityMatrix(std::move(out));
}

DensityMatrix partial_trace_battery(const DensityMatrix& rho_total, Index dim_b, Index dim_e) {
  if (rho_total.dim() != dim_b * dim_e)
    throw std::invalid_argument("partial_trace_battery: dimension mismatch");
  Matrix out = Matrix::Zero(dim_e, dim_e);
  for (Index k = 0; k < dim_e; ++k)
    for (Index l = 0; l < dim_e; ++l)
      for (Index i = 0; i < dim_b; ++i)
        out(k, l) += rho_total.mat(i * dim_e + k, i * dim_e + l);
  return DensityMatrix(std::move(out));
}

DensityMatrix apply_channel(const QuantumChannel& m, const DensityMatrix& rho,
                            const Tolerances& tol) {
  if (m.kraus.empty()) throw std::invalid_argument("apply_channel: empty Kraus list");
  if (m.dim() != rho.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
  if (m.completeness_residual() > tol.unitary)
    throw std::invalid_argument("apply_channel: channel is not trace preserving within tolerance");
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : m.kraus) out += k * rho.mat * k.adjoint();
  return DensityMatrix(std::move(out));
}

double expected_energy(const Matrix& h, const DensityMatrix& rho) {
  if (h.rows() != rho.dim() || h.cols() != rho.dim())
    throw std::invalid_argument("expected_energy: dimension mismatch");
  // Tr[H rho] = sum_ij H_ij rho_ji
  return (h.cwiseProduct(rho.mat.transpose())).sum().real();
}

Matrix hermitian_propagator(const Matrix& h, double t, const Tolerances& tol) {
  SpectralDecomposition sd = eig_hermitian(h, tol);
  Vector phases(sd.eigenvalues.size());
  for (Index i = 0; i < sd.eigenvalues.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -sd.eigenvalues(i) * t));
  return sd.eigenvectors * phases.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix choi_matrix(const QuantumChannel& m) {
  const Index d = m.dim();
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      Matrix eij = Matrix::Zero(d, d);
      eij(i, j) = 1.0;
      Matrix out = Matrix::Zero(d, d);
      for (const auto& k : m.kraus) out += k * eij * k.adjoint();
      choi.block(i * d, j * d, d, d) = out;
    }
  return choi;
}

}  // namespace qb
