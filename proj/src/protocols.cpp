#include "qbattery/protocols.hpp"

#include "qbattery/haar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qb {

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix sigma_plus() {  // |down> -> |up>
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix sigma_minus() {  // |up> -> |down>
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

void check_drive(const PiecewiseDrive& drive, const Tolerances& tol) {
  if (drive.segments.empty()) throw std::invalid_argument("drive: no segments");
  constexpr double grid_tol = 1e-12;
  if (std::abs(drive.segments.front().t_start) > grid_tol ||
      std::abs(drive.segments.back().t_end - 1.0) > grid_tol)
    throw std::invalid_argument("drive: segments must cover [0, 1]");
  for (std::size_t i = 0; i < drive.segments.size(); ++i) {
    const auto& seg = drive.segments[i];
    if (!(seg.t_end > seg.t_start)) throw std::invalid_argument("drive: empty segment");
    if (i > 0 && std::abs(seg.t_start - drive.segments[i - 1].t_end) > grid_tol)
      throw std::invalid_argument("drive: segments must be contiguous");
    if (seg.generator.rows() != drive.dim() || seg.generator.cols() != drive.dim())
      throw std::invalid_argument("drive: segment dimension mismatch");
    if (max_abs(seg.generator - seg.generator.adjoint()) > tol.herm)
      throw std::invalid_argument("drive: segment generator is not Hermitian");
  }
}

}  // namespace

ControlQubitState::ControlQubitState(double theta_, double phi_) : theta(theta_), phi(phi_) {
  if (theta < 0.0 || theta > std::numbers::pi)
    throw std::invalid_argument("ControlQubitState: theta outside [0, pi]");
  if (phi < 0.0 || phi >= 2.0 * std::numbers::pi)
    throw std::invalid_argument("ControlQubitState: phi outside [0, 2 pi)");
}

Eigen::Vector2cd ControlQubitState::ket() const {
  Eigen::Vector2cd v;
  v(0) = std::cos(theta / 2.0);
  v(1) = std::exp(Complex(0.0, phi)) * std::sin(theta / 2.0);
  return v;
}

PiecewiseDrive build_drive(const LadderHamiltonian& h) {
  const Index d = h.dim();
  const auto [s, s_dag] = shift_operators(h);
  PiecewiseDrive drive;
  drive.segments.push_back(
      {0.0, 0.5, -std::numbers::pi * tensor_product(Matrix::Identity(d, d), pauli_x())});
  drive.segments.push_back(
      {0.5, 1.0, std::numbers::pi * (tensor_product(s_dag, sigma_plus()) +
                                     tensor_product(s, sigma_minus()))});
  return drive;
}

UnitaryOperator evolve_drive(const PiecewiseDrive& drive, const Tolerances& tol) {
  check_drive(drive, tol);
  const Index d = drive.dim();
  Matrix u = Matrix::Identity(d, d);
  for (const auto& seg : drive.segments)
    u = hermitian_propagator(seg.generator, seg.t_end - seg.t_start, tol) * u;
  return UnitaryOperator(std::move(u));
}

UnitaryOperator closed_form_unitary(const LadderHamiltonian& h) {
  const Index n = h.dim();
  Matrix u = Matrix::Zero(2 * n, 2 * n);
  const Complex i_unit(0.0, 1.0);
  for (Index p = 0; p < n; ++p) {
    const Index up = 2 * p, down = 2 * p + 1;
    if (p + 1 < n)
      u(2 * (p + 1), up) = 1.0;
    else
      u(down, up) = i_unit;  // top rung reflects into the down sector
    if (p > 0)
      u(2 * (p - 1) + 1, down) = 1.0;
    else
      u(up, down) = i_unit;  // bottom rung reflects into the up sector
  }
  return UnitaryOperator(std::move(u));
}

QuantumChannel induced_channel(const UnitaryOperator& u, const ControlQubitState& chi,
                               const Tolerances& tol) {
  if (u.dim() % 2 != 0) throw std::invalid_argument("induced_channel: composite dim must be 2*dim_B");
  const Index d = u.dim() / 2;
  const Eigen::Vector2cd c = chi.ket();
  QuantumChannel ch;
  for (Index a = 0; a < 2; ++a) {
    Matrix k(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        k(i, j) = u.mat(2 * i + a, 2 * j) * c(0) + u.mat(2 * i + a, 2 * j + 1) * c(1);
    ch.kraus.push_back(std::move(k));
  }
  if (ch.completeness_residual() > tol.unitary)
    throw std::invalid_argument("induced_channel: extracted Kraus set is incomplete");
  return ch;
}

std::vector<std::pair<std::string, DensityMatrix>> default_probe_states(
    const LadderHamiltonian& h, std::uint64_t seed) {
  const Index d = h.dim();
  std::vector<std::pair<std::string, DensityMatrix>> probes;
  for (Index p = 0; p < d; ++p)
    probes.emplace_back("pi_" + std::to_string(h.labels[static_cast<std::size_t>(p)]),
                        DensityMatrix::basis_projector(d, p));
  probes.emplace_back("maximally_mixed", DensityMatrix::maximally_mixed(d));
  for (int k = 0; k < 10; ++k) {
    auto rng = substream_engine(seed, static_cast<std::uint64_t>(k));
    Vector psi(d);
    for (Index i = 0; i < d; ++i) psi(i) = Complex(standard_normal(rng), standard_normal(rng));
    probes.emplace_back("random_" + std::to_string(k), DensityMatrix::pure(psi));
  }
  return probes;
}

SweepResult interpolation_sweep(const LadderHamiltonian& h, const std::vector<double>& thetas,
                                const std::vector<double>& phis,
                                const std::vector<std::pair<std::string, DensityMatrix>>& probes) {
  const UnitaryOperator u = closed_form_unitary(h);
  SweepResult result;
  for (double theta : thetas)
    for (double phi : phis) {
      const QuantumChannel ch = induced_channel(u, ControlQubitState(theta, phi));
      const ChargingObservable q = charging_observable(ch, h);
      const ProtocolClassification cls = classify_protocol(q);
      SweepEntry entry;
      entry.theta = theta;
      entry.phi = phi;
      entry.min_eig = cls.min_eig;
      entry.max_eig = cls.max_eig;
      entry.verdict = cls.verdict;
      for (const auto& [name, rho] : probes)
        entry.delta_e.emplace_back(name, (q.q.cwiseProduct(rho.mat.transpose())).sum().real());
      result.entries.push_back(std::move(entry));
    }
  return result;
}

}  // namespace qb
