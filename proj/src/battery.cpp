#include "qbattery/battery.hpp"

#include "qbattery/haar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qb {

std::string to_string(LadderKind kind) {
  switch (kind) {
    case LadderKind::finite: return "finite";
    case LadderKind::semi_infinite_truncated: return "semi_infinite_truncated";
    case LadderKind::double_sided_truncated: return "double_sided_truncated";
  }
  return "unknown";
}

Matrix LadderHamiltonian::matrix() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (Index i = 0; i < dim(); ++i) m(i, i) = energies(i);
  return m;
}

Index LadderHamiltonian::index_of(int label) const {
  const int bottom = bottom_label();
  if (label < bottom || label > top_label())
    throw std::invalid_argument("LadderHamiltonian: label outside window");
  return static_cast<Index>(label - bottom);
}

namespace {

std::vector<int> window_labels(LadderKind kind, int n_or_l) {
  std::vector<int> labels;
  if (kind == LadderKind::double_sided_truncated) {
    if (n_or_l < 1) throw std::invalid_argument("build_ladder: L must be >= 1");
    for (int n = -n_or_l; n <= n_or_l; ++n) labels.push_back(n);
  } else {
    if (n_or_l < 2) throw std::invalid_argument("build_ladder: N must be >= 2");
    for (int n = 1; n <= n_or_l; ++n) labels.push_back(n);
  }
  return labels;
}

}  // namespace

LadderHamiltonian build_ladder(LadderKind kind, int n_or_l, RealVector energies) {
  LadderHamiltonian h;
  h.kind = kind;
  h.labels = window_labels(kind, n_or_l);
  if (energies.size() != static_cast<Index>(h.labels.size()))
    throw std::invalid_argument("build_ladder: energy list size does not match label window");
  for (Index i = 1; i < energies.size(); ++i)
    if (!(energies(i) > energies(i - 1)))
      throw std::invalid_argument("build_ladder: energies must be strictly increasing");
  h.energies = std::move(energies);
  return h;
}

LadderHamiltonian build_ladder(LadderKind kind, int n_or_l, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("build_ladder: spacing must be positive");
  LadderHamiltonian h;
  h.kind = kind;
  h.labels = window_labels(kind, n_or_l);
  h.energies.resize(static_cast<Index>(h.labels.size()));
  for (Index i = 0; i < h.energies.size(); ++i) {
    const int label = h.labels[static_cast<std::size_t>(i)];
    h.energies(i) = (kind == LadderKind::double_sided_truncated)
                        ? spacing * label
                        : spacing * (label - 1);
  }
  return h;
}

ShiftOperators shift_operators(const LadderHamiltonian& h) {
  const Index d = h.dim();
  Matrix s = Matrix::Zero(d, d);
  for (Index p = 1; p < d; ++p) s(p - 1, p) = 1.0;
  return ShiftOperators{s, s.adjoint()};
}

ChargingObservable charging_observable(const QuantumChannel& protocol, const LadderHamiltonian& h,
                                       const Tolerances& tol, std::string source) {
  if (protocol.dim() != h.dim())
    throw std::invalid_argument("charging_observable: dimension mismatch");
  if (protocol.completeness_residual() > tol.unitary)
    throw std::invalid_argument("charging_observable: channel is incomplete beyond tolerance");
  const Matrix hm = h.matrix();
  Matrix q = -hm;
  for (const auto& k : protocol.kraus) q += k.adjoint() * hm * k;
  return ChargingObservable{std::move(q), std::move(source)};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::uc: return "UC";
    case Verdict::ud: return "UD";
    case Verdict::neither: return "neither";
    case Verdict::trivial: return "trivial";
  }
  return "unknown";
}

ProtocolClassification classify_protocol(const ChargingObservable& q, double tol) {
  SpectralDecomposition sd = eig_hermitian(q.q);
  ProtocolClassification c;
  c.min_eig = sd.eigenvalues(0);
  c.max_eig = sd.eigenvalues(sd.eigenvalues.size() - 1);
  c.witness_min = sd.eigenvectors.col(0);
  c.witness_max = sd.eigenvectors.col(sd.eigenvectors.cols() - 1);
  c.is_nontrivial = max_abs(q.q) > tol;
  if (!c.is_nontrivial) {
    c.verdict = Verdict::trivial;
  } else if (c.min_eig >= -tol && c.max_eig > tol) {
    c.verdict = Verdict::uc;
  } else if (c.max_eig <= tol && c.min_eig < -tol) {
    c.verdict = Verdict::ud;
  } else {
    c.verdict = Verdict::neither;
  }
  return c;
}

ErgotropyReport ergotropy_and_capacity(const DensityMatrix& rho, const LadderHamiltonian& h,
                                       double tol) {
  if (rho.dim() != h.dim())
    throw std::invalid_argument("ergotropy_and_capacity: dimension mismatch");
  const Index d = h.dim();
  SpectralDecomposition sd = eig_hermitian(rho.mat);
  // populations descending; ladder energies are ascending by construction
  std::vector<double> pops(sd.eigenvalues.data(), sd.eigenvalues.data() + d);
  std::sort(pops.begin(), pops.end(), std::greater<double>());
  const double current = expected_energy(h.matrix(), rho);
  double passive = 0.0, maximal = 0.0;
  for (Index i = 0; i < d; ++i) {
    passive += pops[static_cast<std::size_t>(i)] * h.energies(i);
    maximal += pops[static_cast<std::size_t>(i)] * h.energies(d - 1 - i);
  }
  ErgotropyReport rep;
  rep.ergotropy = current - passive;
  rep.charging_capacity = maximal - current;
  if (rep.ergotropy < 0.0 && rep.ergotropy > -1e-12) rep.ergotropy = 0.0;
  if (rep.charging_capacity < 0.0 && rep.charging_capacity > -1e-12) rep.charging_capacity = 0.0;
  rep.unchargeable = rep.charging_capacity <= tol;
  return rep;
}

std::vector<double> max_charging_over_unitaries(const std::vector<DensityMatrix>& states,
                                                const LadderHamiltonian& h, int samples,
                                                std::uint64_t seed) {
  const Index d = h.dim();
  const Matrix hm = h.matrix();
  std::vector<double> base(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].dim() != d)
      throw std::invalid_argument("max_charging_over_unitaries: state dimension mismatch");
    base[k] = expected_energy(hm, states[k]);
  }
  std::vector<double> best(states.size(), -std::numeric_limits<double>::infinity());
  for (int i = 0; i < samples; ++i) {
    auto rng = substream_engine(seed, static_cast<std::uint64_t>(i));
    const UnitaryOperator u = sample_haar_unitary(d, rng);
    const Matrix rotated = u.mat.adjoint() * hm * u.mat;  // Tr[H U rho U^dag] = Tr[(U^dag H U) rho]
    for (std::size_t k = 0; k < states.size(); ++k) {
      const double gain =
          (rotated.cwiseProduct(states[k].mat.transpose())).sum().real() - base[k];
      best[k] = std::max(best[k], gain);
    }
  }
  return best;
}

double expected_energy(const LadderHamiltonian& h, const DensityMatrix& rho) {
  return expected_energy(h.matrix(), rho);
}

}  // namespace qb
