#include "qbattery/haar.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qb {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) + index));
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

UnitaryOperator sample_haar_unitary(Index d, std::mt19937_64& rng) {
  if (d < 1) throw std::invalid_argument("sample_haar_unitary: d must be >= 1");
  Matrix ginibre(d, d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      ginibre(i, j) = Complex(standard_normal(rng), standard_normal(rng)) * inv_sqrt2;
  Eigen::HouseholderQR<Matrix> qr(ginibre);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0.0) ? rjj / a : Complex(1.0, 0.0);
  }
  return UnitaryOperator(std::move(q));
}

UnitaryOperator sample_haar_unitary(Index d, std::uint64_t seed) {
  auto rng = substream_engine(seed, 0);
  return sample_haar_unitary(d, rng);
}

double haar_average_exact(const QuantumChannel& m, const LadderHamiltonian& h,
                          const Tolerances& tol) {
  if (m.dim() != h.dim()) throw std::invalid_argument("haar_average_exact: dimension mismatch");
  if (m.completeness_residual() > tol.unitary)
    throw std::invalid_argument("haar_average_exact: channel is incomplete beyond tolerance");
  const Index d = h.dim();
  Matrix acc = -Matrix::Identity(d, d);
  for (const auto& k : m.kraus) acc += k * k.adjoint();
  return (h.matrix() * acc).trace().real() / static_cast<double>(d);
}

HaarEstimate haar_average_mc(const QuantumChannel& m, const LadderHamiltonian& h,
                             const DensityMatrix& rho0, std::int64_t samples, std::uint64_t seed,
                             const Tolerances& tol) {
  if (samples < 100) throw std::invalid_argument("haar_average_mc: need at least 100 samples");
  if (m.dim() != h.dim() || rho0.dim() != h.dim())
    throw std::invalid_argument("haar_average_mc: dimension mismatch");
  const Index d = h.dim();
  const Matrix hm = h.matrix();
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    auto rng = substream_engine(seed, static_cast<std::uint64_t>(i));
    const UnitaryOperator g = sample_haar_unitary(d, rng);
    const DensityMatrix rotated(g.mat * rho0.mat * g.mat.adjoint());
    const DensityMatrix out = apply_channel(m, rotated, tol);
    const double delta_e = expected_energy(hm, out) - expected_energy(hm, rotated);
    sum += delta_e;
    sumsq += delta_e * delta_e;
  }
  HaarEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.mean = sum / static_cast<double>(samples);
  const double var =
      std::max(0.0, (sumsq - sum * sum / static_cast<double>(samples)) /
                        static_cast<double>(samples - 1));
  est.std_error = std::sqrt(var / static_cast<double>(samples));
  return est;
}

QuantumChannel sample_random_channel(Index d, Index kraus_rank, std::uint64_t seed) {
  if (d < 1 || kraus_rank < 1)
    throw std::invalid_argument("sample_random_channel: dimensions must be positive");
  auto rng = substream_engine(seed, 0);
  const UnitaryOperator big = sample_haar_unitary(d * kraus_rank, rng);
  // isometry V = U (I_d (x) |0>_rank); Kraus K_e = (I_d (x) <e|) V
  QuantumChannel ch;
  ch.kraus.reserve(static_cast<std::size_t>(kraus_rank));
  for (Index e = 0; e < kraus_rank; ++e) {
    Matrix k(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) k(i, j) = big.mat(i * kraus_rank + e, j * kraus_rank);
    ch.kraus.push_back(std::move(k));
  }
  return ch;
}

}  // namespace qb
