#pragma once

#include "qbattery/battery.hpp"
#include "qbattery/core.hpp"

#include <cstdint>
#include <random>

namespace qb {

/// Engine for sample index `index` of stream `seed`. Independent substreams
/// make sampled results independent of evaluation order.
std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) built from the top 53 engine bits.
double uniform_unit(std::mt19937_64& rng);

/// Standard normal via Box-Muller on uniform_unit draws. Kept hand-rolled so
/// sampled values are identical across standard library implementations.
double standard_normal(std::mt19937_64& rng);

/// Haar-distributed unitary: complex Ginibre matrix, QR factorization, Q
/// rescaled by the phases of R's diagonal.
UnitaryOperator sample_haar_unitary(Index d, std::mt19937_64& rng);
UnitaryOperator sample_haar_unitary(Index d, std::uint64_t seed);

struct HaarEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Closed form of the Haar-averaged energy change of a CPTP map:
/// (1/d) Tr[H (sum_k K_k K_k^dag - I)]. Zero for every unitary channel.
double haar_average_exact(const QuantumChannel& m, const LadderHamiltonian& h,
                          const Tolerances& tol = {});

/// Monte Carlo estimate of the same average: mean over Haar G of
/// Delta E(G rho0 G^dag), with Delta E evaluated through the channel itself.
HaarEstimate haar_average_mc(const QuantumChannel& m, const LadderHamiltonian& h,
                             const DensityMatrix& rho0, std::int64_t samples, std::uint64_t seed,
                             const Tolerances& tol = {});

/// Random CPTP channel by Stinespring dilation: Haar unitary on a d*rank
/// space restricted to one environment column, so completeness holds by
/// construction.
QuantumChannel sample_random_channel(Index d, Index kraus_rank, std::uint64_t seed);

}  // namespace qb
