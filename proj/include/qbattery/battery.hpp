#pragma once

#include "qbattery/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qb {

enum class LadderKind { finite, semi_infinite_truncated, double_sided_truncated };

std::string to_string(LadderKind kind);

/// Diagonal battery Hamiltonian on a contiguous integer label window with
/// strictly increasing (non-degenerate) energies. Finite and truncated
/// semi-infinite ladders use labels 1..N; truncated double-sided ladders use
/// labels -L..L centered on 0.
struct LadderHamiltonian {
  LadderKind kind = LadderKind::finite;
  std::vector<int> labels;
  RealVector energies;

  Index dim() const { return static_cast<Index>(labels.size()); }
  Matrix matrix() const;
  int bottom_label() const { return labels.front(); }
  int top_label() const { return labels.back(); }

  /// Position of a label in the window; throws if outside.
  Index index_of(int label) const;
};

/// n_or_l is N (>= 2) for finite / semi-infinite ladders and L (>= 1) for
/// double-sided ones. Throws on non-increasing energies or size mismatch.
LadderHamiltonian build_ladder(LadderKind kind, int n_or_l, RealVector energies);

/// Uniform spacing rule: finite ladders get energies 0, d, ..., (N-1)d;
/// double-sided ladders get E_n = n d for n = -L..L. Requires d > 0.
LadderHamiltonian build_ladder(LadderKind kind, int n_or_l, double spacing);

/// s|n> = |n-1> above the bottom label, s|bottom> = 0; raise = s^dag.
/// Truncated double-sided ladders are truncated the same way at both ends.
struct ShiftOperators {
  Matrix lower;  // s
  Matrix raise;  // s^dag
};
ShiftOperators shift_operators(const LadderHamiltonian& h);

/// Heisenberg-picture energy change of a protocol:
/// Q = sum_k K_k^dag H K_k - H, so that  Delta E(rho) = Tr[Q rho].
struct ChargingObservable {
  Matrix q;
  std::string source;
};
ChargingObservable charging_observable(const QuantumChannel& protocol, const LadderHamiltonian& h,
                                       const Tolerances& tol = {},
                                       std::string source = "channel");

enum class Verdict { uc, ud, neither, trivial };

std::string to_string(Verdict v);

struct ProtocolClassification {
  Verdict verdict = Verdict::neither;
  double min_eig = 0.0;
  double max_eig = 0.0;
  Vector witness_min;  // eigenvector attaining min_eig
  Vector witness_max;  // eigenvector attaining max_eig
  bool is_nontrivial = false;
};

/// Spectral certificate: trivial iff ||Q||_max <= tol (checked first);
/// UC iff min_eig >= -tol and max_eig > tol; UD mirrored; otherwise neither.
ProtocolClassification classify_protocol(const ChargingObservable& q, double tol = 1e-9);

struct ErgotropyReport {
  double ergotropy = 0.0;         // max unitary extraction w.r.t. H
  double charging_capacity = 0.0; // max unitary energy gain (ergotropy w.r.t. -H)
  bool unchargeable = false;      // charging_capacity <= tol
};

ErgotropyReport ergotropy_and_capacity(const DensityMatrix& rho, const LadderHamiltonian& h,
                                       double tol = 1e-10);

/// Brute-force search companion to the analytic capacity: max over `samples`
/// Haar unitaries of Delta E(U rho U^dag), one value per input state. Sample i
/// is drawn from an independent substream of (seed, i), so results do not
/// depend on the number of states or any parallel schedule.
std::vector<double> max_charging_over_unitaries(const std::vector<DensityMatrix>& states,
                                                const LadderHamiltonian& h, int samples,
                                                std::uint64_t seed);

double expected_energy(const LadderHamiltonian& h, const DensityMatrix& rho);

}  // namespace qb
