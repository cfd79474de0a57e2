#pragma once

#include "qbattery/battery.hpp"
#include "qbattery/core.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qb {

/// Time-ordered piecewise-constant generators covering [0, 1].
struct DriveSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  Matrix generator;  // Hermitian, acts on battery (x) qubit
};

struct PiecewiseDrive {
  std::vector<DriveSegment> segments;
  Index dim() const { return segments.empty() ? 0 : segments.front().generator.rows(); }
};

/// |chi> = cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>, with |up>, |down>
/// the sigma_z eigenvectors for +1 and -1.
struct ControlQubitState {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)

  ControlQubitState() = default;
  ControlQubitState(double theta_, double phi_);

  Eigen::Vector2cd ket() const;
};

/// The two-step auxiliary-qubit drive on battery (x) qubit:
/// [0, 1/2): -pi (I (x) sigma_x); [1/2, 1]: pi (s^dag (x) sigma_+ + s (x) sigma_-).
PiecewiseDrive build_drive(const LadderHamiltonian& h);

/// Validates the drive (contiguous Hermitian segments covering [0,1]) and
/// composes the segment propagators in time order, later segments on the left.
UnitaryOperator evolve_drive(const PiecewiseDrive& drive, const Tolerances& tol = {});

/// The drive's end-to-end unitary written directly as a permutation with
/// phases: |n,up> -> |n+1,up> below the top rung, |top,up> -> i|top,down>,
/// |n,down> -> |n-1,down> above the bottom rung, |bottom,down> -> i|bottom,up>.
UnitaryOperator closed_form_unitary(const LadderHamiltonian& h);

/// Battery channel induced by running u with the control qubit prepared in
/// chi and then traced out: Kraus K_a = (I (x) <a|) U (I (x) |chi>).
QuantumChannel induced_channel(const UnitaryOperator& u, const ControlQubitState& chi,
                               const Tolerances& tol = {});

/// Named probe states: every ladder projector, the maximally mixed state and
/// ten seeded random pure states.
std::vector<std::pair<std::string, DensityMatrix>> default_probe_states(
    const LadderHamiltonian& h, std::uint64_t seed);

struct SweepEntry {
  double theta = 0.0;
  double phi = 0.0;
  double min_eig = 0.0;
  double max_eig = 0.0;
  Verdict verdict = Verdict::neither;
  std::vector<std::pair<std::string, double>> delta_e;  // per probe state
};

struct SweepResult {
  std::vector<SweepEntry> entries;
};

/// Builds the induced channel for every (theta, phi) pair and tabulates the
/// energy change per probe state together with the spectral verdict.
SweepResult interpolation_sweep(const LadderHamiltonian& h, const std::vector<double>& thetas,
                                const std::vector<double>& phis,
                                const std::vector<std::pair<std::string, DensityMatrix>>& probes);

}  // namespace qb
