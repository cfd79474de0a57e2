#pragma once

#include "qbattery/core.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qb::cli {

/// Config/schema problems: reported on stderr, exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runs one subcommand from a JSON config file. Returns 0 when every internal
/// verdict passes, 1 when any fails (a machine-readable failure list is
/// printed to stdout), and 2 on config errors.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_path, std::optional<std::uint64_t> seed_override);

// --- computation kernels shared with the test suites ---

struct BlochPoint {
  double theta = 0.0;
  double phi = 0.0;
  double r = 0.0;
  double closed_form = 0.0;
  double numeric = 0.0;
};

struct BlochGridResult {
  std::vector<BlochPoint> rows;
  double max_closed_numeric_diff = 0.0;
  double ball_mean = 0.0;            // plain average over the uniform-ball grid
  double plane_fit_residual = 0.0;   // max |Delta E - v . (r n)| after least squares
};

/// Energy change of the two-level battery under rho -> U^dag rho U for the
/// parameterized unitary [[a, b], [-b* e^{i phase}, a* e^{i phase}]], with the
/// state given by amplitudes (alpha, beta) mixed radially toward I/2.
double qubit_delta_e_closed_form(Complex a, Complex b, double phase, Complex alpha, Complex beta,
                                 double radius);

/// Evaluates the closed form and the spectral-observable route on a Bloch-ball
/// grid uniform in (cos theta, phi, r^3).
BlochGridResult bloch_grid_compute(Complex a, Complex b, double phase, int n_theta, int n_phi,
                                   int n_r);

}  // namespace qb::cli
