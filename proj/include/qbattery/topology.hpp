#pragma once

#include "qbattery/battery.hpp"
#include "qbattery/core.hpp"

#include <vector>

namespace qb {

/// Unitary on the integer window [-L, L] with internal_dim states per site,
/// stored dense in site-major order. band is the largest |x - y| with a
/// non-negligible block <x|U|y>.
struct BandedBlockUnitary {
  int window = 0;  // L
  Index internal_dim = 1;
  int band = 0;
  Matrix mat;

  Index dim() const { return mat.rows(); }
  int bottom_label() const { return -window; }
  int top_label() const { return window; }

  /// m x m block <x|U|y> (target x, source y). Labels must lie in [-L, L].
  Matrix block(int x, int y) const;
};

/// Wraps a dense matrix, detecting the effective band at the given threshold.
BandedBlockUnitary make_banded(Matrix mat, int window, Index internal_dim,
                               double zero_threshold = 1e-12);

/// T^power on the window (power may be negative; sites pushed off the window
/// are annihilated). internal_dim copies shift together.
BandedBlockUnitary shift_power(int window, Index internal_dim, int power);

struct FlowIndexReport {
  double raw_value = 0.0;
  long rounded = 0;
  double residual = 0.0;
  int cut_position = 0;
  bool globally_unitary = false;  // unitary on the whole window within tol
  bool cut_isometric = false;     // rows/cols within band+1 of the cut isometric
};

/// Net rightward probability flow across the cut:
///   nu = sum_{x >= cut > y} Tr[B_xy^dag B_xy - B_yx^dag B_yx].
/// Window-unitary inputs are summed exactly over every cross-cut pair. Inputs
/// failing global unitarity (truncations of infinite-window operators) are
/// accepted when band < L - |cut|; the sum is then restricted to within band
/// of the cut and cut_isometric reports whether the near-cut rows and columns
/// are isometric, which is what makes the value trustworthy. Throws when the
/// band leaves no room for the cut.
FlowIndexReport flow_index(const BandedBlockUnitary& u, int cut = 0, const Tolerances& tol = {});

struct LocalityReport {
  bool ok = false;
  int worst_row_label = 0;
  int worst_col_label = 0;
  double worst_excess = 0.0;  // max over pairs of |H_nn'| - C e^{-|n-n'|/l}
};

/// Checks |H_{nn'}| <= C e^{-|n-n'|/l} for every matrix element, with n, n'
/// the site labels attached to the rows/columns. Requires C > 0, l > 0.
LocalityReport locality_check(const Matrix& h, const std::vector<int>& site_labels, double c,
                              double l);

/// Windowed-lattice convenience: labels -L..L, each repeated internal_dim times.
LocalityReport locality_check(const Matrix& h, int window, Index internal_dim, double c,
                              double l);

/// Reinterprets a battery (x) qubit unitary as a block quantum walk on the
/// ladder labels: lattice site = battery label, internal_dim = 2. Requires a
/// double-sided truncated ladder; throws if the effective band reaches the
/// window edge.
BandedBlockUnitary flatten_composite(const UnitaryOperator& u, const LadderHamiltonian& h);

}  // namespace qb
