#include "qbattery/topology.hpp"

#include <cmath>
#include <stdexcept>

namespace qb {

namespace {

Index site_row(const BandedBlockUnitary& u, int label) {
  return static_cast<Index>(label + u.window) * u.internal_dim;
}

int detect_band(const Matrix& mat, int window, Index m, double threshold) {
  int band = 0;
  const int sites = 2 * window + 1;
  for (int xi = 0; xi < sites; ++xi)
    for (int yi = 0; yi < sites; ++yi) {
      if (std::abs(xi - yi) <= band) continue;
      if (max_abs(mat.block(xi * m, yi * m, m, m)) > threshold) band = std::abs(xi - yi);
    }
  return band;
}

}  // namespace

Matrix BandedBlockUnitary::block(int x, int y) const {
  if (x < bottom_label() || x > top_label() || y < bottom_label() || y > top_label())
    throw std::invalid_argument("BandedBlockUnitary::block: label outside window");
  return mat.block(site_row(*this, x), site_row(*this, y), internal_dim, internal_dim);
}

BandedBlockUnitary make_banded(Matrix mat, int window, Index internal_dim,
                               double zero_threshold) {
  if (window < 1) throw std::invalid_argument("make_banded: window must be >= 1");
  if (internal_dim < 1) throw std::invalid_argument("make_banded: internal_dim must be >= 1");
  const Index expected = static_cast<Index>(2 * window + 1) * internal_dim;
  if (mat.rows() != expected || mat.cols() != expected)
    throw std::invalid_argument("make_banded: matrix size does not match window");
  BandedBlockUnitary u;
  u.window = window;
  u.internal_dim = internal_dim;
  u.band = detect_band(mat, window, internal_dim, zero_threshold);
  u.mat = std::move(mat);
  return u;
}

BandedBlockUnitary shift_power(int window, Index internal_dim, int power) {
  if (window < 1) throw std::invalid_argument("shift_power: window must be >= 1");
  const int sites = 2 * window + 1;
  Matrix mat = Matrix::Zero(sites * internal_dim, sites * internal_dim);
  for (int y = -window; y <= window; ++y) {
    const int x = y + power;
    if (x < -window || x > window) continue;
    for (Index a = 0; a < internal_dim; ++a)
      mat((x + window) * internal_dim + a, (y + window) * internal_dim + a) = 1.0;
  }
  BandedBlockUnitary u;
  u.window = window;
  u.internal_dim = internal_dim;
  u.band = std::abs(power);
  u.mat = std::move(mat);
  return u;
}

FlowIndexReport flow_index(const BandedBlockUnitary& u, int cut, const Tolerances& tol) {
  const int l = u.window;
  if (cut <= -l || cut > l)
    throw std::invalid_argument("flow_index: cut must leave sites on both sides of the window");

  FlowIndexReport rep;
  rep.cut_position = cut;
  rep.globally_unitary =
      max_abs(u.mat.adjoint() * u.mat - Matrix::Identity(u.dim(), u.dim())) <= tol.unitary;

  // near-cut isometry: columns and rows with site label within band+1 of the cut
  {
    const int lo = std::max(-l, cut - u.band - 1);
    const int hi = std::min(l, cut + u.band + 1);
    const Index first = static_cast<Index>(lo + l) * u.internal_dim;
    const Index count = static_cast<Index>(hi - lo + 1) * u.internal_dim;
    const Matrix cols = u.mat.middleCols(first, count);
    const Matrix rows = u.mat.middleRows(first, count);
    const Matrix id = Matrix::Identity(count, count);
    rep.cut_isometric = max_abs(cols.adjoint() * cols - id) <= tol.unitary &&
                        max_abs(rows * rows.adjoint() - id) <= tol.unitary;
  }

  // which cross-cut pairs enter the sum
  int reach = 2 * l;  // window-unitary: every pair, exact by Tr[P] - Tr[UPU^dag] = 0 bookkeeping
  if (!rep.globally_unitary) {
    if (u.band >= l - std::abs(cut))
      throw std::invalid_argument("flow_index: band too large for window at this cut");
    reach = u.band;
  }

  double nu = 0.0;
  for (int x = cut; x <= l; ++x)
    for (int y = std::max(-l, x - reach); y < cut; ++y) {
      const Matrix bxy = u.block(x, y);
      const Matrix byx = u.block(y, x);
      nu += (bxy.adjoint() * bxy - byx.adjoint() * byx).trace().real();
    }
  rep.raw_value = nu;
  rep.rounded = std::lround(nu);
  rep.residual = std::abs(nu - static_cast<double>(rep.rounded));
  return rep;
}

LocalityReport locality_check(const Matrix& h, const std::vector<int>& site_labels, double c,
                              double l) {
  if (!(c > 0.0) || !(l > 0.0))
    throw std::invalid_argument("locality_check: C and l must be positive");
  if (h.rows() != h.cols() || static_cast<Index>(site_labels.size()) != h.rows())
    throw std::invalid_argument("locality_check: label list does not match matrix");
  LocalityReport rep;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < h.rows(); ++i)
    for (Index j = 0; j < h.cols(); ++j) {
      const int dist = std::abs(site_labels[static_cast<std::size_t>(i)] -
                                site_labels[static_cast<std::size_t>(j)]);
      const double excess = std::abs(h(i, j)) - c * std::exp(-static_cast<double>(dist) / l);
      if (excess > rep.worst_excess) {
        rep.worst_excess = excess;
        rep.worst_row_label = site_labels[static_cast<std::size_t>(i)];
        rep.worst_col_label = site_labels[static_cast<std::size_t>(j)];
      }
    }
  rep.ok = rep.worst_excess <= 0.0;
  return rep;
}

LocalityReport locality_check(const Matrix& h, int window, Index internal_dim, double c,
                              double l) {
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>((2 * window + 1) * internal_dim));
  for (int site = -window; site <= window; ++site)
    for (Index a = 0; a < internal_dim; ++a) labels.push_back(site);
  return locality_check(h, labels, c, l);
}

BandedBlockUnitary flatten_composite(const UnitaryOperator& u, const LadderHamiltonian& h) {
  if (h.kind != LadderKind::double_sided_truncated)
    throw std::invalid_argument("flatten_composite: ladder must be double-sided truncated");
  if (u.dim() != 2 * h.dim())
    throw std::invalid_argument("flatten_composite: composite dimension mismatch");
  const int window = h.top_label();
  // battery-major composite layout is already site-major with internal_dim 2
  BandedBlockUnitary bb = make_banded(u.mat, window, 2);
  if (bb.band >= window)
    throw std::invalid_argument("flatten_composite: effective band exceeds the window");
  return bb;
}

}  // namespace qb
