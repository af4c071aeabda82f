#include "nhskin/realspace.hpp"

#include <ostream>
#include <random>

#include "nhskin/error.hpp"
#include "nhskin/io.hpp"

namespace nhskin {

cplx AxisBoundary::wrap_factor() const {
  switch (kind) {
    case Kind::Open:
      return 0.0;
    case Kind::Periodic:
      return 1.0;
    case Kind::Coupled:
      return epsilon;
  }
  return 0.0;
}

SiteIndex::SiteIndex(std::vector<int> sizes, int bands) : sizes_(std::move(sizes)), bands_(bands) {
  if (sizes_.empty()) throw InvalidArgument("lattice needs at least one axis");
  if (bands_ < 1) throw InvalidArgument("bands must be >= 1");
  cells_ = 1;
  for (int s : sizes_) {
    if (s < 1) throw InvalidArgument("lattice sizes must be positive, got " + std::to_string(s));
    cells_ *= s;
  }
}

int SiteIndex::linear_cell(std::span<const int> cell) const {
  int linear = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) linear = linear * sizes_[i] + cell[i];
  return linear;
}

std::vector<int> SiteIndex::cell_coords(int linear) const {
  std::vector<int> cell(sizes_.size());
  for (std::size_t i = sizes_.size(); i-- > 0;) {
    cell[i] = linear % sizes_[i];
    linear /= sizes_[i];
  }
  return cell;
}

RealSpaceOperator::RealSpaceOperator(CMatrix matrix, SiteIndex index, BoundarySpec boundary)
    : matrix_(std::move(matrix)), index_(std::move(index)), boundary_(std::move(boundary)) {
  if (matrix_.rows() != matrix_.cols()) throw InvalidArgument("operator matrix must be square");
  if (matrix_.rows() != index_.rows())
    throw InvalidArgument("operator matrix size does not match the site index");
}

RealSpaceOperator RealSpaceOperator::from_matrix(CMatrix matrix) {
  const int n = static_cast<int>(matrix.rows());
  return RealSpaceOperator(std::move(matrix), SiteIndex({n}, 1),
                           BoundarySpec::uniform(1, AxisBoundary::open()));
}

RealSpaceOperator build(const LatticeModel& model, const std::vector<int>& sizes,
                        const BoundarySpec& boundary) {
  const int d = model.dimension();
  if (static_cast<int>(sizes.size()) != d)
    throw InvalidArgument("sizes has " + std::to_string(sizes.size()) + " axes, model has " +
                          std::to_string(d));
  if (static_cast<int>(boundary.axes.size()) != d)
    throw InvalidArgument("boundary spec has " + std::to_string(boundary.axes.size()) +
                          " axes, model has " + std::to_string(d));
  for (int i = 0; i < d; ++i) {
    if (sizes[i] < 2)
      throw InvalidArgument("axis " + std::to_string(i) + " needs at least 2 cells, got " +
                            std::to_string(sizes[i]));
    if (model.range(i) >= sizes[i])
      throw InvalidArgument("hopping range " + std::to_string(model.range(i)) + " on axis " +
                            std::to_string(i) + " does not fit a lattice of " +
                            std::to_string(sizes[i]) + " cells");
  }
  SiteIndex index(sizes, model.bands());
  const int b = model.bands();
  CMatrix h = CMatrix::Zero(index.rows(), index.rows());
  std::vector<int> target(d);
  for (int m = 0; m < index.cells(); ++m) {
    const auto cell = index.cell_coords(m);
    for (const auto& term : model.terms()) {
      cplx factor(1.0);
      for (int i = 0; i < d; ++i) {
        int t = cell[i] + term.offset[i];
        if (t < 0 || t >= sizes[i]) {
          t = ((t % sizes[i]) + sizes[i]) % sizes[i];
          factor *= boundary.axes[i].wrap_factor();
        }
        target[i] = t;
      }
      if (factor == cplx(0.0)) continue;
      const int row0 = m * b;
      const int col0 = index.linear_cell(target) * b;
      h.block(row0, col0, b, b) += factor * term.amplitude;
    }
  }
  return RealSpaceOperator(std::move(h), std::move(index), boundary);
}

RealSpaceOperator build_chain(const LatticeModel& model, int n, AxisBoundary boundary) {
  return build(model, {n}, BoundarySpec::uniform(1, boundary));
}

RealSpaceOperator add_onsite_disorder(const RealSpaceOperator& op, double strength,
                                      std::uint64_t seed) {
  if (!(strength >= 0.0)) throw InvalidArgument("disorder strength must be >= 0");
  CMatrix h = op.matrix();
  if (strength > 0.0) {
    std::mt19937_64 rng(seed);
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      // 53 random bits -> [0, 1); avoids implementation-defined distributions.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      h(i, i) += strength * (2.0 * u - 1.0);
    }
  }
  return RealSpaceOperator(std::move(h), op.index(), op.boundary());
}

void write_matrix_csv(std::ostream& out, const RealSpaceOperator& op) {
  out << "row,col,re,im\n";
  const CMatrix& h = op.matrix();
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      if (h(i, j) != cplx(0.0))
        out << i << ',' << j << ',' << format_double(h(i, j).real()) << ','
            << format_double(h(i, j).imag()) << '\n';
}

}  // namespace nhskin
