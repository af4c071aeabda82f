#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nhskin/model.hpp"
#include "nhskin/types.hpp"

namespace nhskin {

/// Boundary condition on one lattice axis. Bonds that wrap the axis are
/// multiplied by wrap_factor(): 0 (open), 1 (periodic) or epsilon (coupled).
struct AxisBoundary {
  enum class Kind { Open, Periodic, Coupled };

  Kind kind = Kind::Open;
  cplx epsilon{0.0};

  static AxisBoundary open() { return {Kind::Open, 0.0}; }
  static AxisBoundary periodic() { return {Kind::Periodic, 1.0}; }
  static AxisBoundary coupled(cplx eps) { return {Kind::Coupled, eps}; }

  cplx wrap_factor() const;
};

struct BoundarySpec {
  std::vector<AxisBoundary> axes;

  static BoundarySpec uniform(int dimension, AxisBoundary axis) {
    return {std::vector<AxisBoundary>(dimension, axis)};
  }
};

/// Bijection between (cell, orbital) and matrix rows. Cells are numbered
/// row-major (last axis fastest), orbitals fastest within a cell.
class SiteIndex {
 public:
  SiteIndex(std::vector<int> sizes, int bands);

  int rows() const noexcept { return cells_ * bands_; }
  int cells() const noexcept { return cells_; }
  int bands() const noexcept { return bands_; }
  int dimension() const noexcept { return static_cast<int>(sizes_.size()); }
  const std::vector<int>& sizes() const noexcept { return sizes_; }

  int linear_cell(std::span<const int> cell) const;
  std::vector<int> cell_coords(int linear) const;
  int row(std::span<const int> cell, int orbital) const { return linear_cell(cell) * bands_ + orbital; }
  int cell_of_row(int row) const { return row / bands_; }
  int orbital_of_row(int row) const { return row % bands_; }

 private:
  std::vector<int> sizes_;
  int bands_;
  int cells_;
};

/// Dense Hamiltonian of a finite lattice.
class RealSpaceOperator {
 public:
  RealSpaceOperator(CMatrix matrix, SiteIndex index, BoundarySpec boundary);

  /// Wrap an explicit matrix as a 1D single-orbital chain with open ends.
  static RealSpaceOperator from_matrix(CMatrix matrix);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const SiteIndex& index() const noexcept { return index_; }
  const BoundarySpec& boundary() const noexcept { return boundary_; }
  int size() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  CMatrix matrix_;
  SiteIndex index_;
  BoundarySpec boundary_;
};

/// Entry (row of cell m, col of cell m+d) receives A_d; wrapped bonds are
/// scaled by the axis wrap factor. Requires sizes[i] >= 2 and |d_i| < sizes[i].
RealSpaceOperator build(const LatticeModel& model, const std::vector<int>& sizes,
                        const BoundarySpec& boundary);

/// Convenience: 1D chain of n cells with one boundary kind.
RealSpaceOperator build_chain(const LatticeModel& model, int n, AxisBoundary boundary);

/// Adds i.i.d. uniform [-strength, strength] real diagonal entries drawn
/// from a 64-bit Mersenne Twister seeded with `seed` (bit-reproducible).
RealSpaceOperator add_onsite_disorder(const RealSpaceOperator& op, double strength,
                                      std::uint64_t seed);

/// CSV "row,col,re,im" of the nonzero entries, row-major.
void write_matrix_csv(std::ostream& out, const RealSpaceOperator& op);

}  // namespace nhskin
