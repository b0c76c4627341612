#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mott/hilbert.hpp"

namespace mott {

struct MatrixEntry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Square sparse operator in coordinate form.
///
/// Entries are kept sorted by (row, col) with duplicates merged, so the
/// coordinate list doubles as a CSR layout through row_offsets().
class SparseOperator {
 public:
  SparseOperator(std::size_t dim, std::vector<MatrixEntry> entries);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const MatrixEntry> entries() const noexcept { return entries_; }
  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }

  bool is_real() const noexcept { return real_; }

  // Row-parallel CSR product, y = A x.
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  Eigen::VectorXcd apply(const ManyBodyState& state) const;

  cplx expectation(const Eigen::VectorXcd& x) const;

  // max |A_rc - conj(A_cr)| over stored entries.
  double hermiticity_defect() const;

  Eigen::MatrixXcd to_dense() const;

 private:
  std::size_t dim_;
  std::vector<MatrixEntry> entries_;
  std::vector<std::size_t> row_offsets_;
  bool real_ = true;
};

}  // namespace mott
