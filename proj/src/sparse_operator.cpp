#include "mott/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mott/errors.hpp"

namespace mott {

SparseOperator::SparseOperator(std::size_t dim, std::vector<MatrixEntry> entries) : dim_(dim) {
  for (const auto& e : entries) {
    if (e.row >= dim_ || e.col >= dim_) throw ValidationError("matrix entry outside operator dimension");
  }
  std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  row_offsets_.assign(dim_ + 1, 0);
  for (const auto& e : entries_) {
    ++row_offsets_[e.row + 1];
    if (e.value.imag() != 0.0) real_ = false;
  }
  for (std::size_t r = 0; r < dim_; ++r) row_offsets_[r + 1] += row_offsets_[r];
}

void SparseOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    std::ostringstream msg;
    msg << "operator of dimension " << dim_ << " applied to vector of length " << x.size();
    throw ValidationError(msg.str());
  }
  const auto rows = static_cast<std::ptrdiff_t>(dim_);
  const MatrixEntry* data = entries_.data();
  const std::size_t* offsets = row_offsets_.data();
#pragma omp parallel for schedule(static) if (dim_ > 2048)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    cplx acc = 0.0;
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) acc += data[k].value * x[data[k].col];
    y[static_cast<std::size_t>(r)] = acc;
  }
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(x.size());
  apply(std::span<const cplx>(x.data(), static_cast<std::size_t>(x.size())),
        std::span<cplx>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

Eigen::VectorXcd SparseOperator::apply(const ManyBodyState& state) const {
  return apply(state.amplitudes());
}

cplx SparseOperator::expectation(const Eigen::VectorXcd& x) const { return x.dot(apply(x)); }

double SparseOperator::hermiticity_defect() const {
  double defect = 0.0;
  for (const auto& e : entries_) {
    const auto begin = entries_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[e.col]);
    const auto end = entries_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[e.col + 1]);
    auto it = std::lower_bound(begin, end, e.row,
                               [](const MatrixEntry& m, std::size_t col) { return m.col < col; });
    const cplx mirror = (it != end && it->col == e.row) ? it->value : cplx(0.0);
    defect = std::max(defect, std::abs(e.value - std::conj(mirror)));
  }
  return defect;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : entries_)
    m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
  return m;
}

}  // namespace mott
