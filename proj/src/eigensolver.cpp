#include "mott/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mott/errors.hpp"

namespace mott {

namespace {

struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

DenseSpectrum dense_solve(const SparseOperator& op, bool want_vectors) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  const auto mode = want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (op.is_real()) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : op.entries())
      m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, mode);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", NAN);
    return {es.eigenvalues(), want_vectors ? Eigen::MatrixXcd(es.eigenvectors().cast<cplx>())
                                           : Eigen::MatrixXcd()};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.to_dense(), mode);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", NAN);
  return {es.eigenvalues(), want_vectors ? Eigen::MatrixXcd(es.eigenvectors()) : Eigen::MatrixXcd()};
}

}  // namespace

GroundState ground_state(const SparseOperator& op, BasisPtr basis, const SolverOptions& options) {
  if (!basis || basis->dimension() != op.dim())
    throw ValidationError("basis dimension does not match operator");
  if (op.dim() == 0) throw ValidationError("empty operator");

  double energy = 0.0;
  Eigen::VectorXcd vector;
  if (op.dim() <= options.dense_threshold) {
    auto spectrum = dense_solve(op, true);
    energy = spectrum.values[0];
    vector = spectrum.vectors.col(0);
  } else {
    auto pairs = lanczos_lowest(op, 1, options.lanczos);
    energy = pairs.front().value;
    vector = std::move(pairs.front().vector);
  }

  ManyBodyState state(std::move(basis), std::move(vector));
  state.fix_phase();
  const double residual = (op.apply(state) - energy * state.amplitudes()).norm();
  const double bound = 1e-10 * std::max(1.0, std::abs(energy));
  if (!(residual <= bound)) {
    std::ostringstream msg;
    msg << "ground state residual " << residual << " exceeds " << bound;
    throw ConvergenceError(msg.str(), residual);
  }
  return {energy, std::move(state), residual};
}

std::vector<double> spectrum_lowest(const SparseOperator& op, std::size_t k,
                                    const SolverOptions& options) {
  if (k > op.dim()) throw ValidationError("requested more eigenvalues than the operator dimension");
  std::vector<double> out;
  out.reserve(k);
  if (op.dim() <= options.dense_threshold) {
    const auto spectrum = dense_solve(op, false);
    for (std::size_t i = 0; i < k; ++i) out.push_back(spectrum.values[static_cast<Eigen::Index>(i)]);
  } else {
    for (const auto& pair : lanczos_lowest(op, k, options.lanczos)) out.push_back(pair.value);
  }
  return out;
}

std::vector<Level> group_levels(const std::vector<double>& ascending, double rel_tol) {
  std::vector<Level> levels;
  for (double e : ascending) {
    if (!levels.empty() &&
        std::abs(e - levels.back().energy) <= rel_tol * std::max(1.0, std::abs(levels.back().energy))) {
      ++levels.back().multiplicity;
    } else {
      levels.push_back({e, 1});
    }
  }
  return levels;
}

}  // namespace mott
