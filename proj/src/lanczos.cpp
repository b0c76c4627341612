#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mott/eigensolver.hpp"
#include "mott/errors.hpp"

namespace mott {

namespace {

void project_out(Eigen::VectorXcd& w, const std::vector<Eigen::VectorXcd>& locked) {
  for (const auto& q : locked) w -= q * q.dot(w);
}

Eigen::VectorXcd random_start(std::size_t n, std::mt19937_64& rng,
                              const std::vector<Eigen::VectorXcd>& locked) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(gauss(rng), gauss(rng));
  project_out(v, locked);
  project_out(v, locked);
  return v.normalized();
}

}  // namespace

std::vector<EigenPair> lanczos_lowest(const SparseOperator& op, std::size_t count,
                                      const LanczosOptions& options) {
  const std::size_t n = op.dim();
  if (count == 0) return {};
  if (count > n) throw ValidationError("requested more eigenpairs than the operator dimension");

  std::mt19937_64 rng(options.seed);
  std::vector<Eigen::VectorXcd> locked;
  std::vector<EigenPair> found;
  locked.reserve(count);

  for (std::size_t target = 0; target < count; ++target) {
    const std::size_t available = n - locked.size();
    const std::size_t m = std::max<std::size_t>(1, std::min(options.krylov_dim, available));
    Eigen::VectorXcd start = random_start(n, rng, locked);
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;

    Eigen::MatrixXcd basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    std::vector<double> alpha(m), beta(m);

    for (int restart = 0; restart <= options.max_restarts && !converged; ++restart) {
      basis.col(0) = start;
      Eigen::Index built = 0;
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
        Eigen::VectorXcd w = op.apply(Eigen::VectorXcd(basis.col(j)));
        alpha[static_cast<std::size_t>(j)] = basis.col(j).dot(w).real();
        // Two passes of classical Gram-Schmidt against the Krylov basis and locked vectors.
        for (int pass = 0; pass < 2; ++pass) {
          project_out(w, locked);
          const Eigen::VectorXcd h = basis.leftCols(j + 1).adjoint() * w;
          w -= basis.leftCols(j + 1) * h;
        }
        built = j + 1;
        const double b = w.norm();
        beta[static_cast<std::size_t>(j)] = b;
        if (j + 1 == static_cast<Eigen::Index>(m)) break;
        if (b <= 1e-13 * std::max(1.0, std::abs(alpha[static_cast<std::size_t>(j)]))) break;
        basis.col(j + 1) = w / b;
      }

      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(built, built);
      for (Eigen::Index j = 0; j < built; ++j) {
        tri(j, j) = alpha[static_cast<std::size_t>(j)];
        if (j + 1 < built) tri(j, j + 1) = tri(j + 1, j) = beta[static_cast<std::size_t>(j)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tri);
      const Eigen::VectorXd y = small.eigenvectors().col(0);
      Eigen::VectorXcd x = basis.leftCols(built) * y.cast<cplx>();
      project_out(x, locked);
      x.normalize();

      const Eigen::VectorXcd hx = op.apply(x);
      const double theta = x.dot(hx).real();
      residual = (hx - theta * x).norm();
      if (residual <= options.tolerance * std::max(1.0, std::abs(theta))) {
        converged = true;
        locked.push_back(x);
        found.push_back({theta, std::move(x)});
      } else {
        start = std::move(x);
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "Lanczos did not converge for eigenpair " << target << " after "
          << options.max_restarts << " restarts (dimension " << n << ", residual " << residual
          << ")";
      throw ConvergenceError(msg.str(), residual);
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return found;
}

}  // namespace mott
