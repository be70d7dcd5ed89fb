// Direct solves, extreme generalized eigenvalues, and the discrete inf-sup constant.

#ifndef BIOTFE_SOLVER_HPP
#define BIOTFE_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "biotfe/sparse.hpp"

namespace biotfe {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  /// Only the lower triangle is read; the upper triangle is mirrored from it.
  bool symmetric = true;
  double residual_tol = 1e-10;
  int refinement_steps = 1;
};

/// Sparse LU (COLAMD ordering) on a symmetrically equilibrated copy of the matrix.
/// Factor once, solve many right-hand sides.
class DirectSolver {
 public:
  explicit DirectSolver(const SparseMatrix& a, SolveOptions options = {}) : options_(options) {
    if (a.rows() != a.cols()) throw SolverError("direct solve needs a square matrix");
    n_ = a.rows();
    Eigen::SparseMatrix<double, Eigen::ColMajor> full;
    if (options.symmetric) {
      Eigen::SparseMatrix<double, Eigen::ColMajor> lower = a.triangularView<Eigen::Lower>();
      full = lower.selfadjointView<Eigen::Lower>();
    } else {
      full = a;
    }
    matrix_ = full;
    // Symmetric scaling S A S with S_i = 1 / sqrt(max_j |a_ij|).
    scale_ = Eigen::VectorXd::Ones(n_);
    Eigen::VectorXd rowmax = Eigen::VectorXd::Zero(n_);
    for (int k = 0; k < full.outerSize(); ++k)
      for (decltype(full)::InnerIterator it(full, k); it; ++it)
        rowmax[it.row()] = std::max(rowmax[it.row()], std::abs(it.value()));
    for (Index i = 0; i < n_; ++i) {
      if (rowmax[i] == 0.0) throw SolverError("structurally singular matrix: empty row " + std::to_string(i));
      scale_[i] = 1.0 / std::sqrt(rowmax[i]);
    }
    Eigen::SparseMatrix<double, Eigen::ColMajor> scaled = scale_.asDiagonal() * full * scale_.asDiagonal();
    scaled.makeCompressed();
    lu_ = std::make_unique<Lu>();
    lu_->analyzePattern(scaled);
    lu_->factorize(scaled);
    if (lu_->info() != Eigen::Success) throw SolverError("numerically singular matrix (LU factorization failed)");
  }

  Index size() const { return n_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    if (b.size() != n_) throw SolverError("right-hand side has wrong length");
    const double bnorm = b.norm();
    if (bnorm == 0.0) return Eigen::VectorXd::Zero(n_);
    Eigen::VectorXd x = raw_solve(b);
    for (int s = 0; s < options_.refinement_steps; ++s) x += raw_solve(b - matrix_ * x);
    const double res = (matrix_ * x - b).norm();
    last_residual_ = res / bnorm;
    if (!(res <= options_.residual_tol * bnorm))
      throw SolverError("direct solve residual " + std::to_string(res / bnorm) + " exceeds tolerance");
    return x;
  }

  /// Relative residual of the last solve.
  double last_residual() const { return last_residual_; }

  const Eigen::SparseMatrix<double, Eigen::ColMajor>& matrix() const { return matrix_; }

 private:
  using Lu = Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor>, Eigen::COLAMDOrdering<int>>;

  Eigen::VectorXd raw_solve(const Eigen::VectorXd& b) const {
    const Eigen::VectorXd y = lu_->solve(scale_.cwiseProduct(b));
    if (lu_->info() != Eigen::Success || !y.allFinite()) throw SolverError("triangular solve failed");
    return scale_.cwiseProduct(y);
  }

  SolveOptions options_;
  Index n_ = 0;
  Eigen::SparseMatrix<double, Eigen::ColMajor> matrix_;
  Eigen::VectorXd scale_;
  std::unique_ptr<Lu> lu_;
  mutable double last_residual_ = 0.0;
};

inline Eigen::VectorXd solve_direct(const SparseMatrix& a, const Eigen::VectorXd& b, SolveOptions options = {}) {
  return DirectSolver(a, options).solve(b);
}

enum class Extreme { min, max };

struct EigenEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct EigenOptions {
  int max_iterations = 500;
  double rel_tol = 1e-6;
  std::uint32_t seed = 42;
};

namespace detail {

/// Largest eigenvalue of X v = theta Y v (X symmetric, Y SPD) by Lanczos on
/// Y^{-1} X in the Y-inner product with full reorthogonalization.
inline EigenEstimate lanczos_max(const SparseMatrix& x, const SparseMatrix& y, const EigenOptions& opt) {
  const Index n = x.rows();
  EigenEstimate est;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double, Eigen::ColMajor>> ychol;
  Eigen::SparseMatrix<double, Eigen::ColMajor> ycol = y;
  ychol.compute(ycol);
  if (ychol.info() != Eigen::Success) throw SolverError("eigensolver: B is not symmetric positive definite");

  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);

  auto ynorm = [&](const Eigen::VectorXd& u) { return std::sqrt(u.dot(y * u)); };
  std::vector<Eigen::VectorXd> basis;
  std::vector<Eigen::VectorXd> ybasis;
  std::vector<double> alpha, beta;
  v /= ynorm(v);
  double previous = 0.0;
  const int cap = static_cast<int>(std::min<Index>(opt.max_iterations, n));
  for (int j = 0; j < cap; ++j) {
    basis.push_back(v);
    ybasis.push_back(y * v);
    const Eigen::VectorXd xv = x * v;
    alpha.push_back(v.dot(xv));
    Eigen::VectorXd w = ychol.solve(xv);
    // Two passes of Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < basis.size(); ++k) w -= ybasis[k].dot(w) * basis[k];
    const double b = ynorm(w);

    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
      t(k, k) = alpha[k];
      if (k + 1 < m) t(k, k + 1) = t(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()[m - 1];
    const double resid = std::abs(b * es.eigenvectors()(m - 1, m - 1));
    est.value = theta;
    est.iterations = j + 1;
    const double scale = std::max(std::abs(theta), 1e-300);
    if ((resid <= opt.rel_tol * scale && std::abs(theta - previous) <= opt.rel_tol * scale) || b <= 1e-14 * scale ||
        m == n) {
      est.converged = true;
      break;
    }
    previous = theta;
    beta.push_back(b);
    v = w / b;
  }
  return est;
}

inline bool is_positive_definite(const SparseMatrix& a) {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double, Eigen::ColMajor>> chol;
  Eigen::SparseMatrix<double, Eigen::ColMajor> c = a;
  chol.compute(c);
  return chol.info() == Eigen::Success;
}

}  // namespace detail

/// Extreme eigenvalue of A x = theta B x with A symmetric and B SPD.
/// The minimum uses shift-invert (A^{-1} B) when A is positive definite.
inline EigenEstimate eig_extreme(const SparseMatrix& a, const SparseMatrix& b, Extreme which,
                                 EigenOptions options = {}) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw SolverError("eigensolver: dimension mismatch");
  if (a.rows() == 0) throw SolverError("eigensolver: empty matrices");
  if (which == Extreme::max) return detail::lanczos_max(a, b, options);
  if (detail::is_positive_definite(a)) {
    EigenEstimate inv = detail::lanczos_max(b, a, options);
    inv.value = 1.0 / inv.value;
    return inv;
  }
  const SparseMatrix neg = -a;
  EigenEstimate e = detail::lanczos_max(neg, b, options);
  e.value = -e.value;
  return e;
}

struct InfSupEstimate {
  /// sqrt of the smallest eigenvalue on the zero-mean complement.
  double gamma = 0.0;
  /// sqrt of the smallest eigenvalue above the numerical-zero threshold.
  double gamma_nonzero = 0.0;
  /// Number of numerically zero eigenvalues on the zero-mean complement.
  Index kernel_dimension = 0;
  /// No velocity unknowns or a single pressure unknown: nothing to estimate.
  bool degenerate = false;
};

/// gamma_h^2 = min theta with B A^{-1} B^T q = theta M q on {q : sum M q = 0}.
/// `b_div` is (n_p x n_v), `a_vel` SPD, `m_press` diagonal SPD.
inline InfSupEstimate infsup_estimate(const SparseMatrix& b_div, const SparseMatrix& a_vel, const SparseMatrix& m_press,
                                      double zero_tol = 1e-10) {
  InfSupEstimate out;
  const Index np = b_div.rows();
  const Index nv = b_div.cols();
  if (a_vel.rows() != nv || m_press.rows() != np) throw SolverError("inf-sup: dimension mismatch");
  if (nv == 0 || np <= 1) {
    out.degenerate = true;
    out.kernel_dimension = std::max<Index>(np - 1, 0);
    return out;
  }
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double, Eigen::ColMajor>> chol;
  Eigen::SparseMatrix<double, Eigen::ColMajor> acol = a_vel;
  chol.compute(acol);
  if (chol.info() != Eigen::Success) throw SolverError("inf-sup: velocity matrix is not SPD");

  Eigen::VectorXd msqrt_inv(np);
  for (Index i = 0; i < np; ++i) {
    const double m = m_press.coeff(i, i);
    if (!(m > 0.0)) throw SolverError("inf-sup: pressure mass must be diagonal positive");
    msqrt_inv[i] = 1.0 / std::sqrt(m);
  }
  const Eigen::MatrixXd bt = Eigen::MatrixXd(b_div.transpose()) * msqrt_inv.asDiagonal();
  const Eigen::MatrixXd x = chol.solve(bt);
  Eigen::MatrixXd s = bt.transpose() * x;
  s = 0.5 * (s + s.transpose()).eval();

  // Push the constant direction M^{1/2} 1 out of the bottom of the spectrum.
  Eigen::VectorXd c(np);
  for (Index i = 0; i < np; ++i) c[i] = 1.0 / msqrt_inv[i];
  c.normalize();
  const double shift = s.trace() + 1.0;
  s += shift * c * c.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = std::max(ev[np - 1] - shift, ev[np - 2]);
  out.gamma = std::sqrt(std::max(ev[0], 0.0));
  for (Index i = 0; i < np; ++i) {
    if (ev[i] <= zero_tol * top) {
      ++out.kernel_dimension;
    } else {
      out.gamma_nonzero = std::sqrt(ev[i]);
      break;
    }
  }
  if (out.kernel_dimension > 0) out.gamma = 0.0;
  return out;
}

}  // namespace biotfe

#endif  // BIOTFE_SOLVER_HPP
