// CSR storage, triplet accumulation, block composition, MatrixMarket output.

#ifndef BIOTFE_SPARSE_HPP
#define BIOTFE_SPARSE_HPP

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "biotfe/mesh.hpp"

namespace biotfe {

/// Compressed row storage; column indices sorted, duplicates summed.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

class TripletBuffer {
 public:
  TripletBuffer(Index rows, Index cols) : rows_(rows), cols_(cols) {}

  void add(Index i, Index j, double v) {
    if (v != 0.0) entries_.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  SparseMatrix build() const {
    SparseMatrix m(rows_, cols_);
    m.setFromTriplets(entries_.begin(), entries_.end());
    m.makeCompressed();
    return m;
  }

 private:
  Index rows_;
  Index cols_;
  std::vector<Eigen::Triplet<double>> entries_;
};

/// max |A_ij - A_ji|.
inline double symmetry_defect(const SparseMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  const SparseMatrix diff = a - SparseMatrix(a.transpose());
  double m = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

inline double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

inline bool is_symmetric(const SparseMatrix& a, double rel_tol = 1e-12) {
  return symmetry_defect(a) <= rel_tol * max_abs(a);
}

/// One placed block of a monolithic matrix.
struct BlockPlacement {
  const SparseMatrix* block = nullptr;
  Index row_offset = 0;
  Index col_offset = 0;
  double scale = 1.0;
  bool transpose = false;
};

inline SparseMatrix compose_blocks(Index rows, Index cols, const std::vector<BlockPlacement>& placements) {
  TripletBuffer t(rows, cols);
  for (const auto& p : placements) {
    if (p.block == nullptr || p.scale == 0.0) continue;
    const SparseMatrix& b = *p.block;
    for (int k = 0; k < b.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
        const Index i = p.transpose ? it.col() : it.row();
        const Index j = p.transpose ? it.row() : it.col();
        t.add(p.row_offset + i, p.col_offset + j, p.scale * it.value());
      }
  }
  return t.build();
}

inline SparseMatrix sparse_diagonal(const Eigen::VectorXd& d) {
  TripletBuffer t(d.size(), d.size());
  for (Index i = 0; i < d.size(); ++i) t.add(i, i, d[i]);
  return t.build();
}

inline SparseMatrix sparse_from_dense(const Eigen::MatrixXd& d) {
  return d.sparseView();
}

/// MatrixMarket coordinate format, general real, 1-based indices.
inline void write_matrix_market(std::ostream& os, const SparseMatrix& a) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace biotfe

#endif  // BIOTFE_SPARSE_HPP
