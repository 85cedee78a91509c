#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cutheat {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Compressed sparse row matrix. Duplicate triplets are summed on build.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_triplets(int rows, int cols,
                                    std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// Entry (i,j), zero if not stored.
  double coeff(int i, int j) const;

  double max_abs() const;
  double max_asymmetry() const;  // max |a_ij - a_ji|, requires square

  /// alpha*A + beta*B, matching sparsity union.
  static SparseMatrix combine(double alpha, const SparseMatrix& a, double beta,
                              const SparseMatrix& b);

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

struct SingularMatrixError : std::runtime_error {
  explicit SingularMatrixError(int pivot)
      : std::runtime_error("singular matrix: zero pivot at index " +
                           std::to_string(pivot)),
        pivot_index(pivot) {}
  int pivot_index;
};

/// Square banded matrix in LAPACK-style packed storage with extra rows for
/// the fill-in produced by row pivoting.
class BandedMatrix {
 public:
  BandedMatrix(int n, int lower, int upper);
  static BandedMatrix from_sparse(const SparseMatrix& a);

  int size() const { return n_; }
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

  double& at(int i, int j);
  double get(int i, int j) const;  // zero outside the band

  /// LU factorization with partial pivoting, in place. Throws
  /// SingularMatrixError on a zero pivot.
  void factorize();
  bool factorized() const { return factorized_; }

  /// Ratio max|U| / max|A|; meaningful after factorize().
  double growth_factor() const { return growth_; }

  void solve_in_place(std::span<double> b) const;
  std::vector<double> solve(std::span<const double> b) const;

 private:
  int idx(int i, int j) const { return kl_ + ku_ + i - j + j * ldab_; }

  int n_ = 0;
  int kl_ = 0;
  int ku_ = 0;
  int ldab_ = 0;
  bool factorized_ = false;
  double max_abs_input_ = 0.0;
  double growth_ = 1.0;
  std::vector<double> store_;
  std::vector<int> pivots_;
};

/// One-shot banded solve: factorize a copy of A, then solve A x = b.
std::vector<double> banded_solve(const BandedMatrix& a,
                                 std::span<const double> b);

double dot(std::span<const double> x, std::span<const double> y);
double norm_inf(std::span<const double> x);

/// Componentwise backward error max_i |Ax - b|_i / (|A||x| + |b|)_i of a
/// computed solution x; rows with zero denominator count only if the residual
/// there is nonzero.
double backward_error(const SparseMatrix& a, std::span<const double> x,
                      std::span<const double> b);

}  // namespace cutheat
