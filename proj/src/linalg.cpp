#include "cutheat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace cutheat {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument("triplet index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());

  std::size_t k = 0;
  for (int r = 0; r < rows; ++r) {
    while (k < entries.size() && entries[k].row == r) {
      const int c = entries[k].col;
      double v = 0.0;
      while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
        v += entries[k].value;
        ++k;
      }
      m.col_idx_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_ptr_[r + 1] = static_cast<int>(m.col_idx_.size());
  }
  return m;
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ ||
      static_cast<int>(y.size()) != rows_) {
    throw std::invalid_argument("sparse apply: size mismatch");
  }
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      acc += values_[k] * x[col_idx_[k]];
    }
    y[r] = acc;
  }
}

std::vector<double> SparseMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(rows_, 0.0);
  apply(x, y);
  return y;
}

double SparseMatrix::coeff(int i, int j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it != end && *it == j) {
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
  }
  return 0.0;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::max_asymmetry() const {
  if (rows_ != cols_) throw std::invalid_argument("asymmetry: square only");
  double m = 0.0;
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      m = std::max(m, std::abs(values_[k] - coeff(col_idx_[k], r)));
    }
  }
  return m;
}

SparseMatrix SparseMatrix::combine(double alpha, const SparseMatrix& a,
                                   double beta, const SparseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw std::invalid_argument("combine: dimension mismatch");
  }
  std::vector<Triplet> tr;
  tr.reserve(a.values_.size() + b.values_.size());
  for (int r = 0; r < a.rows_; ++r) {
    for (int k = a.row_ptr_[r]; k < a.row_ptr_[r + 1]; ++k) {
      tr.push_back({r, a.col_idx_[k], alpha * a.values_[k]});
    }
    for (int k = b.row_ptr_[r]; k < b.row_ptr_[r + 1]; ++k) {
      tr.push_back({r, b.col_idx_[k], beta * b.values_[k]});
    }
  }
  return from_triplets(a.rows_, a.cols_, std::move(tr));
}

BandedMatrix::BandedMatrix(int n, int lower, int upper)
    : n_(n), kl_(lower), ku_(upper), ldab_(2 * lower + upper + 1) {
  if (n <= 0 || lower < 0 || upper < 0 || lower >= n + 1 || upper >= n + 1) {
    throw std::invalid_argument("banded matrix: bad dimensions");
  }
  store_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
}

BandedMatrix BandedMatrix::from_sparse(const SparseMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("from_sparse: square only");
  }
  int kl = 0;
  int ku = 0;
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  for (int r = 0; r < a.rows(); ++r) {
    for (int k = rp[r]; k < rp[r + 1]; ++k) {
      kl = std::max(kl, r - ci[k]);
      ku = std::max(ku, ci[k] - r);
    }
  }
  BandedMatrix b(a.rows(), kl, ku);
  for (int r = 0; r < a.rows(); ++r) {
    for (int k = rp[r]; k < rp[r + 1]; ++k) {
      b.at(r, ci[k]) = a.values()[k];
    }
  }
  return b;
}

double& BandedMatrix::at(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i - j > kl_ || j - i > ku_ + kl_) {
    throw std::invalid_argument("banded at(): outside band");
  }
  return store_[idx(i, j)];
}

double BandedMatrix::get(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw std::invalid_argument("banded get(): out of range");
  }
  if (i - j > kl_ || j - i > ku_ + kl_) return 0.0;
  return store_[idx(i, j)];
}

void BandedMatrix::factorize() {
  max_abs_input_ = 0.0;
  for (double v : store_) max_abs_input_ = std::max(max_abs_input_, std::abs(v));
  pivots_.assign(n_, 0);

  // Row pivoting can push fill into the kl extra upper diagonals reserved by
  // the storage layout (total upper width ku + kl).
  const int kw = ku_ + kl_;
  for (int j = 0; j < n_; ++j) {
    const int imax = std::min(j + kl_, n_ - 1);
    int p = j;
    double pmax = std::abs(store_[idx(j, j)]);
    for (int i = j + 1; i <= imax; ++i) {
      const double v = std::abs(store_[idx(i, j)]);
      if (v > pmax) {
        pmax = v;
        p = i;
      }
    }
    if (pmax == 0.0) throw SingularMatrixError(j);
    pivots_[j] = p;
    const int cmax = std::min(j + kw, n_ - 1);
    if (p != j) {
      for (int c = j; c <= cmax; ++c) {
        std::swap(store_[idx(j, c)], store_[idx(p, c)]);
      }
    }
    const double piv = store_[idx(j, j)];
    for (int i = j + 1; i <= imax; ++i) {
      const double l = store_[idx(i, j)] / piv;
      store_[idx(i, j)] = l;
      if (l != 0.0) {
        for (int c = j + 1; c <= cmax; ++c) {
          store_[idx(i, c)] -= l * store_[idx(j, c)];
        }
      }
    }
  }

  double max_u = 0.0;
  for (int j = 0; j < n_; ++j) {
    for (int i = std::max(0, j - kw); i <= j; ++i) {
      max_u = std::max(max_u, std::abs(store_[idx(i, j)]));
    }
  }
  growth_ = max_abs_input_ > 0.0 ? max_u / max_abs_input_ : 1.0;
  factorized_ = true;
}

void BandedMatrix::solve_in_place(std::span<double> b) const {
  if (!factorized_) throw std::logic_error("solve before factorize");
  if (static_cast<int>(b.size()) != n_) {
    throw std::invalid_argument("banded solve: size mismatch");
  }
  const int kw = ku_ + kl_;
  for (int j = 0; j < n_; ++j) {
    if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
    const int imax = std::min(j + kl_, n_ - 1);
    for (int i = j + 1; i <= imax; ++i) {
      b[i] -= store_[idx(i, j)] * b[j];
    }
  }
  for (int i = n_ - 1; i >= 0; --i) {
    const int jmax = std::min(i + kw, n_ - 1);
    double acc = b[i];
    for (int j = i + 1; j <= jmax; ++j) {
      acc -= store_[idx(i, j)] * b[j];
    }
    b[i] = acc / store_[idx(i, i)];
  }
}

std::vector<double> BandedMatrix::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

std::vector<double> banded_solve(const BandedMatrix& a,
                                 std::span<const double> b) {
  BandedMatrix f = a;
  if (!f.factorized()) f.factorize();
  return f.solve(b);
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double backward_error(const SparseMatrix& a, std::span<const double> x,
                      std::span<const double> b) {
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& vals = a.values();
  double worst = 0.0;
  for (int r = 0; r < a.rows(); ++r) {
    double res = -b[r];
    double denom = std::abs(b[r]);
    for (int k = rp[r]; k < rp[r + 1]; ++k) {
      res += vals[k] * x[ci[k]];
      denom += std::abs(vals[k] * x[ci[k]]);
    }
    if (denom > 0.0) {
      worst = std::max(worst, std::abs(res) / denom);
    } else if (res != 0.0) {
      worst = 1.0;
    }
  }
  return worst;
}

}  // namespace cutheat
