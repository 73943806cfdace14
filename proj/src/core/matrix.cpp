#include "skelet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "skelet/error.hpp"
#include "skelet/factor.hpp"

namespace skelet {

Matrix::Matrix(Index rows, Index cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(Index rows, Index cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require(data_.size() == rows_ * cols_, ErrorCode::invalid_argument,
          "matrix data length does not match rows * cols");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, ErrorCode::invalid_argument, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(Index n) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  return diagonal(d.size(), d.size(), d);
}

Matrix Matrix::diagonal(Index m, Index n, std::span<const double> d) {
  Matrix out(m, n);
  for (Index i = 0; i < std::min({m, n, d.size()}); ++i) out(i, i) = d[i];
  return out;
}

std::vector<double> Matrix::col(Index j) const {
  std::vector<double> c(rows_);
  for (Index i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_col(Index j, std::span<const double> v) {
  for (Index i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (Index i = 0; i < rows_; ++i)
    for (Index j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(Index r0, Index c0, Index nr, Index nc) const {
  require(r0 + nr <= rows_ && c0 + nc <= cols_, ErrorCode::out_of_range,
          "block exceeds matrix bounds");
  Matrix b(nr, nc);
  for (Index i = 0; i < nr; ++i)
    std::copy_n(data_.begin() + (r0 + i) * cols_ + c0, nc, b.data_.begin() + i * nc);
  return b;
}

Matrix Matrix::select_cols(std::span<const Index> idx) const {
  Matrix b(rows_, idx.size());
  for (Index j = 0; j < idx.size(); ++j)
    require(idx[j] < cols_, ErrorCode::out_of_range, "column index out of range");
  for (Index i = 0; i < rows_; ++i)
    for (Index j = 0; j < idx.size(); ++j) b(i, j) = (*this)(i, idx[j]);
  return b;
}

Matrix Matrix::select_rows(std::span<const Index> idx) const {
  Matrix b(idx.size(), cols_);
  for (Index i = 0; i < idx.size(); ++i) {
    require(idx[i] < rows_, ErrorCode::out_of_range, "row index out of range");
    std::copy_n(data_.begin() + idx[i] * cols_, cols_, b.data_.begin() + i * cols_);
  }
  return b;
}

void Matrix::set_block(Index r0, Index c0, const Matrix& b) {
  require(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, ErrorCode::out_of_range,
          "block exceeds matrix bounds");
  for (Index i = 0; i < b.rows_; ++i)
    std::copy_n(b.data_.begin() + i * b.cols_, b.cols_,
                data_.begin() + (r0 + i) * cols_ + c0);
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix& Matrix::operator+=(const Matrix& b) {
  require(rows_ == b.rows_ && cols_ == b.cols_, ErrorCode::invalid_argument,
          "shape mismatch in +");
  for (Index i = 0; i < data_.size(); ++i) data_[i] += b.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& b) {
  require(rows_ == b.rows_ && cols_ == b.cols_, ErrorCode::invalid_argument,
          "shape mismatch in -");
  for (Index i = 0; i < data_.size(); ++i) data_[i] -= b.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::invalid_argument, "shape mismatch in *");
  Matrix c(a.rows(), b.cols());
  const Index n = b.cols();
  for (Index i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i).data();
    for (Index l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      const double* bl = b.row(l).data();
      for (Index j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
  return c;
}

Matrix mul_tn(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), ErrorCode::invalid_argument, "shape mismatch in A^T B");
  Matrix c(a.cols(), b.cols());
  const Index n = b.cols();
  for (Index l = 0; l < a.rows(); ++l) {
    const double* bl = b.row(l).data();
    for (Index i = 0; i < a.cols(); ++i) {
      const double ali = a(l, i);
      if (ali == 0.0) continue;
      double* ci = c.row(i).data();
      for (Index j = 0; j < n; ++j) ci[j] += ali * bl[j];
    }
  }
  return c;
}

Matrix mul_nt(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), ErrorCode::invalid_argument, "shape mismatch in A B^T");
  Matrix c(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.rows(); ++j) c(i, j) = dot(a.row(i), b.row(j));
  return c;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), ErrorCode::invalid_argument, "row mismatch in hcat");
  Matrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) {
  // Scaled to avoid overflow/underflow for extreme entries.
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : x) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

double spectral_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  return singular_values(a).front();
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

double orthonormality_defect(const Matrix& q) {
  Matrix g = mul_tn(q, q);
  for (Index i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frobenius_norm(g);
}

Matrix permutation_matrix(std::span<const Index> perm) {
  Matrix p(perm.size(), perm.size());
  for (Index j = 0; j < perm.size(); ++j) p(perm[j], j) = 1.0;
  return p;
}

void write_matrix(std::ostream& os, const Matrix& a) {
  os << a.rows() << ' ' << a.cols() << '\n';
  os << std::setprecision(17);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) os << ' ';
      os << a(i, j);
    }
    os << '\n';
  }
}

Matrix read_matrix(std::istream& is) {
  long long rows = -1, cols = -1;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0)
    fail(ErrorCode::parse, "matrix file: expected header 'rows cols'");
  Matrix a(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < a.size(); ++i) {
    std::string tok;
    if (!(is >> tok))
      fail(ErrorCode::parse, "matrix file: expected " + std::to_string(a.size()) +
                                 " entries, got " + std::to_string(i));
    std::istringstream ts(tok);
    double v = 0.0;
    if (!(ts >> v) || !ts.eof())
      fail(ErrorCode::parse, "matrix file: bad entry '" + tok + "'");
    if (!std::isfinite(v)) fail(ErrorCode::non_finite, "matrix file: non-finite entry");
    a.data()[i] = v;
  }
  std::string extra;
  if (is >> extra) fail(ErrorCode::parse, "matrix file: trailing data after entries");
  return a;
}

void save_matrix(const std::string& path, const Matrix& a) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  write_matrix(os, a);
  if (!os) fail(ErrorCode::io, "write failed for '" + path + "'");
}

Matrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::io, "cannot open '" + path + "'");
  return read_matrix(is);
}

}  // namespace skelet
