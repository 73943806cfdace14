#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace skelet {

using Index = std::size_t;
using IndexSet = std::vector<Index>;

/// Dense row-major double matrix with value semantics.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Index rows, Index cols, double fill = 0.0);
  Matrix(Index rows, Index cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(Index n);
  static Matrix diagonal(std::span<const double> d);
  /// m x n matrix with diag(d) in the leading block.
  static Matrix diagonal(Index m, Index n, std::span<const double> d);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(Index i, Index j) { return data_[i * cols_ + j]; }
  double operator()(Index i, Index j) const { return data_[i * cols_ + j]; }

  std::span<double> row(Index i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(Index i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::vector<double> col(Index j) const;
  void set_col(Index j, std::span<const double> v);

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;
  Matrix block(Index r0, Index c0, Index nr, Index nc) const;
  Matrix left_cols(Index nc) const { return block(0, 0, rows_, nc); }
  Matrix select_cols(std::span<const Index> idx) const;
  Matrix select_rows(std::span<const Index> idx) const;
  void set_block(Index r0, Index c0, const Matrix& b);

  bool all_finite() const noexcept;

  Matrix& operator+=(const Matrix& b);
  Matrix& operator-=(const Matrix& b);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);

/// A * B.
Matrix operator*(const Matrix& a, const Matrix& b);
/// A^T * B without materializing A^T.
Matrix mul_tn(const Matrix& a, const Matrix& b);
/// A * B^T.
Matrix mul_nt(const Matrix& a, const Matrix& b);

/// Concatenate [a b].
Matrix hcat(const Matrix& a, const Matrix& b);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

double frobenius_norm(const Matrix& a);
/// Largest singular value (exact, via the Jacobi singular values).
double spectral_norm(const Matrix& a);
double max_abs(const Matrix& a);

/// ||Q^T Q - I||_F for a matrix with (supposedly) orthonormal columns.
double orthonormality_defect(const Matrix& q);

/// Permutation matrix P with P(perm[j], j) = 1, so A * P = A(:, perm).
Matrix permutation_matrix(std::span<const Index> perm);

/// Whitespace-delimited text: "rows cols" then row-major entries.
void write_matrix(std::ostream& os, const Matrix& a);
Matrix read_matrix(std::istream& is);
void save_matrix(const std::string& path, const Matrix& a);
Matrix load_matrix(const std::string& path);

}  // namespace skelet
