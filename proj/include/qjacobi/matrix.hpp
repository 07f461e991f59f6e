#pragma once

#include "qjacobi/scalar.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace qjacobi {

/// Sparse exact matrix with Scalar entries, stored row-wise.
class Matrix {
public:
  using Row = std::map<std::size_t, Scalar>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

  static Matrix identity(std::size_t n);
  static Matrix from_dense(const std::vector<std::vector<Rational>> &rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  std::size_t nonzeros() const;

  Scalar at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Scalar &v);
  void add(std::size_t i, std::size_t j, const Scalar &v);
  const Row &row(std::size_t i) const { return data_[i]; }

  bool is_zero() const;
  bool is_identity() const;
  bool is_rational() const;
  Matrix zero_like() const { return Matrix(rows_, cols_); }
  Matrix identity_like() const;
  bool compatible_with(const Matrix &o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string describe_kind() const;

  Matrix transpose() const;
  Scalar trace() const;

  Matrix operator-() const;
  Matrix &operator+=(const Matrix &o);
  Matrix &operator-=(const Matrix &o);
  Matrix &operator*=(const Scalar &s);
  friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
  friend Matrix operator*(const Matrix &a, const Matrix &b);
  friend Matrix operator*(Matrix a, const Scalar &s) { return a *= s; }
  friend Matrix operator*(const Scalar &s, Matrix a) { return a *= s; }
  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Dense row-major JSON: {"rows", "cols", "data": [["p/q", ...], ...]}.
  nlohmann::json to_json() const;
  static Matrix from_json(const nlohmann::json &j);
  /// One line per row, entries separated by single spaces.
  std::string to_text() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Row> data_;
};

/// Kronecker product with the (i,j) -> i*cols(b)+j index convention.
Matrix kron(const Matrix &a, const Matrix &b);

/// Exact rank over the rationals (Gaussian elimination); entries must be rational.
std::size_t rank(const Matrix &m);

/// Monic minimal polynomial, coefficients c0..c_m (c_m = 1), found as the
/// first linear dependence among I, A, A^2, ...
std::vector<Rational> minimal_polynomial(const Matrix &a);

/// Rational roots of a polynomial with rational coefficients (ascending),
/// each listed once, in increasing order.
std::vector<Rational> rational_roots(const std::vector<Rational> &coeffs);

/// Evaluates a polynomial (ascending coefficients) at a square matrix.
Matrix poly_eval(const std::vector<Rational> &coeffs, const Matrix &a);

} // namespace qjacobi
