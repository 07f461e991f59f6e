#pragma once

#include "qjacobi/error.hpp"
#include "qjacobi/matrix.hpp"
#include "qjacobi/ncpoly.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace qjacobi {

/// Coefficient algebra usable inside a Series: NCPoly or Matrix.
template <class C>
concept SeriesCoefficient = requires(const C &a, const C &b, const Scalar &s) {
  { a + b } -> std::convertible_to<C>;
  { a - b } -> std::convertible_to<C>;
  { a * b } -> std::convertible_to<C>;
  { a * s } -> std::convertible_to<C>;
  { -a } -> std::convertible_to<C>;
  { a.zero_like() } -> std::convertible_to<C>;
  { a.identity_like() } -> std::convertible_to<C>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.compatible_with(b) } -> std::convertible_to<bool>;
  { a.describe_kind() } -> std::convertible_to<std::string>;
};

/// Power series in h known modulo h^order: coefficient k multiplies h^k.
/// Binary operations return the smaller of the two orders.
template <SeriesCoefficient C>
class Series {
public:
  explicit Series(std::vector<C> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty())
      throw DomainError("series order must be positive");
    for (const auto &c : coeffs_)
      if (!c.compatible_with(coeffs_[0]))
        throw MismatchError("series coefficients of different kinds");
  }

  /// The constant series c + 0*h + ... mod h^order.
  static Series constant(const C &c, int order) {
    if (order <= 0)
      throw DomainError("series order must be positive");
    std::vector<C> v(static_cast<std::size_t>(order), c.zero_like());
    v[0] = c;
    return Series(std::move(v));
  }
  static Series one(const C &like, int order) { return constant(like.identity_like(), order); }
  static Series zero(const C &like, int order) { return constant(like.zero_like(), order); }

  int order() const { return static_cast<int>(coeffs_.size()); }
  const C &operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  C &operator[](int k) { return coeffs_.at(static_cast<std::size_t>(k)); }
  const std::vector<C> &coeffs() const { return coeffs_; }

  Series zero_like() const { return zero(coeffs_[0], order()); }
  Series identity_like() const { return one(coeffs_[0], order()); }
  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const C &c) { return c.is_zero(); });
  }
  bool is_one() const {
    if (!(coeffs_[0] == coeffs_[0].identity_like()))
      return false;
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const C &c) { return c.is_zero(); });
  }
  bool compatible_with(const Series &o) const { return coeffs_[0].compatible_with(o.coeffs_[0]); }
  std::string describe_kind() const { return "series of " + coeffs_[0].describe_kind(); }

  /// Drops h^n and above.  n may not exceed the known order.
  Series truncate(int n) const {
    if (n <= 0)
      throw DomainError("truncate: order must be positive");
    if (n > order())
      throw DomainError("truncate: requested order " + std::to_string(n) + " exceeds known order " +
                        std::to_string(order()));
    return Series(std::vector<C>(coeffs_.begin(), coeffs_.begin() + n));
  }

  /// Multiplies by h^k; the known order grows by k.
  Series shift(int k) const {
    std::vector<C> v(static_cast<std::size_t>(k), coeffs_[0].zero_like());
    v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    return Series(std::move(v));
  }

  Series operator-() const {
    Series r = *this;
    for (auto &c : r.coeffs_)
      c = -c;
    return r;
  }
  Series &operator+=(const Series &o) { return *this = *this + o; }
  Series &operator-=(const Series &o) { return *this = *this - o; }

  friend Series operator+(const Series &a, const Series &b) {
    a.require_compatible(b, "add");
    int n = std::min(a.order(), b.order());
    std::vector<C> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      v.push_back(a[k] + b[k]);
    return Series(std::move(v));
  }
  friend Series operator-(const Series &a, const Series &b) {
    a.require_compatible(b, "sub");
    int n = std::min(a.order(), b.order());
    std::vector<C> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      v.push_back(a[k] - b[k]);
    return Series(std::move(v));
  }
  /// Cauchy product; coefficient multiplication keeps the factor order.
  friend Series operator*(const Series &a, const Series &b) {
    a.require_compatible(b, "mul");
    int n = std::min(a.order(), b.order());
    std::vector<C> v(static_cast<std::size_t>(n), a[0].zero_like());
    for (int i = 0; i < n; ++i) {
      if (a[i].is_zero())
        continue;
      for (int j = 0; i + j < n; ++j)
        if (!b[j].is_zero())
          v[static_cast<std::size_t>(i + j)] += a[i] * b[j];
    }
    return Series(std::move(v));
  }
  friend Series operator*(Series a, const Scalar &s) {
    for (auto &c : a.coeffs_)
      c = c * s;
    return a;
  }
  friend Series operator*(const Scalar &s, const Series &a) { return a * s; }

  /// Equality modulo h^min(orders).
  friend bool operator==(const Series &a, const Series &b) {
    if (!a.compatible_with(b))
      return false;
    int n = std::min(a.order(), b.order());
    for (int k = 0; k < n; ++k)
      if (!(a[k] == b[k]))
        return false;
    return true;
  }

  /// `h^k: <coefficient>` per line, ascending k.
  std::string to_text() const {
    std::ostringstream os;
    for (int k = 0; k < order(); ++k)
      os << "h^" << k << ": " << coeffs_[static_cast<std::size_t>(k)].to_string() << '\n';
    return os.str();
  }

private:
  void require_compatible(const Series &o, const char *op) const {
    if (!compatible_with(o))
      throw MismatchError(std::string("series ") + op + ": " + describe_kind() + " vs " + o.describe_kind());
  }

  std::vector<C> coeffs_;
};

using PolySeries = Series<NCPoly>;
using MatrixSeries = Series<Matrix>;

enum class SeriesOp { add, sub, mul };

template <SeriesCoefficient C>
Series<C> series_arith(const Series<C> &a, const Series<C> &b, SeriesOp op) {
  switch (op) {
  case SeriesOp::add:
    return a + b;
  case SeriesOp::sub:
    return a - b;
  case SeriesOp::mul:
    return a * b;
  }
  throw DomainError("unknown series op");
}

/// Two-sided inverse via b_0 = 1, b_k = -sum_{j=1..k} a_j b_{k-j}.
/// Requires the constant term to be the identity.
template <SeriesCoefficient C>
Series<C> series_invert(const Series<C> &a) {
  const C one = a[0].identity_like();
  if (!(a[0] == one))
    throw DomainError("series_invert: constant term is not the identity");
  std::vector<C> b(static_cast<std::size_t>(a.order()), a[0].zero_like());
  b[0] = one;
  for (int k = 1; k < a.order(); ++k) {
    C acc = a[0].zero_like();
    for (int j = 1; j <= k; ++j)
      if (!a[j].is_zero())
        acc += a[j] * b[static_cast<std::size_t>(k - j)];
    b[static_cast<std::size_t>(k)] = -acc;
  }
  return Series<C>(std::move(b));
}

/// exp(x) = sum_m x^m / m!, which terminates because x has zero constant term.
template <SeriesCoefficient C>
Series<C> series_exp(const Series<C> &x) {
  if (!x[0].is_zero())
    throw DomainError("series_exp: constant term must be zero");
  Series<C> result = x.identity_like();
  Series<C> power = x.identity_like();
  for (int m = 1; m < x.order(); ++m) {
    power = power * x * Scalar(Rational(1, m));
    result += power;
  }
  return result;
}

template <SeriesCoefficient C>
Series<C> truncate(const Series<C> &a, int n) {
  return a.truncate(n);
}

/// Parses the `h^k: <poly>` text form over the given alphabet.
PolySeries parse_series_text(std::string_view text, AlphabetPtr alphabet);

nlohmann::json alphabet_to_json(const Alphabet &a);
AlphabetPtr alphabet_from_json(const nlohmann::json &j);

/// {"order", "alphabet": {"letters", "inverse_pairs"}, "coeffs": [...]}
nlohmann::json series_to_json(const PolySeries &s);
PolySeries series_from_json(const nlohmann::json &j);
/// {"order", "rows", "cols", "coeffs": [matrix JSON, ...]}
nlohmann::json series_to_json(const MatrixSeries &s);
std::string matrix_series_to_text(const MatrixSeries &s);

/// Substitution whose images are polynomials or series.  When any image is a
/// series, polynomial images are lifted to constant series and the result is
/// truncated to the smallest image order.
using SubstImage = std::variant<NCPoly, PolySeries>;
std::variant<NCPoly, PolySeries> substitute(const NCPoly &p, const std::map<std::string, SubstImage> &images);

/// Convenience wrapper that always yields a series.
PolySeries substitute_series(const NCPoly &p, const std::map<std::string, SubstImage> &images);

} // namespace qjacobi
