#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qjacobi {

using Rational = mpq_class;

/// Parses `p`, `-p` or `p/q` into a canonical rational.
Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational &q);

bool is_identifier(std::string_view s);

/// Product of formal constants, e.g. ipi^2 * zeta3_ipi3.  Factors are sorted
/// by name and every exponent is positive; the empty monomial is 1.
class ConstMonomial {
public:
  ConstMonomial() = default;
  static ConstMonomial symbol(std::string name, int exponent = 1);

  bool empty() const { return factors_.empty(); }
  const std::vector<std::pair<std::string, int>> &factors() const { return factors_; }
  int degree() const;

  ConstMonomial operator*(const ConstMonomial &other) const;
  std::string to_string() const; // "" for the empty monomial

  friend bool operator==(const ConstMonomial &, const ConstMonomial &) = default;
  friend auto operator<=>(const ConstMonomial &a, const ConstMonomial &b) {
    if (auto c = a.degree() <=> b.degree(); c != 0)
      return c;
    return a.factors_ <=> b.factors_;
  }

private:
  std::vector<std::pair<std::string, int>> factors_;
};

/// Exact coefficient: a finite sum of rationals times monomials in formal
/// constants.  Terms are kept sorted by monomial and never hold zero.
class Scalar {
public:
  using Term = std::pair<ConstMonomial, Rational>;

  Scalar() = default;
  Scalar(long v) : Scalar(Rational(v)) {}
  Scalar(const Rational &q);
  Scalar(const Rational &q, ConstMonomial mono);

  static Scalar constant(std::string name, int exponent = 1) {
    return Scalar(Rational(1), ConstMonomial::symbol(std::move(name), exponent));
  }
  /// Parses the scalar text grammar, e.g. `-1/2*ipi^2 + 3`.
  static Scalar parse(std::string_view text);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_rational() const;
  /// Rational value; throws DomainError when formal constants are present.
  Rational rational() const;
  const std::vector<Term> &terms() const { return terms_; }
  /// Names of all formal constants occurring in this scalar.
  std::vector<std::string> constants() const;

  Scalar operator-() const;
  Scalar &operator+=(const Scalar &o);
  Scalar &operator-=(const Scalar &o);
  Scalar &operator*=(const Scalar &o) { return *this = *this * o; }
  /// Division is only defined for nonzero pure-rational divisors.
  Scalar &operator/=(const Scalar &o) { return *this = *this / o; }

  friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
  friend Scalar operator*(const Scalar &a, const Scalar &b);
  friend Scalar operator/(const Scalar &a, const Scalar &b);

  friend bool operator==(const Scalar &a, const Scalar &b) { return a.terms_ == b.terms_; }
  friend std::strong_ordering operator<=>(const Scalar &a, const Scalar &b);

  /// Leading sign for text output: true when the first term is negative.
  bool leading_negative() const;
  std::string to_string() const;

private:
  void add_term(const ConstMonomial &m, const Rational &q);
  std::vector<Term> terms_;
};

enum class ArithOp { add, sub, mul, div };
Scalar scalar_arith(const Scalar &a, const Scalar &b, ArithOp op);

} // namespace qjacobi
