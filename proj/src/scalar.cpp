#include "qjacobi/scalar.hpp"

#include "qjacobi/error.hpp"
#include "text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qjacobi {

namespace detail {

std::vector<SignedTerm> split_terms(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s.push_back(c);
  if (s.empty())
    throw ParseError("empty expression");

  std::vector<SignedTerm> out;
  std::size_t pos = 0;
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    pos = 1;
  }
  while (true) {
    std::size_t end = s.find_first_of("+-", pos);
    std::string body = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (body.empty())
      throw ParseError("empty term in '" + std::string(text) + "'");
    SignedTerm term;
    term.negative = negative;
    std::size_t start = 0;
    while (true) {
      std::size_t star = body.find('*', start);
      std::string f = body.substr(start, star == std::string::npos ? std::string::npos : star - start);
      if (f.empty())
        throw ParseError("empty factor in '" + std::string(text) + "'");
      term.factors.push_back(std::move(f));
      if (star == std::string::npos)
        break;
      start = star + 1;
    }
    out.push_back(std::move(term));
    if (end == std::string::npos)
      break;
    negative = s[end] == '-';
    pos = end + 1;
  }
  return out;
}

std::pair<std::string, int> split_power(const std::string &factor) {
  auto caret = factor.find('^');
  if (caret == std::string::npos)
    return {factor, 1};
  std::string exp = factor.substr(caret + 1);
  if (exp.empty() || !std::all_of(exp.begin(), exp.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError("bad exponent in '" + factor + "'");
  int e = std::stoi(exp);
  if (e <= 0)
    throw ParseError("exponent must be positive in '" + factor + "'");
  return {factor.substr(0, caret), e};
}

bool is_number(const std::string &factor) {
  if (factor.empty() || !std::isdigit(static_cast<unsigned char>(factor[0])))
    return false;
  return std::all_of(factor.begin(), factor.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '/'; });
}

} // namespace detail

Rational parse_rational(std::string_view text) {
  std::string s(text);
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  if (!detail::is_number(s) || std::count(s.begin(), s.end(), '/') > 1 || s.back() == '/')
    throw ParseError("not a rational: '" + std::string(text) + "'");
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw ParseError("not a rational: '" + std::string(text) + "'");
  if (q.get_den() == 0)
    throw DomainError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string rational_to_string(const Rational &q) { return q.get_str(10); }

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// ---------------------------------------------------------------------------

ConstMonomial ConstMonomial::symbol(std::string name, int exponent) {
  if (!is_identifier(name))
    throw ParseError("invalid constant name '" + name + "'");
  if (exponent <= 0)
    throw DomainError("constant exponents must be positive");
  ConstMonomial m;
  m.factors_.emplace_back(std::move(name), exponent);
  return m;
}

int ConstMonomial::degree() const {
  int d = 0;
  for (const auto &f : factors_)
    d += f.second;
  return d;
}

ConstMonomial ConstMonomial::operator*(const ConstMonomial &other) const {
  ConstMonomial r;
  auto a = factors_.begin(), b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first))
      r.factors_.push_back(*a++);
    else if (a == factors_.end() || b->first < a->first)
      r.factors_.push_back(*b++);
    else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return r;
}

std::string ConstMonomial::to_string() const {
  std::string s;
  for (const auto &[name, e] : factors_) {
    if (!s.empty())
      s += '*';
    s += name;
    if (e != 1)
      s += '^' + std::to_string(e);
  }
  return s;
}

// ---------------------------------------------------------------------------

Scalar::Scalar(const Rational &q) {
  if (q != 0)
    terms_.emplace_back(ConstMonomial{}, q);
}

Scalar::Scalar(const Rational &q, ConstMonomial mono) {
  if (q != 0)
    terms_.emplace_back(std::move(mono), q);
}

bool Scalar::is_one() const {
  return terms_.size() == 1 && terms_[0].first.empty() && terms_[0].second == 1;
}

bool Scalar::is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.empty()); }

Rational Scalar::rational() const {
  if (!is_rational())
    throw DomainError("scalar '" + to_string() + "' contains formal constants");
  return terms_.empty() ? Rational(0) : terms_[0].second;
}

std::vector<std::string> Scalar::constants() const {
  std::vector<std::string> names;
  for (const auto &t : terms_)
    for (const auto &f : t.first.factors())
      names.push_back(f.first);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

void Scalar::add_term(const ConstMonomial &m, const Rational &q) {
  if (q == 0)
    return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term &t, const ConstMonomial &key) { return t.first < key; });
  if (it != terms_.end() && it->first == m) {
    it->second += q;
    if (it->second == 0)
      terms_.erase(it);
  } else {
    terms_.insert(it, Term{m, q});
  }
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto &t : r.terms_)
    t.second = -t.second;
  return r;
}

Scalar &Scalar::operator+=(const Scalar &o) {
  if (terms_.empty()) {
    terms_ = o.terms_;
    return *this;
  }
  for (const auto &t : o.terms_)
    add_term(t.first, t.second);
  return *this;
}

Scalar &Scalar::operator-=(const Scalar &o) {
  for (const auto &t : o.terms_)
    add_term(t.first, -t.second);
  return *this;
}

Scalar operator*(const Scalar &a, const Scalar &b) {
  Scalar r;
  if (a.terms_.empty() || b.terms_.empty())
    return r;
  if (a.is_rational() && b.is_rational()) {
    r.terms_.emplace_back(ConstMonomial{}, a.terms_[0].second * b.terms_[0].second);
    return r;
  }
  for (const auto &x : a.terms_)
    for (const auto &y : b.terms_)
      r.add_term(x.first * y.first, x.second * y.second);
  return r;
}

Scalar operator/(const Scalar &a, const Scalar &b) {
  if (b.is_zero())
    throw DomainError("division by zero");
  if (!b.is_rational())
    throw DomainError("division by a scalar containing formal constants");
  Rational inv = 1 / b.terms_[0].second;
  Scalar r = a;
  for (auto &t : r.terms_)
    t.second *= inv;
  return r;
}

std::strong_ordering operator<=>(const Scalar &a, const Scalar &b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].first <=> b.terms_[i].first; c != 0)
      return c;
    int c = cmp(a.terms_[i].second, b.terms_[i].second);
    if (c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool Scalar::leading_negative() const { return !terms_.empty() && sgn(terms_[0].second) < 0; }

std::string Scalar::to_string() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[mono, q] : terms_) {
    bool neg = sgn(q) < 0;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    Rational mag = abs(q);
    if (mono.empty())
      os << rational_to_string(mag);
    else if (mag == 1)
      os << mono.to_string();
    else
      os << rational_to_string(mag) << '*' << mono.to_string();
  }
  return os.str();
}

Scalar Scalar::parse(std::string_view text) {
  Scalar total;
  for (const auto &term : detail::split_terms(text)) {
    Rational q = 1;
    ConstMonomial mono;
    for (const auto &f : term.factors) {
      if (detail::is_number(f)) {
        q *= parse_rational(f);
      } else {
        auto [name, e] = detail::split_power(f);
        if (!is_identifier(name))
          throw ParseError("bad factor '" + f + "' in scalar");
        mono = mono * ConstMonomial::symbol(name, e);
      }
    }
    total += Scalar(term.negative ? Rational(-q) : q, mono);
  }
  return total;
}

Scalar scalar_arith(const Scalar &a, const Scalar &b, ArithOp op) {
  switch (op) {
  case ArithOp::add:
    return a + b;
  case ArithOp::sub:
    return a - b;
  case ArithOp::mul:
    return a * b;
  case ArithOp::div:
    return a / b;
  }
  throw DomainError("unknown arithmetic op");
}

} // namespace qjacobi
