#include "qjacobi/matrix.hpp"

#include "qjacobi/error.hpp"

#include <algorithm>
#include <sstream>

namespace qjacobi {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m.data_[i].emplace(i, Scalar(1));
  return m;
}

Matrix Matrix::from_dense(const std::vector<std::vector<Rational>> &rows) {
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw MismatchError("ragged dense matrix");
    for (std::size_t j = 0; j < cols; ++j)
      m.set(i, j, Scalar(rows[i][j]));
  }
  return m;
}

std::size_t Matrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto &r : data_)
    n += r.size();
  return n;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const {
  const auto &r = data_.at(i);
  auto it = r.find(j);
  return it == r.end() ? Scalar() : it->second;
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar &v) {
  if (i >= rows_ || j >= cols_)
    throw MismatchError("matrix index out of range");
  if (v.is_zero())
    data_[i].erase(j);
  else
    data_[i][j] = v;
}

void Matrix::add(std::size_t i, std::size_t j, const Scalar &v) {
  if (v.is_zero())
    return;
  if (i >= rows_ || j >= cols_)
    throw MismatchError("matrix index out of range");
  auto [it, inserted] = data_[i].try_emplace(j, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero())
      data_[i].erase(it);
  }
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Row &r) { return r.empty(); });
}

bool Matrix::is_identity() const {
  if (!square())
    return false;
  for (std::size_t i = 0; i < rows_; ++i)
    if (data_[i].size() != 1 || data_[i].begin()->first != i || !data_[i].begin()->second.is_one())
      return false;
  return true;
}

bool Matrix::is_rational() const {
  for (const auto &r : data_)
    for (const auto &[j, v] : r)
      if (!v.is_rational())
        return false;
  return true;
}

Matrix Matrix::identity_like() const {
  if (!square())
    throw MismatchError("identity of a non-square matrix");
  return identity(rows_);
}

std::string Matrix::describe_kind() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_) + " matrix";
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto &[j, v] : data_[i])
      t.data_[j].emplace(i, v);
  return t;
}

Scalar Matrix::trace() const {
  if (!square())
    throw MismatchError("trace of a non-square matrix");
  Scalar s;
  for (std::size_t i = 0; i < rows_; ++i)
    s += at(i, i);
  return s;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto &row : r.data_)
    for (auto &[j, v] : row)
      v = -v;
  return r;
}

Matrix &Matrix::operator+=(const Matrix &o) {
  if (!compatible_with(o))
    throw MismatchError("matrix add: " + describe_kind() + " vs " + o.describe_kind());
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto &[j, v] : o.data_[i])
      add(i, j, v);
  return *this;
}

Matrix &Matrix::operator-=(const Matrix &o) {
  if (!compatible_with(o))
    throw MismatchError("matrix sub: " + describe_kind() + " vs " + o.describe_kind());
  for (std::size_t i = 0; i < rows_; ++i)
    for (const auto &[j, v] : o.data_[i])
      add(i, j, -v);
  return *this;
}

Matrix &Matrix::operator*=(const Scalar &s) {
  if (s.is_zero()) {
    for (auto &r : data_)
      r.clear();
    return *this;
  }
  for (auto &row : data_)
    for (auto it = row.begin(); it != row.end();) {
      it->second = it->second * s;
      it = it->second.is_zero() ? row.erase(it) : std::next(it);
    }
  return *this;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
  if (a.cols_ != b.rows_)
    throw MismatchError("matrix mul: " + a.describe_kind() + " times " + b.describe_kind());
  Matrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    auto &out = r.data_[i];
    for (const auto &[k, av] : a.data_[i])
      for (const auto &[j, bv] : b.data_[k]) {
        auto [it, inserted] = out.try_emplace(j, av * bv);
        if (!inserted)
          it->second += av * bv;
      }
    for (auto it = out.begin(); it != out.end();)
      it = it->second.is_zero() ? out.erase(it) : std::next(it);
  }
  return r;
}

nlohmann::json Matrix::to_json() const {
  nlohmann::json data = nlohmann::json::array();
  for (std::size_t i = 0; i < rows_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < cols_; ++j)
      row.push_back(at(i, j).to_string());
    data.push_back(std::move(row));
  }
  return {{"rows", rows_}, {"cols", cols_}, {"data", std::move(data)}};
}

Matrix Matrix::from_json(const nlohmann::json &j) {
  try {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto &data = j.at("data");
    if (data.size() != m.rows_)
      throw ParseError("matrix JSON: row count mismatch");
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (data[i].size() != m.cols_)
        throw ParseError("matrix JSON: column count mismatch");
      for (std::size_t c = 0; c < m.cols_; ++c)
        m.set(i, c, Scalar::parse(data[i][c].get<std::string>()));
    }
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
}

std::string Matrix::to_text() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      std::string s = at(i, j).to_string();
      // entries with several terms are parenthesized so columns stay space-separated
      if (s.find(' ') != std::string::npos)
        s = "(" + s + ")";
      os << (j ? " " : "") << s;
    }
    os << '\n';
  }
  return os.str();
}

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (const auto &[j, av] : a.row(i))
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (const auto &[l, bv] : b.row(k))
          r.set(i * b.rows() + k, j * b.cols() + l, av * bv);
  return r;
}

std::size_t rank(const Matrix &m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto &[j, v] : m.row(i))
      a[i][j] = v.rational();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && a[p][c] == 0)
      ++p;
    if (p == m.rows())
      continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (a[i][c] == 0)
        continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < m.cols(); ++k)
        a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

namespace {

using SparseVec = std::map<std::size_t, Rational>;

SparseVec flatten(const Matrix &a) {
  SparseVec v;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (const auto &[j, s] : a.row(i))
      v.emplace(i * a.cols() + j, s.rational());
  return v;
}

void axpy(SparseVec &y, const Rational &alpha, const SparseVec &x) {
  for (const auto &[k, v] : x) {
    auto [it, inserted] = y.try_emplace(k, alpha * v);
    if (!inserted) {
      it->second += alpha * v;
      if (it->second == 0)
        y.erase(it);
    }
  }
}

} // namespace

std::vector<Rational> minimal_polynomial(const Matrix &a) {
  if (!a.square())
    throw MismatchError("minimal polynomial of a non-square matrix");
  struct Basis {
    std::size_t pivot;
    SparseVec vec;                 // pivot entry normalized to 1
    std::vector<Rational> combo;   // vec = sum combo[i] * A^i
  };
  std::vector<Basis> basis;
  Matrix power = Matrix::identity(a.rows());
  for (std::size_t m = 0; m <= a.rows(); ++m) {
    SparseVec r = flatten(power);
    std::vector<Rational> combo(m + 1);
    combo[m] = 1;
    for (const auto &b : basis) {
      auto it = r.find(b.pivot);
      if (it == r.end())
        continue;
      Rational lambda = it->second;
      axpy(r, -lambda, b.vec);
      for (std::size_t i = 0; i < b.combo.size(); ++i)
        combo[i] -= lambda * b.combo[i];
    }
    if (r.empty())
      return combo; // monic: coefficient of x^m is 1
    std::size_t pivot = r.begin()->first;
    Rational inv = 1 / r.begin()->second;
    for (auto &[k, v] : r)
      v *= inv;
    for (auto &c : combo)
      c *= inv;
    basis.push_back({pivot, std::move(r), std::move(combo)});
    power = power * a;
  }
  throw DomainError("minimal polynomial search exceeded matrix size");
}

namespace {

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  if (n == 0)
    return {};
  if (n > mpz_class("1000000000000"))
    throw DomainError("rational root search: coefficient too large to factor");
  std::vector<mpz_class> small, large;
  for (mpz_class d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n)
        large.push_back(n / d);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

Rational horner(const std::vector<Rational> &c, const Rational &x) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

} // namespace

std::vector<Rational> rational_roots(const std::vector<Rational> &coeffs) {
  std::vector<Rational> c = coeffs;
  while (!c.empty() && c.back() == 0)
    c.pop_back();
  if (c.size() <= 1)
    return {};
  std::vector<Rational> roots;
  if (c[0] == 0) {
    roots.push_back(0);
    std::size_t z = 0;
    while (c[z] == 0)
      ++z;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(z));
  }
  if (c.size() > 1) {
    mpz_class lcm = 1;
    for (const auto &q : c)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> ints;
    for (const auto &q : c)
      ints.push_back(mpz_class(q * lcm));
    for (const auto &p : divisors(ints.front()))
      for (const auto &q : divisors(ints.back()))
        for (int sign : {1, -1}) {
          Rational x(sign * p, q);
          x.canonicalize();
          if (horner(c, x) == 0 && std::find(roots.begin(), roots.end(), x) == roots.end())
            roots.push_back(x);
        }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Matrix poly_eval(const std::vector<Rational> &coeffs, const Matrix &a) {
  Matrix acc = a.zero_like();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = acc * a + Matrix::identity(a.rows()) * Scalar(*it);
  return acc;
}

} // namespace qjacobi
