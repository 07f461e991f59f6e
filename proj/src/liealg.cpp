#include "qjacobi/liealg.hpp"

#include "qjacobi/psi.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

namespace qjacobi {

namespace {

std::string entry_mismatch(const Matrix &lhs, const Matrix &rhs) {
  if (!lhs.compatible_with(rhs))
    return "shape mismatch: " + lhs.describe_kind() + " vs " + rhs.describe_kind();
  Matrix diff = lhs - rhs;
  for (std::size_t i = 0; i < diff.rows(); ++i)
    if (!diff.row(i).empty()) {
      std::size_t j = diff.row(i).begin()->first;
      return "first mismatch at (" + std::to_string(i) + "," + std::to_string(j) + "): lhs " +
             lhs.at(i, j).to_string() + ", rhs " + rhs.at(i, j).to_string();
    }
  return {};
}

void check_equal(Report &r, const std::string &name, const Matrix &lhs, const Matrix &rhs) {
  std::string bad = entry_mismatch(lhs, rhs);
  r.add(name, bad.empty(), bad.empty() ? "exact equality, " + lhs.describe_kind() : bad);
}

} // namespace

Matrix inverse(const Matrix &m) {
  if (!m.square())
    throw MismatchError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto &[j, v] : m.row(i))
      a[i][j] = v.rational();
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0)
      ++p;
    if (p == n)
      throw DomainError("matrix is singular");
    std::swap(a[p], a[c]);
    Rational inv = 1 / a[c][c];
    for (auto &v : a[c])
      v *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0)
        continue;
      Rational f = a[i][c];
      for (std::size_t k = c; k < 2 * n; ++k)
        a[i][k] -= f * a[c][k];
    }
  }
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r.set(i, j, Scalar(a[i][n + j]));
  return r;
}

// ---------------------------------------------------------------------------

LieAlgebraData::LieAlgebraData(std::vector<std::string> basis, std::vector<Rational> structure)
    : basis_(std::move(basis)), structure_(std::move(structure)) {
  const std::size_t d = basis_.size();
  if (d == 0)
    throw AlgebraError(AlgebraError::Kind::parse, "algebra has empty basis");
  if (structure_.size() != d * d * d)
    throw AlgebraError(AlgebraError::Kind::parse, "structure constant array has wrong size");

  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        if (c(i, j, k) != -c(j, i, k))
          throw AlgebraError(AlgebraError::Kind::antisymmetry,
                             "antisymmetry fails: c(" + basis_[i] + "," + basis_[j] + "," + basis_[k] + ") = " +
                                 rational_to_string(c(i, j, k)) + " but c(" + basis_[j] + "," + basis_[i] + "," +
                                 basis_[k] + ") = " + rational_to_string(c(j, i, k)));

  // Jacobi: [x_i,[x_j,x_k]] + [x_j,[x_k,x_i]] + [x_k,[x_i,x_j]] = 0, coordinate l.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          Rational s = 0;
          for (std::size_t m = 0; m < d; ++m)
            s += c(j, k, m) * c(i, m, l) + c(k, i, m) * c(j, m, l) + c(i, j, m) * c(k, m, l);
          if (s != 0)
            throw AlgebraError(AlgebraError::Kind::jacobi, "Jacobi identity fails for (" + basis_[i] + ", " +
                                                               basis_[j] + ", " + basis_[k] + ") in coordinate " +
                                                               basis_[l]);
        }

  killing_ = Matrix(d, d);
  std::vector<Matrix> ads;
  for (std::size_t i = 0; i < d; ++i)
    ads.push_back(ad(i));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      killing_.set(i, j, (ads[i] * ads[j]).trace());
  try {
    killing_inv_ = inverse(killing_);
  } catch (const DomainError &) {
    throw AlgebraError(AlgebraError::Kind::degenerate, "Killing form is degenerate (algebra is not semisimple)");
  }
}

Matrix LieAlgebraData::ad(std::size_t i) const {
  const std::size_t d = dim();
  Matrix m(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      m.set(k, j, Scalar(c(i, j, k)));
  return m;
}

LieAlgebraData sl2() {
  // basis e, h, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h
  const std::size_t d = 3;
  std::vector<Rational> c(d * d * d);
  auto set = [&](std::size_t i, std::size_t j, std::size_t k, long v) {
    c[(i * d + j) * d + k] = v;
    c[(j * d + i) * d + k] = -v;
  };
  constexpr std::size_t e = 0, h = 1, f = 2;
  set(h, e, e, 2);
  set(h, f, f, -2);
  set(e, f, h, 1);
  return LieAlgebraData({"e", "h", "f"}, std::move(c));
}

LieAlgebraData sl3() {
  // Basis E12, E13, E23, H1 = E11 - E22, H2 = E22 - E33, E21, E31, E32.
  using Mat3 = std::array<std::array<long, 3>, 3>;
  struct Elem {
    std::string name;
    Mat3 m{};
  };
  std::vector<Elem> basis;
  auto unit = [](int i, int j) {
    Mat3 m{};
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
    return m;
  };
  basis.push_back({"E12", unit(0, 1)});
  basis.push_back({"E13", unit(0, 2)});
  basis.push_back({"E23", unit(1, 2)});
  Mat3 h1{}, h2{};
  h1[0][0] = 1;
  h1[1][1] = -1;
  h2[1][1] = 1;
  h2[2][2] = -1;
  basis.push_back({"H1", h1});
  basis.push_back({"H2", h2});
  basis.push_back({"E21", unit(1, 0)});
  basis.push_back({"E31", unit(2, 0)});
  basis.push_back({"E32", unit(2, 1)});

  auto index_of = [&](int i, int j) -> std::size_t {
    std::string name = "E" + std::to_string(i + 1) + std::to_string(j + 1);
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (basis[k].name == name)
        return k;
    throw DomainError("sl3: no basis element " + name);
  };

  const std::size_t d = basis.size();
  std::vector<Rational> c(d * d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      Mat3 br{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) {
            auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j), uk = static_cast<std::size_t>(k);
            br[ui][uj] += basis[a].m[ui][uk] * basis[b].m[uk][uj] - basis[b].m[ui][uk] * basis[a].m[uk][uj];
          }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j && br[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0)
            c[(a * d + b) * d + index_of(i, j)] = br[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      // diag(p, q, r) with p + q + r = 0 equals p*H1 + (p + q)*H2
      c[(a * d + b) * d + 3] = br[0][0];
      c[(a * d + b) * d + 4] = br[0][0] + br[1][1];
    }
  std::vector<std::string> names;
  for (const auto &b : basis)
    names.push_back(b.name);
  return LieAlgebraData(std::move(names), std::move(c));
}

LieAlgebraData algebra_from_json(const nlohmann::json &j) {
  try {
    const std::size_t d = j.at("dim").get<std::size_t>();
    auto basis = j.at("basis").get<std::vector<std::string>>();
    if (basis.size() != d)
      throw AlgebraError(AlgebraError::Kind::parse, "basis has " + std::to_string(basis.size()) +
                                                        " names but dim is " + std::to_string(d));
    std::vector<Rational> c(d * d * d);
    std::set<std::pair<std::size_t, std::size_t>> listed;
    for (const auto &entry : j.at("brackets")) {
      auto i = entry.at(0).get<std::size_t>(), jj = entry.at(1).get<std::size_t>();
      if (i >= d || jj >= d)
        throw AlgebraError(AlgebraError::Kind::parse, "bracket index out of range");
      if (!listed.emplace(i, jj).second)
        throw AlgebraError(AlgebraError::Kind::parse, "bracket listed twice");
      for (const auto &term : entry.at(2)) {
        auto k = term.at(0).get<std::size_t>();
        if (k >= d)
          throw AlgebraError(AlgebraError::Kind::parse, "bracket result index out of range");
        c[(i * d + jj) * d + k] = parse_rational(term.at(1).get<std::string>());
      }
    }
    for (const auto &[i, jj] : listed)
      if (i != jj && !listed.count({jj, i}))
        for (std::size_t k = 0; k < d; ++k)
          c[(jj * d + i) * d + k] = -c[(i * d + jj) * d + k];
    return LieAlgebraData(std::move(basis), std::move(c));
  } catch (const nlohmann::json::exception &e) {
    throw AlgebraError(AlgebraError::Kind::parse, std::string("algebra JSON: ") + e.what());
  } catch (const ParseError &e) {
    throw AlgebraError(AlgebraError::Kind::parse, std::string("algebra JSON: ") + e.what());
  }
}

LieAlgebraData load_algebra(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw AlgebraError(AlgebraError::Kind::parse, "cannot open algebra file '" + path.string() + "'");
  try {
    return algebra_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw AlgebraError(AlgebraError::Kind::parse, std::string("algebra JSON: ") + e.what());
  }
}

nlohmann::json algebra_to_json(const LieAlgebraData &alg) {
  const std::size_t d = alg.dim();
  nlohmann::json brackets = nlohmann::json::array();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      nlohmann::json terms = nlohmann::json::array();
      for (std::size_t k = 0; k < d; ++k)
        if (alg.c(i, j, k) != 0)
          terms.push_back({k, rational_to_string(alg.c(i, j, k))});
      if (!terms.empty())
        brackets.push_back({i, j, terms});
    }
  return {{"dim", d}, {"basis", alg.basis()}, {"brackets", brackets}};
}

LieAlgebraData build_algebra(const std::string &preset_or_path) {
  if (preset_or_path == "sl2")
    return sl2();
  if (preset_or_path == "sl3")
    return sl3();
  return load_algebra(preset_or_path);
}

// ---------------------------------------------------------------------------

TensorOps build_tensor_ops(const LieAlgebraData &alg) {
  const std::size_t d = alg.dim();
  TensorOps ops;
  ops.dim = d;
  for (std::size_t i = 0; i < d; ++i)
    ops.ad.push_back(alg.ad(i));

  ops.T = Matrix(d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        ops.T.set(k, i * d + j, Scalar(alg.c(i, j, k)));

  ops.sigma = Matrix(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      ops.sigma.set(j * d + i, i * d + j, Scalar(1));

  ops.t_vec = Matrix(d * d, 1);
  for (std::size_t i = 0; i < d; ++i)
    for (const auto &[j, v] : alg.killing_inverse().row(i))
      ops.t_vec.set(i * d + j, 0, v);

  const Matrix id = Matrix::identity(d);
  // 1⊗t⊗1 : V⊗V -> V⊗V⊗V⊗V, then T⊗T : V^4 -> V⊗V
  Matrix insert_t = kron(kron(id, ops.t_vec), id);
  ops.Omega = -(kron(ops.T, ops.T) * insert_t);

  ops.Omega12 = kron(ops.Omega, id);
  ops.Omega23 = kron(id, ops.Omega);
  ops.sigma12 = kron(ops.sigma, id);
  ops.sigma23 = kron(id, ops.sigma);
  ops.T_id = kron(ops.T, id);
  ops.id_T = kron(id, ops.T);
  return ops;
}

Matrix casimir_action(const TensorOps &ops) {
  const std::size_t d = ops.dim;
  Matrix r(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Scalar t = ops.t_vec.at(i * d + j, 0);
      if (!t.is_zero())
        r += kron(ops.ad[i], ops.ad[j]) * t;
    }
  return r;
}

Report verify_classical(const TensorOps &ops) {
  Report r;
  r.title = "classical identities (dim " + std::to_string(ops.dim) + ")";
  check_equal(r, "antisymmetry: T*sigma = -T", ops.T * ops.sigma, -ops.T);
  const Matrix id3 = Matrix::identity(ops.dim * ops.dim * ops.dim);
  check_equal(r, "jacobi: T*(T x 1) = T*(1 x T)*(1 - sigma x 1)", ops.T * ops.T_id,
              ops.T * ops.id_T * (id3 - ops.sigma12));
  check_equal(r, "braid: s12*s23*s12 = s23*s12*s23", ops.sigma12 * ops.sigma23 * ops.sigma12,
              ops.sigma23 * ops.sigma12 * ops.sigma23);
  return r;
}

Report verify_tensor_invariants(const TensorOps &ops) {
  Report r;
  r.title = "structure tensor invariants (dim " + std::to_string(ops.dim) + ")";
  const std::size_t d = ops.dim;
  const Matrix id = Matrix::identity(d);
  check_equal(r, "t symmetric: sigma*t = t", ops.sigma * ops.t_vec, ops.t_vec);

  bool invariant = true, commutes = true;
  std::string inv_detail, comm_detail;
  for (std::size_t i = 0; i < d; ++i) {
    Matrix diag = kron(ops.ad[i], id) + kron(id, ops.ad[i]);
    Matrix moved = diag * ops.t_vec;
    if (invariant && !moved.is_zero()) {
      invariant = false;
      inv_detail = "(ad x + x ad) t != 0 for basis element " + std::to_string(i);
    }
    std::string bad = entry_mismatch(ops.Omega * diag, diag * ops.Omega);
    if (commutes && !bad.empty()) {
      commutes = false;
      comm_detail = "basis element " + std::to_string(i) + ": " + bad;
    }
  }
  r.add("t invariant under the diagonal action", invariant, invariant ? "all basis elements" : inv_detail);
  r.add("Omega commutes with the diagonal action", commutes, commutes ? "all basis elements" : comm_detail);
  check_equal(r, "sigma*Omega*sigma = Omega", ops.sigma * ops.Omega * ops.sigma, ops.Omega);
  check_equal(r, "Omega equals the action of t on V x V", ops.Omega, casimir_action(ops));
  return r;
}

Report verify_sigma_rmatrix(const TensorOps &ops, int order) {
  if (order < 1)
    throw DomainError("verify_sigma_rmatrix: order must be positive");
  Report r;
  r.title = "sigma = Rcheck * exp(-ipi h Omega) modulo h^" + std::to_string(order);
  const Matrix zero = ops.sigma.zero_like();
  const Scalar ipi = Scalar::constant("ipi");

  std::vector<Matrix> t_coeffs(static_cast<std::size_t>(order), zero), omega_coeffs(static_cast<std::size_t>(order), zero);
  if (order > 1) {
    t_coeffs[1] = casimir_action(ops) * ipi;
    omega_coeffs[1] = ops.Omega * (-ipi);
  }
  MatrixSeries r_matrix = series_exp(MatrixSeries(std::move(t_coeffs)));
  MatrixSeries rcheck = MatrixSeries::constant(ops.sigma, order) * r_matrix;
  MatrixSeries rhs = rcheck * series_exp(MatrixSeries(std::move(omega_coeffs)));
  MatrixSeries lhs = MatrixSeries::constant(ops.sigma, order);

  for (int k = 0; k < order; ++k) {
    std::string bad = entry_mismatch(lhs[k], rhs[k]);
    if (!bad.empty()) {
      r.add("sigma = Rcheck exp(-ipi h Omega)", false, "h^" + std::to_string(k) + ": " + bad);
      return r;
    }
  }
  r.add("sigma = Rcheck exp(-ipi h Omega)", true, "all coefficients h^0..h^" + std::to_string(order - 1));
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::string format_poly(const std::vector<Rational> &c) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = c.size(); k-- > 0;) {
    if (c[k] == 0)
      continue;
    bool neg = sgn(c[k]) < 0;
    Rational mag = abs(c[k]);
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    if (k == 0 || mag != 1)
      os << rational_to_string(mag);
    if (k > 0)
      os << (mag != 1 ? "*" : "") << "x" << (k > 1 ? "^" + std::to_string(k) : "");
  }
  return first ? "0" : os.str();
}

std::string format_factor(const Rational &root) {
  if (root == 0)
    return "x";
  return sgn(root) < 0 ? "(x + " + rational_to_string(Rational(-root)) + ")"
                       : "(x - " + rational_to_string(root) + ")";
}

} // namespace

std::string SpectrumReport::to_text() const {
  std::ostringstream os;
  os << "trace: " << trace.to_string() << '\n';
  os << "minimal polynomial: " << format_poly(minimal_polynomial) << '\n';
  if (splits_over_q) {
    os << "factored: ";
    for (const auto &e : eigenspaces)
      os << format_factor(e.value);
    os << '\n';
  }
  for (const auto &e : eigenspaces)
    os << "eigenvalue " << rational_to_string(e.value) << ": kernel dimension " << e.multiplicity << '\n';
  os << "annihilates: " << (annihilates ? "yes" : "no") << '\n';
  return os.str();
}

nlohmann::json SpectrumReport::to_json() const {
  std::vector<std::string> poly;
  for (const auto &c : minimal_polynomial)
    poly.push_back(rational_to_string(c));
  nlohmann::json spaces = nlohmann::json::array();
  for (const auto &e : eigenspaces)
    spaces.push_back({{"eigenvalue", rational_to_string(e.value)}, {"multiplicity", e.multiplicity}});
  return {{"trace", trace.to_string()},
          {"minimal_polynomial", poly},
          {"splits_over_q", splits_over_q},
          {"annihilates", annihilates},
          {"eigenspaces", spaces}};
}

SpectrumReport omega_spectrum(const TensorOps &ops) {
  SpectrumReport s;
  s.trace = ops.Omega.trace();
  s.minimal_polynomial = minimal_polynomial(ops.Omega);
  const std::size_t n = ops.Omega.rows();
  const Matrix id = Matrix::identity(n);
  Matrix product = id;
  for (const auto &root : rational_roots(s.minimal_polynomial)) {
    Matrix shifted = ops.Omega - id * Scalar(root);
    s.eigenspaces.push_back({root, n - rank(shifted)});
    product = product * shifted;
  }
  s.splits_over_q = s.eigenspaces.size() + 1 == s.minimal_polynomial.size();
  s.annihilates = s.splits_over_q && product.is_zero();
  return s;
}

MatrixSeries eval_series(const PolySeries &series, const TensorOps &ops) {
  if (!(series[0].alphabet() == *omega_alphabet()))
    throw MismatchError("eval_series: expected a series over {O12, O23}, got " + series[0].describe_kind());
  std::map<std::string, Matrix> images{{"O12", ops.Omega12}, {"O23", ops.Omega23}};
  const Matrix one = Matrix::identity(ops.Omega12.rows());
  std::vector<Matrix> coeffs;
  for (const auto &c : series.coeffs())
    coeffs.push_back(substitute_generic<Matrix>(c, images, one));
  return MatrixSeries(std::move(coeffs));
}

} // namespace qjacobi
