#pragma once

#include "qjacobi/hseries.hpp"
#include "qjacobi/report.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qjacobi {

class AlgebraError : public Error {
public:
  enum class Kind { parse, antisymmetry, jacobi, degenerate };
  AlgebraError(Kind kind, const std::string &what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// Lie algebra given by exact structure constants [x_i, x_j] = sum_k c(i,j,k) x_k.
/// Construction validates antisymmetry, the Jacobi identity and
/// nondegeneracy of the Killing form.
class LieAlgebraData {
public:
  LieAlgebraData(std::vector<std::string> basis, std::vector<Rational> structure);

  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::string> &basis() const { return basis_; }
  const Rational &c(std::size_t i, std::size_t j, std::size_t k) const {
    return structure_[(i * dim() + j) * dim() + k];
  }
  const std::vector<Rational> &structure() const { return structure_; }
  /// ad(x_i) as a d x d matrix: column j is [x_i, x_j].
  Matrix ad(std::size_t i) const;
  /// K(i,j) = trace(ad x_i ad x_j).
  const Matrix &killing() const { return killing_; }
  const Matrix &killing_inverse() const { return killing_inv_; }

  friend bool operator==(const LieAlgebraData &a, const LieAlgebraData &b) {
    return a.basis_ == b.basis_ && a.structure_ == b.structure_;
  }

private:
  std::vector<std::string> basis_;
  std::vector<Rational> structure_;
  Matrix killing_;
  Matrix killing_inv_;
};

LieAlgebraData sl2();
LieAlgebraData sl3();
/// "sl2", "sl3", or a path to a structure-constant JSON file.
LieAlgebraData build_algebra(const std::string &preset_or_path);

/// {"dim", "basis", "brackets": [[i, j, [[k, "p/q"], ...]], ...]}.  A listed
/// pair (i, j) also fixes (j, i) by antisymmetry unless (j, i) is listed too.
LieAlgebraData algebra_from_json(const nlohmann::json &j);
LieAlgebraData load_algebra(const std::filesystem::path &path);
/// Lists every nonzero bracket with i < j.
nlohmann::json algebra_to_json(const LieAlgebraData &alg);

/// Exact inverse of a square rational matrix; throws DomainError when singular.
Matrix inverse(const Matrix &m);

/// Tensor operators on V, V⊗V and V⊗V⊗V with the index layout (i⊗j) -> i*d + j.
struct TensorOps {
  std::size_t dim = 0;
  std::vector<Matrix> ad;    // ad(x_i), d x d
  Matrix T;                  // bracket V⊗V -> V, d x d^2
  Matrix sigma;              // flip on V⊗V
  Matrix t_vec;              // Casimir tensor sum K^{-1}(i,j) x_i⊗x_j, d^2 x 1
  Matrix Omega;              // -(T⊗T)(1⊗t⊗1) on V⊗V
  Matrix Omega12, Omega23;   // Omega⊗1, 1⊗Omega
  Matrix sigma12, sigma23;   // sigma⊗1, 1⊗sigma
  Matrix T_id, id_T;         // T⊗1, 1⊗T : V^3 -> V^2
};

TensorOps build_tensor_ops(const LieAlgebraData &alg);

/// The action of t on V⊗V assembled directly from t_vec and the ad matrices:
/// sum_{i,j} t(i,j) ad(x_i)⊗ad(x_j).
Matrix casimir_action(const TensorOps &ops);

/// Antisymmetry, Jacobi and Yang-Baxter identities as exact matrix equations.
Report verify_classical(const TensorOps &ops);

/// Symmetry and invariance of t, commutation of Omega with the diagonal
/// action, and sigma Omega sigma = Omega.
Report verify_tensor_invariants(const TensorOps &ops);

/// sigma = Rcheck * exp(-ipi h Omega) modulo h^order, where
/// Rcheck = sigma * exp(ipi h t) uses the Casimir action of t.
Report verify_sigma_rmatrix(const TensorOps &ops, int order);

struct Eigenspace {
  Rational value;
  std::size_t multiplicity; // kernel dimension of (Omega - value)
};

struct SpectrumReport {
  std::vector<Rational> minimal_polynomial; // ascending, monic
  std::vector<Eigenspace> eigenspaces;      // rational roots only
  bool splits_over_q = false;               // degree == number of rational roots
  bool annihilates = false;                 // product of (Omega - lambda) is zero
  Scalar trace;

  std::string to_text() const;
  nlohmann::json to_json() const;
};

SpectrumReport omega_spectrum(const TensorOps &ops);

/// Replaces O12, O23 by the Omega12, Omega23 matrices in every coefficient.
MatrixSeries eval_series(const PolySeries &series, const TensorOps &ops);

} // namespace qjacobi
