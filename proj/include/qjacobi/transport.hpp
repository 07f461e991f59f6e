#pragma once

// Typed rewriting of quantum-side morphism expressions into the form
//   (M/N conjugator word) * X(classical word) * (M/N conjugator word).
//
// Objects are tensor powers of V^h ("quantum", Q_n) or images X(V^{⊗n})
// ("image", I_n).  The unit object is elided and Q_1 = I_1 = V^h.

#include "qjacobi/deformation.hpp"
#include "qjacobi/report.hpp"

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace qjacobi::transport {

class TypeError : public Error {
public:
  using Error::Error;
};

/// Term outside the supported fragment, or rewrite budget exhausted.
class NormalizeError : public Error {
public:
  using Error::Error;
};

struct Object {
  bool image = false;
  int arity = 0;

  static Object quantum(int n) { return {false, n}; }
  static Object image_of(int n) { return {n > 1, n}; }
  std::string to_string() const;
  friend bool operator==(const Object &, const Object &) = default;
};

/// Quantum generators that rewrite away.
enum class QGen : std::uint8_t {
  Th,        // T^h = X(T) M_{V,V}
  SigmaH,    // sigma^h = M_{V,V}^-1 X(sigma) M_{V,V}
  OmegaH,    // Omega^h
  RcheckH,   // Rcheck^h
  tH,        // t^h = M_{V,V}^-1 X(t) M_{C,C}
  ThId,      // T^h ⊗ 1
  IdTh,      // 1 ⊗ T^h
  SigmaH12,  // sigma^h ⊗ 1
  SigmaH23,  // 1 ⊗ sigma^h
  OmegaH12,
  OmegaH23,
  RcheckH12,
  RcheckH23,
  Psi,
  PsiInv,
};

/// Tensor-structure isomorphisms that survive in normal forms.
enum class Conj : std::uint8_t {
  M0,    // M_{C[[h]],C[[h]]}
  M2,    // M_{V,V}
  M2Inv,
  M,     // M_{V,V⊗V} (1 ⊗ M_{V,V})
  MInv,
  N,     // M_{V⊗V,V} (M_{V,V} ⊗ 1)
  NInv,
};

std::string to_string(QGen g);
std::string to_string(Conj c);
Object domain(QGen g);
Object codomain(QGen g);
Object domain(Conj c);
Object codomain(Conj c);

/// Classical generators available inside X(...): T, T_id (T⊗1), id_T (1⊗T),
/// s (flip), s12, s23, O (Omega), O12, O23, R (Rcheck), R12, R23, t, Phi.
AlphabetPtr classical_alphabet();
/// Domain/codomain arity of a classical word; throws TypeError if ill-typed.
std::pair<int, int> classical_type(const Word &w);

/// A factor in a normalized product: quantum generator, conjugator, or X(word).
using Factor = std::variant<QGen, Conj, Word>;
/// Factors in composition order: the first factor is applied last.
using Sequence = std::vector<Factor>;

struct TermKey {
  int hdeg = 0;
  Sequence seq;
  friend auto operator<=>(const TermKey &, const TermKey &) = default;
  friend bool operator==(const TermKey &, const TermKey &) = default;
};

constexpr int kUnbounded = std::numeric_limits<int>::max();

/// Scalar-linear combination of h^k * (factor sequence), truncated at h^order.
class LinComb {
public:
  explicit LinComb(int order = kUnbounded) : order_(order) {}

  int order() const { return order_; }
  const std::map<TermKey, Scalar> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const TermKey &key, const Scalar &c);
  void erase(const TermKey &key) { terms_.erase(key); }

  std::string to_string() const;
  friend bool operator==(const LinComb &a, const LinComb &b) { return a.terms_ == b.terms_; }

private:
  int order_;
  std::map<TermKey, Scalar> terms_;
};

std::string sequence_to_string(const Sequence &s);

/// Typed morphism expression.  Constructors check typing and throw TypeError.
class MorphTerm {
public:
  enum class Kind { generator, conjugator, lift, identity, compose, sum, tensor_id, h_power };
  enum class Side { left, right }; // left: f ⊗ 1, right: 1 ⊗ f

  static MorphTerm gen(QGen g);
  static MorphTerm conj(Conj c);
  /// X(p) for a classical polynomial; the type comes from the nonconstant
  /// words, or from `obj` (an image object) when p is a multiple of 1.
  static MorphTerm lift(const NCPoly &p, std::optional<Object> obj = std::nullopt);
  static MorphTerm identity(Object obj);
  static MorphTerm compose(const std::vector<MorphTerm> &factors);
  static MorphTerm sum(const std::vector<std::pair<Scalar, MorphTerm>> &terms);
  static MorphTerm tensor_id(Side side, const MorphTerm &f);
  static MorphTerm h_power(int k, const MorphTerm &f);

  Kind kind() const;
  Object dom() const;
  Object cod() const;
  QGen generator() const;
  Conj conjugator() const;
  const NCPoly &poly() const;
  Side side() const;
  int power() const;
  const std::vector<MorphTerm> &children() const;
  const std::vector<Scalar> &coefficients() const;

  std::string to_string() const;

  friend MorphTerm operator*(const MorphTerm &a, const MorphTerm &b) { return compose({a, b}); }
  friend MorphTerm operator+(const MorphTerm &a, const MorphTerm &b) { return sum({{Scalar(1), a}, {Scalar(1), b}}); }
  friend MorphTerm operator-(const MorphTerm &a, const MorphTerm &b) { return sum({{Scalar(1), a}, {Scalar(-1), b}}); }
  friend MorphTerm operator*(const Scalar &s, const MorphTerm &a) { return sum({{s, a}}); }
  MorphTerm operator-() const { return sum({{Scalar(-1), *this}}); }

  struct Node;

private:
  explicit MorphTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Expands a term into a linear combination of factor sequences.
LinComb flatten(const MorphTerm &t, int order = kUnbounded);

/// Rule selection for a normalization run.
struct RuleContext {
  bool classical_relations = false;   // discharge rules inside X(...)
  const EkTable *associator = nullptr;  // enables M N^-1 -> X(Phi) and the Phi series
  int order = kUnbounded;             // h-adic truncation
  int budget = 10000;                 // maximum rewrite steps
};

struct Step {
  std::string rule;
  std::size_t term = 0;   // index of the rewritten term in the current ordering
  std::size_t factor = 0; // factor position inside the sequence
  int letter = -1;        // letter position inside X(word), -1 for factor rules
};

struct Normalized {
  LinComb form;
  std::vector<Step> trace;
  std::set<std::string> consumed; // relations and axioms used beyond R1-R4
};

/// Applies the enabled rules to a fixpoint.  Rules are tiered: structural
/// rules (R1-R4) run to exhaustion before the associator axiom, which runs
/// before the classical relations.
Normalized normalize(const MorphTerm &t, const RuleContext &ctx = {});
Normalized normalize(const LinComb &start, const RuleContext &ctx = {});

/// Re-applies a recorded trace to the flattened term and returns the result.
/// Throws NormalizeError if a step does not match.
LinComb replay(const MorphTerm &t, const std::vector<Step> &trace, const RuleContext &ctx = {});

/// Label of the relation consumed by a rule, empty for structural rules.
std::string relation_of(const std::string &rule);

struct SideResult {
  MorphTerm term;
  Normalized result;     // final form, after any classical discharge
  LinComb structural{};  // form reached by the structural rules alone
};

struct IdentityReport {
  std::string id;
  bool pass = false;
  std::vector<SideResult> sides;       // lhs, rhs of the main claim
  RuleContext context;                 // table pointer is not owned
  std::set<std::string> consumed;
  std::vector<CheckResult> subchecks;  // per-monomial checks for 5.1a/5.1b
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Identity ids: 4.3a, 4.3b, 4.4, 4.5, 5.1a, 5.1b, sigma_h_def.
std::vector<std::string> identity_ids();

/// Normalizes both sides of the named identity and discharges the remaining
/// difference with the classical relations.  `table` and `degrees` apply to
/// 5.1a/5.1b (defaults: built-in table, every degree with an entry); `order`
/// to sigma_h_def.  Throws DomainError for an unknown id.
IdentityReport verify_identity(const std::string &id, const EkTable *table = nullptr,
                               const std::vector<int> &degrees = {}, int order = 4);

/// Classical word over {O12, O23} for a word over {A, B}.
Word classical_word_of(const Word &ab_word);

} // namespace qjacobi::transport
