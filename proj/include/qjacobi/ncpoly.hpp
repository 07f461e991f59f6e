#pragma once

#include "qjacobi/error.hpp"
#include "qjacobi/scalar.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qjacobi {

using Letter = std::uint16_t;

/// Ordered letter names plus designated mutually inverse letter pairs.
/// Letter index order defines the word order.
class Alphabet {
public:
  Alphabet(std::vector<std::string> letters,
           std::vector<std::pair<std::string, std::string>> inverse_pairs = {});

  std::size_t size() const { return letters_.size(); }
  const std::string &name(Letter l) const { return letters_.at(l); }
  const std::vector<std::string> &letters() const { return letters_; }
  const std::vector<std::pair<std::string, std::string>> &inverse_pairs() const { return pairs_; }

  std::optional<Letter> find(std::string_view name) const;
  /// Throws ParseError for unknown names.
  Letter at(std::string_view name) const;
  std::optional<Letter> inverse(Letter l) const {
    return inverse_[l] < 0 ? std::nullopt : std::optional<Letter>(static_cast<Letter>(inverse_[l]));
  }

  friend bool operator==(const Alphabet &a, const Alphabet &b) {
    return a.letters_ == b.letters_ && a.pairs_ == b.pairs_;
  }

private:
  std::vector<std::string> letters_;
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::vector<int> inverse_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> letters,
                                 std::vector<std::pair<std::string, std::string>> pairs = {}) {
  return std::make_shared<const Alphabet>(std::move(letters), std::move(pairs));
}

/// Reduced word: no adjacent z z^-1 or z^-1 z factors.
class Word {
public:
  Word() = default;

  /// Cancels adjacent inverse pairs until none remain (stack scan).
  static Word reduce(std::span<const Letter> seq, const Alphabet &alphabet);
  static Word letter(Letter l) { return Word(std::vector<Letter>{l}); }

  std::size_t size() const { return seq_.size(); }
  bool empty() const { return seq_.empty(); }
  const std::vector<Letter> &letters() const { return seq_; }
  Letter operator[](std::size_t i) const { return seq_[i]; }

  /// Concatenation followed by reduction at the seam.
  Word concat(const Word &other, const Alphabet &alphabet) const;
  std::string to_string(const Alphabet &alphabet) const; // "1" for the empty word

  friend bool operator==(const Word &, const Word &) = default;
  /// Length-lexicographic by letter index.
  friend std::strong_ordering operator<=>(const Word &a, const Word &b) {
    if (auto c = a.seq_.size() <=> b.seq_.size(); c != 0)
      return c;
    return a.seq_ <=> b.seq_;
  }

private:
  explicit Word(std::vector<Letter> seq) : seq_(std::move(seq)) {}
  std::vector<Letter> seq_;
};

/// Validates letter names and reduces.  Throws ParseError on unknown letters.
Word word_reduce(const std::vector<std::string> &seq, const Alphabet &alphabet);

/// Element of the free algebra over an alphabet (with inverse pairs):
/// a finite Scalar-linear combination of reduced words.
class NCPoly {
public:
  using TermMap = std::map<Word, Scalar>;

  explicit NCPoly(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {}
  NCPoly(AlphabetPtr alphabet, const Scalar &c);
  NCPoly(AlphabetPtr alphabet, const Word &w, const Scalar &c = Scalar(1));

  static NCPoly zero(AlphabetPtr a) { return NCPoly(std::move(a)); }
  static NCPoly one(AlphabetPtr a) { return NCPoly(std::move(a), Scalar(1)); }
  static NCPoly letter(AlphabetPtr a, std::string_view name);
  /// Parses the canonical text grammar, e.g. `1/24*A.B - 1/24*B.A`.
  /// Identifier factors that are not letters are formal constants; when
  /// `allowed_constants` is given, any other constant is a ParseError.
  static NCPoly parse(std::string_view text, AlphabetPtr alphabet,
                      const std::set<std::string> *allowed_constants = nullptr);

  const AlphabetPtr &alphabet_ptr() const { return alphabet_; }
  const Alphabet &alphabet() const { return *alphabet_; }
  const TermMap &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  Scalar coefficient(const Word &w) const;
  /// Maximum word length; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous(int k) const;

  NCPoly zero_like() const { return NCPoly(alphabet_); }
  NCPoly identity_like() const { return one(alphabet_); }
  bool compatible_with(const NCPoly &o) const;
  std::string describe_kind() const;

  void add_term(const Word &w, const Scalar &c);

  NCPoly operator-() const;
  NCPoly &operator+=(const NCPoly &o);
  NCPoly &operator-=(const NCPoly &o);
  NCPoly &operator*=(const Scalar &s);
  friend NCPoly operator+(NCPoly a, const NCPoly &b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly &b) { return a -= b; }
  friend NCPoly operator*(const NCPoly &a, const NCPoly &b);
  friend NCPoly operator*(NCPoly a, const Scalar &s) { return a *= s; }
  friend NCPoly operator*(const Scalar &s, NCPoly a) { return a *= s; }

  /// Structural equality (alphabets compared by value).
  friend bool operator==(const NCPoly &a, const NCPoly &b);

  std::string to_string() const;

private:
  void require_same(const NCPoly &o, const char *op) const;

  AlphabetPtr alphabet_;
  TermMap terms_;
};

NCPoly nc_mul(const NCPoly &p, const NCPoly &q);
NCPoly commutator(const NCPoly &p, const NCPoly &q);

/// Applies the algebra homomorphism determined by `images` (indexed by
/// letter name) to `p`.  `one` is the unit of the target algebra.  Every
/// letter that occurs in `p` needs an image.
template <class Target>
Target substitute_generic(const NCPoly &p, const std::map<std::string, Target> &images, const Target &one) {
  const Alphabet &alpha = p.alphabet();
  std::vector<const Target *> by_letter(alpha.size(), nullptr);
  for (Letter l = 0; l < alpha.size(); ++l) {
    auto it = images.find(alpha.name(l));
    if (it != images.end())
      by_letter[l] = &it->second;
  }
  Target result = one.zero_like();
  for (const auto &[w, c] : p.terms()) {
    Target acc = one;
    for (Letter l : w.letters()) {
      if (!by_letter[l])
        throw DomainError("substitute: missing image for letter '" + alpha.name(l) + "'");
      acc = acc * *by_letter[l];
    }
    result += acc * c;
  }
  return result;
}

/// Substitution with polynomial images in a common target algebra.
NCPoly substitute(const NCPoly &p, const std::map<std::string, NCPoly> &images);

} // namespace qjacobi
