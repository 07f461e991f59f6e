#include "qjacobi/ncpoly.hpp"

#include "text.hpp"

#include <algorithm>
#include <sstream>

namespace qjacobi {

Alphabet::Alphabet(std::vector<std::string> letters, std::vector<std::pair<std::string, std::string>> inverse_pairs)
    : letters_(std::move(letters)), pairs_(std::move(inverse_pairs)), inverse_(letters_.size(), -1) {
  if (letters_.size() > 0xFFFF)
    throw DomainError("alphabet too large");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (!is_identifier(letters_[i]))
      throw ParseError("invalid letter name '" + letters_[i] + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (letters_[i] == letters_[j])
        throw DomainError("duplicate letter '" + letters_[i] + "'");
  }
  for (const auto &[z, zinv] : pairs_) {
    Letter a = at(z), b = at(zinv);
    if (a == b)
      throw DomainError("letter '" + z + "' cannot be its own inverse");
    if (inverse_[a] >= 0 || inverse_[b] >= 0)
      throw DomainError("letter appears in more than one inverse pair");
    inverse_[a] = b;
    inverse_[b] = a;
  }
}

std::optional<Letter> Alphabet::find(std::string_view name) const {
  for (std::size_t i = 0; i < letters_.size(); ++i)
    if (letters_[i] == name)
      return static_cast<Letter>(i);
  return std::nullopt;
}

Letter Alphabet::at(std::string_view name) const {
  if (auto l = find(name))
    return *l;
  throw ParseError("unknown letter '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

Word Word::reduce(std::span<const Letter> seq, const Alphabet &alphabet) {
  std::vector<Letter> out;
  out.reserve(seq.size());
  for (Letter l : seq) {
    if (l >= alphabet.size())
      throw ParseError("letter index out of range");
    auto inv = alphabet.inverse(l);
    if (!out.empty() && inv && out.back() == *inv)
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word(std::move(out));
}

Word Word::concat(const Word &other, const Alphabet &alphabet) const {
  std::vector<Letter> out = seq_;
  out.reserve(seq_.size() + other.seq_.size());
  std::size_t i = 0;
  for (; i < other.seq_.size() && !out.empty(); ++i) {
    auto inv = alphabet.inverse(other.seq_[i]);
    if (inv && out.back() == *inv)
      out.pop_back();
    else
      break;
  }
  out.insert(out.end(), other.seq_.begin() + static_cast<std::ptrdiff_t>(i), other.seq_.end());
  return Word(std::move(out));
}

std::string Word::to_string(const Alphabet &alphabet) const {
  if (seq_.empty())
    return "1";
  std::string s;
  for (std::size_t i = 0; i < seq_.size(); ++i) {
    if (i)
      s += '.';
    s += alphabet.name(seq_[i]);
  }
  return s;
}

Word word_reduce(const std::vector<std::string> &seq, const Alphabet &alphabet) {
  std::vector<Letter> idx;
  idx.reserve(seq.size());
  for (const auto &name : seq)
    idx.push_back(alphabet.at(name));
  return Word::reduce(idx, alphabet);
}

// ---------------------------------------------------------------------------

NCPoly::NCPoly(AlphabetPtr alphabet, const Scalar &c) : alphabet_(std::move(alphabet)) {
  if (!c.is_zero())
    terms_.emplace(Word{}, c);
}

NCPoly::NCPoly(AlphabetPtr alphabet, const Word &w, const Scalar &c) : alphabet_(std::move(alphabet)) {
  if (!c.is_zero())
    terms_.emplace(w, c);
}

NCPoly NCPoly::letter(AlphabetPtr a, std::string_view name) {
  Letter l = a->at(name);
  return NCPoly(std::move(a), Word::letter(l));
}

bool NCPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second.is_one();
}

Scalar NCPoly::coefficient(const Word &w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Scalar() : it->second;
}

int NCPoly::degree() const {
  int d = -1;
  for (const auto &t : terms_)
    d = std::max(d, static_cast<int>(t.first.size()));
  return d;
}

bool NCPoly::is_homogeneous(int k) const {
  return std::all_of(terms_.begin(), terms_.end(), [k](const auto &t) { return static_cast<int>(t.first.size()) == k; });
}

bool NCPoly::compatible_with(const NCPoly &o) const {
  return alphabet_ == o.alphabet_ || *alphabet_ == *o.alphabet_;
}

std::string NCPoly::describe_kind() const {
  std::string s = "polynomial over {";
  for (std::size_t i = 0; i < alphabet_->size(); ++i)
    s += (i ? "," : "") + alphabet_->name(static_cast<Letter>(i));
  return s + "}";
}

void NCPoly::require_same(const NCPoly &o, const char *op) const {
  if (!compatible_with(o))
    throw MismatchError(std::string(op) + ": alphabet mismatch");
}

void NCPoly::add_term(const Word &w, const Scalar &c) {
  if (c.is_zero())
    return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero())
      terms_.erase(it);
  }
}

NCPoly NCPoly::operator-() const {
  NCPoly r = *this;
  for (auto &t : r.terms_)
    t.second = -t.second;
  return r;
}

NCPoly &NCPoly::operator+=(const NCPoly &o) {
  require_same(o, "add");
  for (const auto &[w, c] : o.terms_)
    add_term(w, c);
  return *this;
}

NCPoly &NCPoly::operator-=(const NCPoly &o) {
  require_same(o, "sub");
  for (const auto &[w, c] : o.terms_)
    add_term(w, -c);
  return *this;
}

NCPoly &NCPoly::operator*=(const Scalar &s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second = it->second * s;
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

NCPoly operator*(const NCPoly &a, const NCPoly &b) {
  a.require_same(b, "mul");
  NCPoly r(a.alphabet_);
  for (const auto &[wa, ca] : a.terms_)
    for (const auto &[wb, cb] : b.terms_)
      r.add_term(wa.concat(wb, *a.alphabet_), ca * cb);
  return r;
}

bool operator==(const NCPoly &a, const NCPoly &b) { return a.compatible_with(b) && a.terms_ == b.terms_; }

std::string NCPoly::to_string() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[w, c] : terms_) {
    for (const auto &[mono, q] : c.terms()) {
      bool neg = sgn(q) < 0;
      if (first)
        os << (neg ? "- " : "");
      else
        os << (neg ? " - " : " + ");
      first = false;
      std::vector<std::string> factors;
      Rational mag = abs(q);
      if (mag != 1 || (mono.empty() && w.empty()))
        factors.push_back(rational_to_string(mag));
      if (!mono.empty())
        factors.push_back(mono.to_string());
      if (!w.empty())
        factors.push_back(w.to_string(*alphabet_));
      for (std::size_t i = 0; i < factors.size(); ++i)
        os << (i ? "*" : "") << factors[i];
    }
  }
  return os.str();
}

NCPoly NCPoly::parse(std::string_view text, AlphabetPtr alphabet, const std::set<std::string> *allowed_constants) {
  NCPoly result(alphabet);
  for (const auto &term : detail::split_terms(text)) {
    Rational q = 1;
    ConstMonomial mono;
    std::optional<Word> word;
    for (const auto &f : term.factors) {
      if (detail::is_number(f)) {
        q *= parse_rational(f);
        continue;
      }
      bool is_word = f.find('.') != std::string::npos || alphabet->find(f).has_value();
      if (is_word) {
        if (word)
          throw ParseError("term contains two words: '" + f + "'");
        std::vector<std::string> letters;
        std::size_t start = 0;
        while (true) {
          auto dot = f.find('.', start);
          letters.push_back(f.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
          if (dot == std::string::npos)
            break;
          start = dot + 1;
        }
        word = word_reduce(letters, *alphabet);
        continue;
      }
      auto [name, e] = detail::split_power(f);
      if (!is_identifier(name))
        throw ParseError("bad factor '" + f + "'");
      if (alphabet->find(name))
        throw ParseError("letter '" + name + "' used as a constant");
      if (allowed_constants && !allowed_constants->count(name))
        throw ParseError("undeclared constant '" + name + "'");
      mono = mono * ConstMonomial::symbol(name, e);
    }
    Scalar c(term.negative ? Rational(-q) : q, mono);
    result.add_term(word.value_or(Word{}), c);
  }
  return result;
}

NCPoly nc_mul(const NCPoly &p, const NCPoly &q) { return p * q; }

NCPoly commutator(const NCPoly &p, const NCPoly &q) { return p * q - q * p; }

NCPoly substitute(const NCPoly &p, const std::map<std::string, NCPoly> &images) {
  if (images.empty()) {
    if (p.terms().empty() || (p.terms().size() == 1 && p.terms().begin()->first.empty()))
      throw DomainError("substitute: no target algebra for constant polynomial");
    throw DomainError("substitute: missing images");
  }
  const NCPoly &ref = images.begin()->second;
  for (const auto &[name, img] : images)
    if (!img.compatible_with(ref))
      throw MismatchError("substitute: images live in different algebras");
  return substitute_generic<NCPoly>(p, images, ref.identity_like());
}

} // namespace qjacobi
