#pragma once

// Random generators shared by the test suites.  All seeds are fixed.

#include "qjacobi/deformation.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace qjt {

using namespace qjacobi;

inline Rational random_rational(std::mt19937 &rng, int bound = 6) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Rational random_nonzero_rational(std::mt19937 &rng, int bound = 6) {
  Rational q;
  do
    q = random_rational(rng, bound);
  while (q == 0);
  return q;
}

/// Raw letter sequence (not reduced).
inline std::vector<Letter> random_letters(std::mt19937 &rng, std::size_t alphabet_size, int len) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(alphabet_size) - 1);
  std::vector<Letter> v;
  for (int i = 0; i < len; ++i)
    v.push_back(static_cast<Letter>(pick(rng)));
  return v;
}

inline Scalar random_scalar(std::mt19937 &rng, bool with_constants) {
  Scalar s(random_nonzero_rational(rng));
  if (with_constants && rng() % 3 == 0)
    s = s * Scalar::constant("ipi", 1 + static_cast<int>(rng() % 3));
  if (with_constants && rng() % 4 == 0)
    s += Scalar(random_nonzero_rational(rng)) * Scalar::constant("zeta3");
  return s;
}

inline NCPoly random_poly(std::mt19937 &rng, const AlphabetPtr &a, int max_degree, int max_terms,
                          bool with_constants = false) {
  NCPoly p(a);
  std::uniform_int_distribution<int> nterms(0, max_terms), len(0, max_degree);
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    auto letters = random_letters(rng, a->size(), len(rng));
    p.add_term(Word::reduce(letters, *a), random_scalar(rng, with_constants));
  }
  return p;
}

inline NCPoly random_homogeneous(std::mt19937 &rng, const AlphabetPtr &a, int k, int max_terms) {
  NCPoly p(a);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i)
    p.add_term(Word::reduce(random_letters(rng, a->size(), k), *a), Scalar(random_nonzero_rational(rng)));
  return p;
}

/// Random homogeneous table with entries for a random subset of degrees 2..5.
inline EkTable random_table(std::mt19937 &rng, int index) {
  EkTable t;
  t.id = "random-" + std::to_string(index);
  for (int k = 2; k <= 5; ++k)
    if (k == 2 || rng() % 3 != 0) {
      NCPoly e = random_homogeneous(rng, ab_alphabet(), k, 4);
      if (!e.is_zero())
        t.entries.emplace(k, e);
    }
  return t;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace qjt
