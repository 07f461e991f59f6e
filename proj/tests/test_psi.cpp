#include "support.hpp"

#include "qjacobi/psi.hpp"

#include <gtest/gtest.h>

using namespace qjacobi;

namespace {

// Independent oracle.  Polynomials are maps from plain strings over {a, b}
// (a = O12, b = O23) to rationals; Psi is found by iterating the full-order
// fixed point Psi = 1 + sum_k h^k F_k(Psi, Psi^-1) from Psi = 1, with the
// alpha template expanded literally (no word reduction).
using OPoly = std::map<std::string, Rational>;
using OSeries = std::vector<OPoly>;

void acc(OPoly &p, const std::string &w, const Rational &c) {
  Rational &slot = p[w];
  slot += c;
  if (slot == 0)
    p.erase(w);
}

OSeries o_one(int n) {
  OSeries s(static_cast<std::size_t>(n));
  s[0][""] = 1;
  return s;
}

OSeries o_mul(const OSeries &x, const OSeries &y) {
  const std::size_t n = x.size();
  OSeries r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j)
      for (const auto &[u, cu] : x[i])
        for (const auto &[v, cv] : y[j])
          acc(r[i + j], u + v, cu * cv);
  return r;
}

OSeries o_add(const OSeries &x, const OSeries &y, const Rational &s = 1) {
  OSeries r = x;
  for (std::size_t k = 0; k < r.size(); ++k)
    for (const auto &[w, c] : y[k])
      acc(r[k], w, s * c);
  return r;
}

// Inverse by the fixed point x = 1 - (a - 1) x.
OSeries o_inverse(const OSeries &a) {
  const int n = static_cast<int>(a.size());
  OSeries a1 = o_add(a, o_one(n), -1);
  OSeries x = o_one(n);
  for (int it = 0; it < n; ++it)
    x = o_add(o_one(n), o_mul(a1, x), -1);
  return x;
}

OSeries o_letter(char l, int n) {
  OSeries s(static_cast<std::size_t>(n));
  s[0][std::string(1, l)] = 1;
  return s;
}

// alpha applied to a word like "AABA", then evaluated with the given images.
OSeries o_alpha_eval(const std::string &w, const OSeries &psi, const OSeries &psi_inv, int n) {
  OSeries r = o_one(n);
  std::size_t i = 0;
  while (i < w.size()) {
    while (i < w.size() && w[i] == 'A') {
      r = o_mul(r, o_letter('a', n));
      ++i;
    }
    r = o_mul(r, psi_inv);
    while (i < w.size() && w[i] == 'B') {
      r = o_mul(r, o_letter('b', n));
      ++i;
    }
    r = o_mul(r, psi);
  }
  return r;
}

std::string plain(const Word &w) {
  std::string s;
  for (Letter l : w.letters())
    s += ab_alphabet()->name(l);
  return s;
}

std::pair<OSeries, OSeries> oracle_psi(const EkTable &t, int n) {
  OSeries psi = o_one(n);
  for (int it = 0; it < n; ++it) {
    OSeries psi_inv = o_inverse(psi);
    OSeries next = o_one(n);
    for (const auto &[k, ek] : t.entries) {
      if (k >= n)
        continue;
      OSeries gk(static_cast<std::size_t>(n));
      for (const auto &[w, c] : ek.terms())
        gk = o_add(gk, o_alpha_eval(plain(w), psi, psi_inv, n), c.rational());
      OSeries fk = o_mul(psi, gk);
      for (int j = 0; j + k < n; ++j)
        for (const auto &[u, cu] : fk[static_cast<std::size_t>(j)])
          acc(next[static_cast<std::size_t>(j + k)], u, -cu);
    }
    psi = next;
  }
  return {psi, o_inverse(psi)};
}

OSeries to_oracle(const PolySeries &s) {
  OSeries r(static_cast<std::size_t>(s.order()));
  for (int k = 0; k < s.order(); ++k)
    for (const auto &[w, c] : s[k].terms()) {
      std::string key;
      for (Letter l : w.letters())
        key += s[k].alphabet().name(l) == "O12" ? 'a' : 'b';
      acc(r[static_cast<std::size_t>(k)], key, c.rational());
    }
  return r;
}

NCPoly O(const std::string &t) { return NCPoly::parse(t, omega_alphabet()); }

EkTable e2_only() { return builtin_table(); }

} // namespace

TEST(Oracle, SelfCheckOnKnownInverse) {
  // (1 + a h)^-1 = 1 - a h + a a h^2
  OSeries x = o_add(o_one(3), OSeries{{}, {{"a", 1}}, {}});
  OSeries inv = o_inverse(x);
  EXPECT_EQ(inv[1], (OPoly{{"a", -1}}));
  EXPECT_EQ(inv[2], (OPoly{{"aa", 1}}));
}

TEST(ComputePsi, BaseCase) {
  std::mt19937 rng(41);
  for (const EkTable &t : {builtin_table(), qjt::random_table(rng, 0), EkTable{}}) {
    PsiPair p = compute_psi(t, 2);
    EXPECT_TRUE(p.psi.is_one());
    EXPECT_TRUE(p.psi_inv.is_one());
    EXPECT_EQ(p.psi.order(), 2);
  }
}

TEST(ComputePsi, OrderThreeBuiltin) {
  auto [opsi, opsi_inv] = oracle_psi(builtin_table(), 3);
  EXPECT_EQ(opsi[2], (OPoly{{"ab", Rational(-1, 24)}, {"ba", Rational(1, 24)}}));
  EXPECT_EQ(opsi_inv[2], (OPoly{{"ab", Rational(1, 24)}, {"ba", Rational(-1, 24)}}));

  PsiPair p = compute_psi(builtin_table(), 3);
  EXPECT_EQ(p.psi.to_text(), "h^0: 1\nh^1: 0\nh^2: - 1/24*O12.O23 + 1/24*O23.O12\n");
  EXPECT_EQ(p.psi_inv.to_text(), "h^0: 1\nh^1: 0\nh^2: 1/24*O12.O23 - 1/24*O23.O12\n");
  EXPECT_EQ(to_oracle(p.psi), opsi);
}

TEST(ComputePsi, OrderFiveE2Only) {
  auto [opsi, opsi_inv] = oracle_psi(e2_only(), 5);
  PsiPair p = compute_psi(e2_only(), 5);
  EXPECT_EQ(to_oracle(p.psi), opsi);
  EXPECT_EQ(to_oracle(p.psi_inv), opsi_inv);

  const NCPoly a = O("O12"), b = O("O23");
  const NCPoly c = commutator(a, b);
  const NCPoly expected = Scalar(Rational(1, 576)) * (c * c + commutator(a, commutator(b, c)));
  EXPECT_EQ(p.psi[4], expected);
  EXPECT_TRUE(p.psi[3].is_zero());
  EXPECT_TRUE(p.psi[1].is_zero());
}

TEST(ComputePsi, AgreesWithOracleBuiltin) {
  for (int n = 2; n <= 8; ++n) {
    PsiPair p = compute_psi(builtin_table(), n);
    auto [opsi, opsi_inv] = oracle_psi(builtin_table(), n);
    EXPECT_EQ(to_oracle(p.psi), opsi) << "N=" << n;
    EXPECT_EQ(to_oracle(p.psi_inv), opsi_inv) << "N=" << n;
  }
}

TEST(ComputePsi, AgreesWithOracleRandomTables) {
  std::mt19937 rng(42);
  for (int i = 0; i < 10; ++i) {
    EkTable t = qjt::random_table(rng, i);
    PsiPair p = compute_psi(t, 6);
    auto [opsi, opsi_inv] = oracle_psi(t, 6);
    EXPECT_EQ(to_oracle(p.psi), opsi) << t.id;
    EXPECT_EQ(to_oracle(p.psi_inv), opsi_inv) << t.id;
  }
}

TEST(ComputePsi, InverseIdentityBuiltinOrderTen) {
  PsiPair p = compute_psi(builtin_table(), 10);
  EXPECT_TRUE((p.psi * p.psi_inv).is_one());
  EXPECT_TRUE((p.psi_inv * p.psi).is_one());
  InverseCheck c = check_inverse_consistency(p);
  EXPECT_TRUE(c.consistent) << c.detail;
}

TEST(ComputePsi, InverseIdentityRandomTables) {
  std::mt19937 rng(43);
  for (int i = 0; i < 50; ++i) {
    EkTable t = qjt::random_table(rng, i);
    PsiPair p = compute_psi(t, 7);
    EXPECT_TRUE((p.psi * p.psi_inv).is_one()) << t.id;
    EXPECT_TRUE((p.psi_inv * p.psi).is_one()) << t.id;
    EXPECT_TRUE(check_inverse_consistency(p).consistent) << t.id;
  }
}

TEST(ComputePsi, DegreeBound) {
  std::mt19937 rng(44);
  std::vector<EkTable> tables{builtin_table()};
  for (int i = 0; i < 5; ++i)
    tables.push_back(qjt::random_table(rng, i));
  for (const auto &t : tables) {
    PsiPair p = compute_psi(t, 8);
    for (int k = 0; k < 8; ++k) {
      EXPECT_LE(p.psi[k].degree(), k) << t.id << " h^" << k;
      EXPECT_LE(p.psi_inv[k].degree(), k) << t.id << " h^" << k;
    }
  }
}

TEST(ComputePsi, MonotoneConsistency) {
  std::mt19937 rng(45);
  for (const EkTable &t : {builtin_table(), qjt::random_table(rng, 1), qjt::random_table(rng, 2)}) {
    PsiPair full = compute_psi(t, 8);
    for (int n = 2; n <= 8; ++n) {
      PsiPair part = compute_psi(t, n);
      EXPECT_EQ(full.psi.truncate(n).to_text(), part.psi.to_text());
      EXPECT_EQ(full.psi_inv.truncate(n).to_text(), part.psi_inv.to_text());
    }
  }
}

TEST(ComputePsi, ZeroTableGivesOne) {
  EkTable zero;
  zero.id = "zero";
  for (int n = 2; n <= 8; ++n) {
    PsiPair p = compute_psi(zero, n);
    EXPECT_TRUE(p.psi.is_one());
    EXPECT_TRUE(p.psi_inv.is_one());
  }
}

TEST(ComputePsi, MissingDegreesNoticed) {
  PsiPair p = compute_psi(builtin_table(), 5);
  ASSERT_EQ(p.notices.size(), 2u);
  EXPECT_NE(p.notices[0].find("E_3"), std::string::npos);
  EXPECT_NE(p.notices[1].find("E_4"), std::string::npos);
  EXPECT_TRUE(compute_psi(builtin_table(), 3).notices.empty());
}

TEST(ComputePsi, Errors) {
  EXPECT_THROW(compute_psi(builtin_table(), 1), DomainError);
  EkTable bad;
  bad.id = "bad";
  bad.entries.emplace(3, NCPoly::parse("A.B", ab_alphabet()));
  EXPECT_THROW(compute_psi(bad, 4), TableError);
}

TEST(ComputePsi, Deterministic) {
  EXPECT_EQ(psi_to_text(compute_psi(builtin_table(), 7)), psi_to_text(compute_psi(builtin_table(), 7)));
}

TEST(InverseConsistency, Examples) {
  EXPECT_TRUE(check_inverse_consistency(compute_psi(builtin_table(), 2)).consistent);
  PsiPair p = compute_psi(builtin_table(), 3);
  EXPECT_TRUE(check_inverse_consistency(p).consistent);
  p.psi_inv[2] = -p.psi_inv[2];
  InverseCheck c = check_inverse_consistency(p);
  EXPECT_FALSE(c.consistent);
  EXPECT_EQ(c.first_bad_degree, 2);
}

TEST(PsiGolden, MatchesFiles) {
  EXPECT_EQ(psi_to_text(compute_psi(builtin_table(), 3)), qjt::read_file(QJACOBI_GOLDEN_DIR "/psi_builtin_n3.txt"));
  EXPECT_EQ(psi_to_text(compute_psi(builtin_table(), 6)), qjt::read_file(QJACOBI_GOLDEN_DIR "/psi_builtin_n6.txt"));
}

TEST(PsiJson, Parses) {
  auto j = nlohmann::json::parse(psi_to_json(compute_psi(builtin_table(), 4)).dump());
  EXPECT_EQ(j.at("order"), 4);
  EXPECT_EQ(series_from_json(j.at("psi")).to_text(), compute_psi(builtin_table(), 4).psi.to_text());
}
