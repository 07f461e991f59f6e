#include "support.hpp"

#include "qjacobi/hseries.hpp"

#include <gtest/gtest.h>

using namespace qjacobi;

namespace {

AlphabetPtr ab() { return ab_alphabet(); }
NCPoly P(const std::string &t) { return NCPoly::parse(t, ab()); }

PolySeries S(std::initializer_list<const char *> coeffs) {
  std::vector<NCPoly> v;
  for (const char *c : coeffs)
    v.push_back(P(c));
  return PolySeries(v);
}

PolySeries random_series(std::mt19937 &rng, int order, bool unit_constant, bool zero_constant = false) {
  std::vector<NCPoly> v;
  for (int k = 0; k < order; ++k)
    v.push_back(qjt::random_poly(rng, ab(), 2, 3));
  if (unit_constant)
    v[0] = NCPoly::one(ab());
  if (zero_constant)
    v[0] = NCPoly(ab());
  return PolySeries(v);
}

} // namespace

TEST(SeriesArith, Examples) {
  EXPECT_EQ((S({"1", "A", "0"}) * S({"1", "-A", "0"})).to_text(), "h^0: 1\nh^1: 0\nh^2: - A.A\n");
  EXPECT_EQ(series_arith(S({"1", "A"}), S({"1", "B"}), SeriesOp::mul).to_text(), "h^0: 1\nh^1: A + B\n");
  PolySeries geometric = S({"1", "1", "1", "1", "1"});
  EXPECT_TRUE((geometric * S({"1", "-1", "0", "0", "0"})).is_one());
}

TEST(SeriesArith, MinimumOrder) {
  PolySeries a = S({"1", "A", "B"}), b = S({"1", "A"});
  EXPECT_EQ((a + b).order(), 2);
  EXPECT_EQ((a * b).order(), 2);
  EXPECT_EQ(series_arith(a, b, SeriesOp::sub).order(), 2);
}

TEST(SeriesArith, KindMismatch) {
  PolySeries a = S({"1", "A"});
  PolySeries c(std::vector<NCPoly>{NCPoly::one(cdz_alphabet()), NCPoly(cdz_alphabet())});
  EXPECT_THROW(a + c, MismatchError);
  MatrixSeries m2 = MatrixSeries::one(Matrix::identity(2), 2), m3 = MatrixSeries::one(Matrix::identity(3), 2);
  EXPECT_THROW(m2 * m3, MismatchError);
}

TEST(SeriesArith, EqualityModuloMinOrder) {
  EXPECT_EQ(S({"1", "A", "B"}), S({"1", "A"}));
  EXPECT_NE(S({"1", "A", "B"}), S({"1", "B"}));
}

TEST(SeriesArith, RingAxiomsRandom) {
  std::mt19937 rng(21);
  for (int i = 0; i < 60; ++i) {
    int order = 1 + static_cast<int>(rng() % 5);
    PolySeries a = random_series(rng, order, false), b = random_series(rng, order, false),
               c = random_series(rng, order, false);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) * c, a * c + b * c);
  }
}

TEST(SeriesInvert, Examples) {
  EXPECT_EQ(series_invert(S({"1", "A", "0"})).to_text(), "h^0: 1\nh^1: - A\nh^2: A.A\n");
  EXPECT_TRUE(series_invert(S({"1"})).is_one());
  EXPECT_THROW(series_invert(S({"0", "A"})), DomainError);
  EXPECT_THROW(series_invert(S({"2", "A"})), DomainError);
}

TEST(SeriesInvert, TwoSidedRandom) {
  std::mt19937 rng(22);
  for (int i = 0; i < 60; ++i) {
    PolySeries a = random_series(rng, 1 + static_cast<int>(rng() % 6), true);
    PolySeries b = series_invert(a);
    EXPECT_TRUE((a * b).is_one());
    EXPECT_TRUE((b * a).is_one());
  }
}

TEST(SeriesInvert, MatrixCoefficients) {
  Matrix x = Matrix::from_dense({{1, 2}, {0, 3}});
  MatrixSeries a(std::vector<Matrix>{Matrix::identity(2), x, x * x});
  MatrixSeries b = series_invert(a);
  EXPECT_TRUE((a * b).is_one());
  EXPECT_TRUE((b * a).is_one());
}

TEST(SeriesExp, Examples) {
  EXPECT_TRUE(series_exp(S({"0", "0", "0"})).is_one());
  auto o = make_alphabet({"O"});
  PolySeries x(std::vector<NCPoly>{NCPoly(o), NCPoly::parse("ipi*O", o), NCPoly(o)});
  EXPECT_EQ(series_exp(x).to_text(), "h^0: 1\nh^1: ipi*O\nh^2: 1/2*ipi^2*O.O\n");
  EXPECT_THROW(series_exp(S({"1", "A"})), DomainError);
}

TEST(SeriesExp, InverseOfExpIsExpOfNegative) {
  std::mt19937 rng(23);
  for (int i = 0; i < 40; ++i) {
    PolySeries x = random_series(rng, 1 + static_cast<int>(rng() % 5), false, true);
    EXPECT_TRUE((series_exp(x) * series_exp(-x)).is_one());
    EXPECT_EQ(series_invert(series_exp(x)), series_exp(-x));
  }
}

TEST(Truncate, Examples) {
  EXPECT_EQ(truncate(S({"1", "A", "B"}), 2).to_text(), "h^0: 1\nh^1: A\n");
  PolySeries a = S({"1", "A", "B"});
  EXPECT_EQ(truncate(a, 3).to_text(), a.to_text());
  EXPECT_TRUE(truncate(S({"1"}), 1).is_one());
  EXPECT_THROW(truncate(a, 4), DomainError);
  EXPECT_THROW(truncate(a, 0), DomainError);
}

TEST(Truncate, CommutesWithArithmetic) {
  std::mt19937 rng(24);
  for (int i = 0; i < 60; ++i) {
    const int order = 2 + static_cast<int>(rng() % 4);
    PolySeries a = random_series(rng, order, false), b = random_series(rng, order, false);
    const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(order));
    EXPECT_EQ(truncate(a * b, n).to_text(), truncate(truncate(a, n) * truncate(b, n), n).to_text());
    EXPECT_EQ(truncate(a + b, n).to_text(), truncate(truncate(a, n) + truncate(b, n), n).to_text());
  }
}

TEST(Shift, MultipliesByPowerOfH) {
  PolySeries a = S({"1", "A"});
  EXPECT_EQ(a.shift(2).to_text(), "h^0: 0\nh^1: 0\nh^2: 1\nh^3: A\n");
}

TEST(SeriesText, RoundTrip) {
  std::mt19937 rng(25);
  for (int i = 0; i < 50; ++i) {
    PolySeries a = random_series(rng, 1 + static_cast<int>(rng() % 5), false);
    EXPECT_EQ(parse_series_text(a.to_text(), ab()).to_text(), a.to_text());
  }
}

TEST(SeriesJson, RoundTrip) {
  std::mt19937 rng(26);
  for (int i = 0; i < 50; ++i) {
    PolySeries a = random_series(rng, 1 + static_cast<int>(rng() % 5), false);
    nlohmann::json j = series_to_json(a);
    PolySeries b = series_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(b.to_text(), a.to_text());
    EXPECT_EQ(b.order(), a.order());
    EXPECT_TRUE(b[0].alphabet() == a[0].alphabet());
  }
  PolySeries z(std::vector<NCPoly>{NCPoly::parse("Z.Zinv + C", cdz_alphabet())});
  EXPECT_TRUE(series_from_json(series_to_json(z))[0].alphabet() == *cdz_alphabet());
}
