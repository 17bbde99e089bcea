#include <gtest/gtest.h>

#include "generators.hpp"
#include "knfam/knfam.hpp"

using namespace knfam;

namespace {

const ParamPolynomial e1 = ParamPolynomial::var(Param::e1);
const ParamPolynomial e2 = ParamPolynomial::var(Param::e2);
const ParamPolynomial s = ParamPolynomial::var(Param::s);

// g2, g3 read off from 4 (x - e1)(x - e2)(x - e3) = 4 x^3 - g2 x - g3.
struct Weierstrass {
  Rational g2, g3, delta;
};

Weierstrass from_roots(const Rational& a, const Rational& b) {
  const Rational c = -(a + b);
  // coefficients of (x - a)(x - b)(x - c) = x^3 + p2 x^2 + p1 x + p0
  Rational p2 = -(a + b + c), p1 = a * b + a * c + b * c, p0 = -a * b * c;
  EXPECT_TRUE(p2.is_zero());
  Weierstrass w{Rational(-4) * p1, Rational(-4) * p0, {}};
  w.delta = w.g2.pow(3) - Rational(27) * w.g3.pow(2);
  Rational disc = Rational(16) * ((a - b) * (a - c) * (b - c)).pow(2);
  EXPECT_EQ(w.delta, disc);
  return w;
}

}  // namespace

TEST(Geometry, DiscriminantIdentity) {
  auto c = derive_curve(e1, e2);
  EXPECT_TRUE((c.g2.pow(3) - 27 * c.g3.pow(2) - factored_discriminant(e1, e2)).is_zero());
  EXPECT_EQ(c.g2, 4 * (e1.pow(2) + e1 * e2 + e2.pow(2)));
  EXPECT_EQ(c.e3, -(e1 + e2));
  EXPECT_EQ(c.type, CurveType::Symbolic);
  EXPECT_TRUE(verify_geometry_identities().all());
}

TEST(Geometry, AgreesWithRootExpansionProperty) {
  for (int i = 0; i < 100; ++i) {
    Rational a = gen::rational(), b = gen::rational();
    auto c = derive_curve(a, b);
    auto w = from_roots(a, b);
    EXPECT_EQ(c.g2.constant_value(), w.g2);
    EXPECT_EQ(c.g3.constant_value(), w.g3);
    EXPECT_EQ(c.delta.constant_value(), w.delta);
    if (!w.delta.is_zero()) {
      EXPECT_EQ(j_invariant(a, b), Rational(1728) * w.g2.pow(3) / w.delta);
    }
  }
}

TEST(Geometry, Values) {
  auto c = derive_curve(Rational(1), Rational(2));
  EXPECT_EQ(c.g2.constant_value(), Rational(28));
  EXPECT_EQ(c.g3.constant_value(), Rational(-24));
  EXPECT_EQ(c.delta.constant_value(), Rational(6400));
  EXPECT_EQ(j_invariant(c), Rational(148176, 25));
  EXPECT_EQ(j_invariant(Rational(0), Rational(5)), Rational(1728));
  EXPECT_EQ(j_along_Ds(Rational(0)), Rational(1728));
  EXPECT_EQ(j_along_C(Rational(1)), Rational(148176, 25));
  EXPECT_NE(j_along_C(Rational(1)), Rational(1728));
}

TEST(Geometry, Classification) {
  auto cusp = derive_curve(Rational(0), Rational(0));
  EXPECT_EQ(cusp.type, CurveType::Cuspidal);
  EXPECT_FALSE(cusp.line.has_value());
  EXPECT_THROW(j_invariant(cusp), SingularCurve);

  struct LineCase {
    NodalLine line;
    Rational slope;
  };
  for (auto [line, slope] : {LineCase{NodalLine::D1, 1}, LineCase{NodalLine::Dminus2, -2},
                             LineCase{NodalLine::Dminus1over2, Rational(-1, 2)}})
    for (int i = 0; i < 20; ++i) {
      Rational a = gen::nonzero_rational();
      auto c = derive_curve(a, slope * a);
      EXPECT_EQ(c.type, CurveType::Nodal);
      ASSERT_TRUE(c.line.has_value());
      EXPECT_EQ(*c.line, line);
      EXPECT_TRUE(c.delta.is_zero());
      EXPECT_THROW(j_invariant(c), SingularCurve);
    }

  int smooth = 0;
  while (smooth < 50) {
    Rational a = gen::rational(), b = gen::rational();
    if (a == b || b == Rational(-2) * a || a == Rational(-2) * b) continue;
    auto c = derive_curve(a, b);
    EXPECT_EQ(c.type, CurveType::Smooth);
    EXPECT_FALSE(c.delta.is_zero());
    ++smooth;
  }
}

TEST(Geometry, JConstantAlongDs) {
  auto j = j_invariant_symbolic(derive_curve(e1, e2));
  auto jd = j.substitute({{Param::e2, s * e1}});
  EXPECT_TRUE(jd.derivative(Param::e1).numerator().is_zero());
  EXPECT_EQ(jd, j_Ds_closed_form());
  for (int i = 0; i < 30; ++i) {
    Rational sv = gen::rational();
    if (sv == Rational(1) || sv == Rational(-2) || sv == Rational(-1, 2)) continue;
    Rational a = gen::nonzero_rational();
    EXPECT_EQ(j_invariant(a, sv * a), j_along_Ds(sv));
  }
  EXPECT_THROW(j_along_Ds(Rational(-2)), ExceptionalLine);
  EXPECT_THROW(j_along_Ds(Rational(-1, 2)), ExceptionalLine);
}

TEST(Geometry, JOnDInfinity) {
  for (int i = 0; i < 20; ++i) EXPECT_EQ(j_invariant(Rational(0), gen::nonzero_rational()), Rational(1728));
}

TEST(Geometry, JAlongC) {
  auto j = j_invariant_symbolic(derive_curve(e1, e2)).substitute({{Param::e2, 2 * e1.pow(2)}});
  EXPECT_EQ(j, j_C_closed_form());
  EXPECT_FALSE(j.derivative(Param::e1).numerator().is_zero());
  for (int i = 0; i < 30; ++i) {
    Rational a = gen::nonzero_rational();
    if (a == Rational(1, 2) || a == Rational(-1) || a == Rational(-1, 4)) continue;
    EXPECT_EQ(j_invariant(a, Rational(2) * a * a), j_along_C(a));
  }
  EXPECT_THROW(j_along_C(Rational(-1, 4)), ExceptionalPoint);
}

TEST(Geometry, SymbolicErrors) {
  EXPECT_THROW(j_invariant(derive_curve(e1, e2)), UnboundParameter);
  EXPECT_THROW(j_invariant_symbolic(derive_curve(e1, e1)), SingularCurve);
}

TEST(RationalFunction, Normalization) {
  RationalFunction r(2 * e1 * e2, 4 * e1);
  EXPECT_EQ(r.numerator(), ParamPolynomial(Rational(1, 2)) * e2);
  EXPECT_EQ(r.denominator(), ParamPolynomial(1));
  EXPECT_EQ(RationalFunction(e1, e1 + 1), RationalFunction(2 * e1, 2 * e1 + 2));
  EXPECT_THROW(RationalFunction(e1, ParamPolynomial()), std::domain_error);
  EXPECT_THROW(RationalFunction(e1, e2 - 1).eval({{Param::e1, 1}, {Param::e2, 1}}), std::domain_error);
}
