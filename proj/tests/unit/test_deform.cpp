#include <gtest/gtest.h>

#include "cochain_span.hpp"
#include "generators.hpp"
#include "knfam/knfam.hpp"

using namespace knfam;

namespace {

GeneratorId V(int n) { return GeneratorId::vector_field(n); }
const ParamPolynomial lambda = ParamPolynomial::var(Param::lambda);

}  // namespace

TEST(FirstOrder, DsInE1) {
  auto c = first_order_cocycle(families::genus1_vf_Ds(), Param::e1, Window(-8, 8));
  ASSERT_TRUE(c.degree_shift.has_value());
  EXPECT_EQ(*c.degree_shift, -2);
  EXPECT_EQ(c.cochain.at(V(0), V(2)), Element(V(0), 6));
  EXPECT_TRUE(c.cochain.at(V(1), V(2)).is_zero());
  EXPECT_EQ(c.cochain.at(V(3), V(0)), Element(V(1), -12));
  EXPECT_FALSE(compare_on_window(c.base, families::witt(), Window(-8, 8)).has_value());
}

TEST(FirstOrder, DsIsInfinitesimallyTrivial) {
  auto c = first_order_cocycle(families::genus1_vf_Ds(), Param::e1, Window(-8, 8));
  auto r = verify_infinitesimal_triviality(c, Window(-8, 8));
  EXPECT_TRUE(r.cocycle_check.pass);
  ASSERT_TRUE(r.coboundary.has_value());
  EXPECT_TRUE(r.pass());
  const auto& sol = *r.coboundary;
  EXPECT_EQ(sol.equations, 104u);
  EXPECT_EQ(sol.unknowns, 17u);
  EXPECT_EQ(sol.rank, 16u);
  EXPECT_FALSE(d1_mismatch(c.base, sol.psi, c.cochain, Window(-8, 8)).has_value());

  OneCochain explicit_psi(Window(-8, 8));
  for (int k = -8; k <= 8; ++k)
    explicit_psi.set(V(k), Element(V(k - 2), ParamPolynomial(k % 2 == 0 ? Rational(-3) : Rational(-3, 2))));
  std::vector<span::Coords> ker;
  for (const auto& k : sol.kernel) ker.push_back(span::coords(k));
  EXPECT_TRUE(span::in_span(span::minus(span::coords(explicit_psi), span::coords(sol.psi)), ker));
  // The explicit solution itself satisfies d1 psi = phi wherever evaluable.
  EXPECT_FALSE(d1_mismatch(c.base, explicit_psi, c.cochain, Window(-8, 8)).has_value());
}

TEST(FirstOrder, TwoParamInE2AtE1ZeroVanishes) {
  auto c = first_order_cocycle(families::genus1_vf_2param(), Param::e2, Window(-6, 6), Bindings{{Param::e1, 0}});
  EXPECT_TRUE(c.cochain.values().empty());
  EXPECT_EQ(c.degree_shift, 0);
}

TEST(FirstOrder, TwoParamLinearTermsAreHomogeneous) {
  auto c = first_order_cocycle(families::genus1_vf_2param(), Param::e1, Window(-4, 4), Bindings{{Param::e2, 0}});
  EXPECT_EQ(*c.degree_shift, -2);
  auto c2 = first_order_cocycle(families::genus1_vf_2param(), Param::e2, Window(-4, 4), Bindings{{Param::e1, 1}});
  EXPECT_EQ(c2.degree_shift, -4);
  auto r = verify_infinitesimal_triviality(c2, Window(-4, 4));
  EXPECT_TRUE(r.cocycle_check.pass);
}

TEST(FirstOrder, Errors) {
  EXPECT_THROW(first_order_cocycle(families::genus1_vf_Ds(), Param::lambda, Window(-2, 2)), NonPolynomialParameter);
  EXPECT_THROW(first_order_cocycle(families::genus1_vf_Ds(), Param::e1, Window(-2, 2), Bindings{{Param::e1, 1}}),
               std::invalid_argument);
}

TEST(FirstOrder, CocyclePropertyAtRandomBasePoints) {
  // The linear term of a Lie family at any base point is a 2-cocycle of that fiber.
  for (int trial = 0; trial < 4; ++trial) {
    Rational e2v = gen::rational();
    auto c = first_order_cocycle(families::genus1_vf_2param(), Param::e1, Window(-4, 4), Bindings{{Param::e2, e2v}});
    EXPECT_TRUE(d2_check(c.base, c.cochain, Window(-4, 4)).pass);
  }
}

TEST(Transport, RescaledDsEqualsUnitFiber) {
  for (Rational s : {Rational(0), Rational(-1), Rational(3), Rational(1), Rational(5, 7)}) {
    auto ds = specialize(families::genus1_vf_Ds(), Bindings{{Param::s, ParamPolynomial(s)}});
    auto rescaled = rescale_family(ds);
    auto unit = specialize(ds, Bindings{{Param::e1, ParamPolynomial(1)}});
    EXPECT_FALSE(compare_on_window(rescaled, unit, Window(-8, 8)).has_value()) << s.to_string();
  }
  auto sym = rescale_family(families::genus1_vf_Ds());
  EXPECT_FALSE(sym.parameters().contains(Param::e1));
  EXPECT_FALSE(sym.parameters().contains(Param::lambda));
}

TEST(Transport, IsABasisChange) {
  // V*_n = lambda^-n V_n: the transported bracket agrees with the original
  // after rescaling every basis vector, checked at lambda = 2.
  auto f = specialize(families::genus1_vf_Ds(), Bindings{{Param::e1, lambda.pow(2)}, {Param::s, ParamPolynomial(3)}});
  auto t = transport(f, 1);
  const Point at{{Param::lambda, 2}};
  for (int n = -4; n <= 4; ++n)
    for (int m = -4; m <= 4; ++m) {
      auto lhs = basis_bracket(t, V(n), V(m)).substitute(to_bindings(at));
      Element rhs;
      for (const auto& [g, c] : basis_bracket(f, V(n), V(m)).support())
        rhs.add(g, ParamPolynomial(c.eval(at) / Rational(2).pow(n + m - g.degree)));
      EXPECT_EQ(lhs, rhs);
    }
}

TEST(Transport, Errors) {
  EXPECT_THROW(transport(families::genus1_vf_Ds(), 1), KindMismatch);
  EXPECT_THROW(rescale_family(families::genus1_vf_2param()), KindMismatch);
  EXPECT_THROW(rescale_family(families::function_algebra()), KindMismatch);
  EXPECT_NO_THROW(transport(families::witt(), 3));
}

TEST(JumpWitness, Fibers) {
  for (Rational s : {Rational(0), Rational(-1), Rational(3)}) {
    auto r = jump_witness(s, Window(-8, 8));
    EXPECT_TRUE(r.pass()) << s.to_string();
    EXPECT_TRUE(r.rescaled_equals_unit_fiber);
    EXPECT_TRUE(r.zero_fiber_equals_witt);
    for (const auto& c : r.coefficients) EXPECT_TRUE(c.equal);
  }
  EXPECT_EQ(*jump_witness(Rational(3), Window(-4, 4)).j, Rational(3796416, 1225));
  EXPECT_EQ(*jump_witness(Rational(0), Window(-4, 4)).j, Rational(1728));
  auto ex = jump_witness(Rational(1), Window(-4, 4));
  EXPECT_TRUE(ex.exceptional_line);
  EXPECT_TRUE(ex.pass());
  EXPECT_EQ(ex.to_json()["geometry"], "exceptional line: every fiber with e1 != 0 is a nodal cubic");
}
