#include <gtest/gtest.h>

#include "cochain_span.hpp"
#include "generators.hpp"
#include "knfam/knfam.hpp"

using namespace knfam;

namespace {

GeneratorId V(int n) { return GeneratorId::vector_field(n); }

OneCochain shift_cochain(const Window& w, int d, const std::function<Rational(int)>& c) {
  OneCochain psi(w);
  for (int k = w.lo; k <= w.hi; ++k) psi.set(V(k), Element(V(k + d), ParamPolynomial(c(k))));
  return psi;
}

TwoCochain witt_rule(const Window& w, const std::function<Element(int, int)>& rule) {
  TwoCochain phi(w);
  for (int n = w.lo; n <= w.hi; ++n)
    for (int m = n + 1; m <= w.hi; ++m) phi.set(V(n), V(m), rule(n, m));
  return phi;
}

OneCochain random_cochain(const LieFamily& f, const Window& w, const Window& targets) {
  OneCochain psi(w);
  for (const auto& g : f.basis(w))
    if (gen::uniform(0, 2) > 0) psi.set(g, gen::element(f, targets, 2));
  return psi;
}

}  // namespace

TEST(Cochains, TwoCochainIsAntisymmetric) {
  TwoCochain phi(Window(-2, 2));
  phi.set(V(1), V(-1), Element(V(0), 3));
  EXPECT_EQ(phi.at(V(-1), V(1)), Element(V(0), -3));
  EXPECT_EQ(phi.at(V(1), V(-1)), Element(V(0), 3));
  EXPECT_TRUE(phi.at(V(2), V(2)).is_zero());
  EXPECT_THROW(phi.set(V(1), V(1), Element(V(0))), std::invalid_argument);
  EXPECT_THROW(phi.set(V(3), V(1), Element(V(0))), OutOfWindow);
  EXPECT_THROW(phi.at(V(3), V(1)), OutOfWindow);
  phi.restrict_domain({{V(-1), V(1)}});
  EXPECT_TRUE(phi.defined(V(1), V(-1)));
  EXPECT_FALSE(phi.defined(V(0), V(1)));
  EXPECT_THROW(phi.at(V(0), V(1)), OutOfWindow);
}

TEST(Cochains, OneCochainWindow) {
  OneCochain psi(Window(0, 1));
  psi.set(V(1), Element(V(0)));
  EXPECT_TRUE(psi.at(V(0)).is_zero());
  EXPECT_THROW(psi.at(V(2)), OutOfWindow);
  EXPECT_THROW(psi.set(V(-1), Element(V(0))), OutOfWindow);
  psi.set(V(1), Element());
  EXPECT_TRUE(psi.values().empty());
}

TEST(D1, ShiftOnWitt) {
  auto w = families::witt();
  auto psi = shift_cochain(Window(-4, 4), -2, [](int) { return Rational(5); });
  EXPECT_EQ(d1(w, psi, V(0), V(2)), Element(V(0), -10));
  EXPECT_THROW(d1(w, psi, V(3), V(4)), OutOfWindow);
  EXPECT_FALSE(d1_evaluable(w, psi, V(3), V(4)));
}

TEST(D1, IdentityGivesMinusBracket) {
  auto w = families::witt();
  auto id = shift_cochain(Window(-8, 8), 0, [](int) { return Rational(1); });
  for (int n = -4; n <= 4; ++n)
    for (int m = -4; m <= 4; ++m) EXPECT_EQ(d1(w, id, V(n), V(m)), -basis_bracket(w, V(n), V(m)));
}

TEST(D1, SquareIsZeroProperty) {
  std::vector<LieFamily> fams{families::witt(), specialize(families::genus1_vf_2param(), gen::point({Param::e1, Param::e2})),
                              families::genus1_vf_2param()};
  for (const auto& f : fams)
    for (int trial = 0; trial < 4; ++trial) {
      auto psi = random_cochain(f, Window(-12, 8), Window(-6, 6));
      auto phi = coboundary_of(f, psi, Window(-4, 4));
      auto r = d2_check(f, phi, Window(-4, 4));
      EXPECT_TRUE(r.pass) << f.name();
      EXPECT_GT(r.triples_checked, 0u);
      EXPECT_FALSE(d1_mismatch(f, psi, phi, Window(-4, 4)).has_value());
    }
}

TEST(D2, BracketAsCochainIsACocycle) {
  // phi = mu itself satisfies d2 mu = 0 by Jacobi.
  auto f = families::genus1_vf_2param();
  TwoCochain phi(Window(-14, 10));
  for (const auto& x : f.basis(Window(-14, 10)))
    for (const auto& y : f.basis(Window(-14, 10)))
      if (x < y) phi.set(x, y, basis_bracket(f, x, y));
  auto r = d2_check(f, phi, Window(-4, 4));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.triples_skipped, 0u);
}

TEST(D2, ShiftedIdentityFails) {
  auto phi = witt_rule(Window(0, 4), [](int n, int m) { return Element(V(n + m)); });
  auto r = d2_check(families::witt(), phi, Window(0, 3));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.failing_triple, (std::vector<GeneratorId>{V(0), V(1), V(2)}));
}

TEST(D2, SkipsTriplesOutsideTheWindow) {
  auto phi = witt_rule(Window(-2, 2), [](int n, int m) { return Element(V(n + m), ParamPolynomial(m - n)); });
  auto r = d2_check(families::witt(), phi, Window(-2, 2));
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.triples_skipped, 0u);
  EXPECT_EQ(r.triples_checked + r.triples_skipped, 10u);
}

TEST(AdjointSolve, DegreeMinusTwoOnWitt) {
  auto phi = witt_rule(Window(-6, 6), [](int n, int m) {
    return Element(V(n + m - 2), ParamPolynomial(m - n));
  });
  auto r = coboundary_solve_adjoint(families::witt(), phi, {-2, Window(-6, 6), Coefficients::Adjoint});
  ASSERT_TRUE(r.solvable);
  EXPECT_TRUE(r.verified);
  EXPECT_EQ(r.solution_space_dim, r.kernel.size());
  EXPECT_EQ(r.kernel.size(), 1u);
  auto expect = shift_cochain(Window(-6, 6), -2, [](int) { return Rational(-1); });
  std::vector<span::Coords> ker;
  for (const auto& k : r.kernel) ker.push_back(span::coords(k));
  EXPECT_TRUE(span::in_span(span::minus(span::coords(expect), span::coords(r.psi)), ker));
  // ad(l_{-2}) spans the kernel.
  auto ad = shift_cochain(Window(-6, 6), -2, [](int k) { return Rational(k + 2); });
  EXPECT_TRUE(span::in_span(span::coords(ad), ker));
}

TEST(AdjointSolve, RecoversRandomCoboundaryProperty) {
  auto w = families::witt();
  for (int trial = 0; trial < 10; ++trial) {
    const int d = gen::uniform(-3, 3);
    OneCochain psi(Window(-6, 6));
    for (int k = -6; k <= 6; ++k) psi.set(V(k), Element(V(k + d), ParamPolynomial(gen::rational())));
    auto phi = coboundary_of(w, psi, Window(-5, 5));
    auto r = coboundary_solve_adjoint(w, phi, {d, Window(-5, 5), Coefficients::Adjoint});
    ASSERT_TRUE(r.solvable);
    EXPECT_TRUE(r.verified);
    EXPECT_FALSE(d1_mismatch(w, r.psi, phi, Window(-5, 5)).has_value());
  }
}

TEST(AdjointSolve, NonCoboundaryGetsCertificate) {
  // The shifted identity is not a cocycle, so not a coboundary either.
  auto phi = witt_rule(Window(-4, 4), [](int n, int m) { return Element(V(n + m)); });
  auto r = coboundary_solve_adjoint(families::witt(), phi, {0, Window(-4, 4), Coefficients::Adjoint});
  EXPECT_FALSE(r.solvable);
  EXPECT_FALSE(r.certificate.empty());
  EXPECT_FALSE(r.certificate_value.is_zero());
  auto j = r.to_json(families::witt());
  EXPECT_EQ(j["solvable"], false);
  EXPECT_TRUE(j.contains("certificate_value"));
}

TEST(H2, WittAdjointWindowedQuotientVanishes) {
  auto r = graded_h2_report(families::witt(), {-2, Window(-8, 8), Coefficients::Adjoint});
  EXPECT_EQ(r.cochain_dim, 104u);
  EXPECT_EQ(r.d2_rows, 288u);
  EXPECT_EQ(r.d2_rank, 88u);
  EXPECT_EQ(r.cocycle_dim, 16u);
  EXPECT_EQ(r.coboundary_dim, 16u);
  EXPECT_EQ(r.quotient_dim, 0u);
  EXPECT_EQ(r.triples_skipped, 392u);
  auto j = r.to_json();
  EXPECT_EQ(j["label"], "EVIDENCE");
  EXPECT_EQ(j["triples_skipped"], 392);
  for (int d : {0, 2}) {
    auto q = graded_h2_report(families::witt(), {d, Window(-8, 8), Coefficients::Adjoint});
    EXPECT_EQ(q.cocycle_dim, 16u) << d;
    EXPECT_EQ(q.quotient_dim, 0u) << d;
  }
}

TEST(H2, WittTrivialCoefficientsSeeVirasoro) {
  auto r = graded_h2_report(families::witt(), {0, Window(-3, 3), Coefficients::Trivial});
  EXPECT_EQ(r.cocycle_dim, 2u);
  EXPECT_EQ(r.coboundary_dim, 1u);
  EXPECT_EQ(r.quotient_dim, 1u);
}

TEST(H2, NeedsGradedFiber) {
  EXPECT_THROW(graded_h2_report(families::genus1_vf_2param(), {0, Window(-3, 3), Coefficients::Adjoint},
                                Point{{Param::e1, 1}, {Param::e2, 2}}),
               KindMismatch);
  auto r = graded_h2_report(families::genus1_vf_2param(), {0, Window(-3, 3), Coefficients::Adjoint},
                            Point{{Param::e1, 0}, {Param::e2, 0}});
  auto w = graded_h2_report(families::witt(), {0, Window(-3, 3), Coefficients::Adjoint});
  EXPECT_EQ(r.quotient_dim, w.quotient_dim);
  EXPECT_EQ(r.cochain_dim, w.cochain_dim);
}
