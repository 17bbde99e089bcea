#pragma once

#include <algorithm>
#include <array>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "knfam/errors.hpp"
#include "knfam/param_poly.hpp"
#include "knfam/rational.hpp"

namespace knfam {

/// Quotient of two polynomials. Normalized by removing the common monomial
/// factor and making the leading coefficient of the denominator 1; no
/// multivariate gcd is taken, so equality is decided by cross-multiplication.
class RationalFunction {
public:
  RationalFunction() : num_(0), den_(1) {}
  RationalFunction(ParamPolynomial num, ParamPolynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
    normalize();
  }

  const ParamPolynomial& numerator() const { return num_; }
  const ParamPolynomial& denominator() const { return den_; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

  RationalFunction substitute(const Bindings& b) const { return {num_.substitute(b), den_.substitute(b)}; }

  /// Quotient rule: (n' d - n d') / d^2.
  RationalFunction derivative(Param p) const {
    return {num_.derivative(p) * den_ - num_ * den_.derivative(p), den_ * den_};
  }

  /// Value at a point; throws std::domain_error where the denominator vanishes.
  Rational eval(const Point& pt) const {
    Rational d = den_.eval(pt);
    if (d.is_zero()) throw std::domain_error("denominator vanishes at the point");
    return num_.eval(pt) / d;
  }

  std::string to_string() const {
    return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
  }

  nlohmann::ordered_json to_json() const {
    return {{"numerator", num_.to_json()}, {"denominator", den_.to_json()}};
  }

private:
  void normalize() {
    if (num_.is_zero()) {
      den_ = ParamPolynomial(1);
      return;
    }
    Monomial common = num_.terms().begin()->first;
    for (const auto* p : {&num_, &den_})
      for (const auto& [m, c] : p->terms())
        for (std::size_t i = 0; i < kParamCount; ++i) common.exp[i] = std::min(common.exp[i], m.exp[i]);
    if (!common.is_one()) {
      num_ = num_.divide_by(common);
      den_ = den_.divide_by(common);
    }
    Rational lead = den_.terms().rbegin()->second;
    if (!lead.is_one()) {
      ParamPolynomial inv(lead.inverse());
      num_ = inv * num_;
      den_ = inv * den_;
    }
  }

  ParamPolynomial num_;
  ParamPolynomial den_;
};

enum class CurveType { Smooth, Nodal, Cuspidal, Symbolic };

/// The three lines through the origin where the cubic acquires a node,
/// named by the slope s of e2 = s e1.
enum class NodalLine { D1, Dminus2, Dminus1over2 };

inline const char* curve_type_name(CurveType t) {
  switch (t) {
    case CurveType::Smooth: return "Smooth";
    case CurveType::Nodal: return "Nodal";
    case CurveType::Cuspidal: return "Cuspidal";
    case CurveType::Symbolic: return "Symbolic";
  }
  return "?";
}

inline const char* nodal_line_name(NodalLine l) {
  switch (l) {
    case NodalLine::D1: return "D1";
    case NodalLine::Dminus2: return "D-2";
    case NodalLine::Dminus1over2: return "D-1/2";
  }
  return "?";
}

/// y^2 = 4 (x - e1)(x - e2)(x - e3) with e1 + e2 + e3 = 0.
struct CurveParams {
  ParamPolynomial e1, e2, e3, g2, g3, delta;
  CurveType type = CurveType::Symbolic;
  std::optional<NodalLine> line;

  bool is_numeric() const { return type != CurveType::Symbolic; }

  nlohmann::ordered_json to_json() const {
    auto val = [&](const ParamPolynomial& p) -> nlohmann::ordered_json {
      if (is_numeric()) return p.constant_value().to_string();
      return p.to_json();
    };
    nlohmann::ordered_json j;
    j["e1"] = val(e1);
    j["e2"] = val(e2);
    j["e3"] = val(e3);
    j["g2"] = val(g2);
    j["g3"] = val(g3);
    j["delta"] = val(delta);
    j["classification"] = curve_type_name(type);
    if (line) j["line"] = nodal_line_name(*line);
    return j;
  }
};

namespace geometry_detail {

inline ParamPolynomial node_factor(const ParamPolynomial& e1, const ParamPolynomial& e2, NodalLine l) {
  switch (l) {
    case NodalLine::D1: return e1 - e2;
    case NodalLine::Dminus2: return 2 * e1 + e2;
    case NodalLine::Dminus1over2: return e1 + 2 * e2;
  }
  return {};
}

inline constexpr std::array<NodalLine, 3> kLines{NodalLine::D1, NodalLine::Dminus2, NodalLine::Dminus1over2};

}  // namespace geometry_detail

inline CurveParams derive_curve(const ParamPolynomial& e1, const ParamPolynomial& e2) {
  CurveParams c;
  c.e1 = e1;
  c.e2 = e2;
  c.e3 = -(e1 + e2);
  c.g2 = -4 * (e1 * e2 + e1 * c.e3 + e2 * c.e3);
  c.g3 = 4 * e1 * e2 * c.e3;
  c.delta = c.g2.pow(3) - 27 * c.g3.pow(2);
  if (!e1.is_constant() || !e2.is_constant()) return c;
  if (e1.is_zero() && e2.is_zero()) {
    c.type = CurveType::Cuspidal;
    return c;
  }
  c.type = CurveType::Smooth;
  for (auto l : geometry_detail::kLines)
    if (geometry_detail::node_factor(e1, e2, l).is_zero()) {
      c.type = CurveType::Nodal;
      c.line = l;
    }
  return c;
}

inline CurveParams derive_curve(const Rational& e1, const Rational& e2) {
  return derive_curve(ParamPolynomial(e1), ParamPolynomial(e2));
}

/// 16 (e1 - e2)^2 (2 e1 + e2)^2 (e1 + 2 e2)^2.
inline ParamPolynomial factored_discriminant(const ParamPolynomial& e1, const ParamPolynomial& e2) {
  ParamPolynomial r(16);
  for (auto l : geometry_detail::kLines) r = r * geometry_detail::node_factor(e1, e2, l).pow(2);
  return r;
}

/// 1728 g2^3 / delta as a rational function of the curve's parameters.
inline RationalFunction j_invariant_symbolic(const CurveParams& c) {
  if (c.delta.is_zero()) throw SingularCurve("discriminant vanishes identically; no j-invariant");
  return {1728 * c.g2.pow(3), c.delta};
}

inline Rational j_invariant(const CurveParams& c) {
  if (!c.is_numeric()) throw UnboundParameter("j_invariant needs numeric e1, e2; use j_invariant_symbolic");
  if (c.type != CurveType::Smooth)
    throw SingularCurve(std::string(curve_type_name(c.type)) + " cubic at (e1, e2) = (" +
                        c.e1.constant_value().to_string() + ", " + c.e2.constant_value().to_string() +
                        "); delta = 0");
  return Rational(1728) * c.g2.constant_value().pow(3) / c.delta.constant_value();
}

inline Rational j_invariant(const Rational& e1, const Rational& e2) { return j_invariant(derive_curve(e1, e2)); }

/// 1728 * 4 (1 + s + s^2)^3 / ((1 - s)^2 (2 + s)^2 (1 + 2 s)^2) as a
/// rational function of s.
inline RationalFunction j_Ds_closed_form() {
  const auto s = ParamPolynomial::var(Param::s);
  return {1728 * 4 * (1 + s + s.pow(2)).pow(3), (1 - s).pow(2) * (2 + s).pow(2) * (1 + 2 * s).pow(2)};
}

/// j on the line e2 = s e1; independent of e1.
inline Rational j_along_Ds(const Rational& s) {
  for (const Rational& bad : {Rational(1), Rational(-2), Rational(-1, 2)})
    if (s == bad) throw ExceptionalLine("s = " + s.to_string() + " is an exceptional line (nodal fibers)");
  return j_Ds_closed_form().eval({{Param::s, s}});
}

/// 1728 (1 + 2 e1 + 4 e1^2)^3 / ((1 - 2 e1)^2 (1 + e1)^2 (1 + 4 e1)^2).
inline RationalFunction j_C_closed_form() {
  const auto e = ParamPolynomial::var(Param::e1);
  return {1728 * (1 + 2 * e + 4 * e.pow(2)).pow(3), (1 - 2 * e).pow(2) * (1 + e).pow(2) * (1 + 4 * e).pow(2)};
}

/// j along the curve C: e2 = 2 e1^2. At e1 = 0 this is the formula's
/// limit value, not an invariant of the cuspidal fiber.
inline Rational j_along_C(const Rational& e1) {
  for (const Rational& bad : {Rational(1, 2), Rational(-1), Rational(-1, 4)})
    if (e1 == bad) throw ExceptionalPoint("e1 = " + e1.to_string() + " is a singular point of C");
  return j_C_closed_form().eval({{Param::e1, e1}});
}

struct GeometryIdentities {
  bool discriminant_factorization = false;
  bool g2_closed_form = false;
  bool j_Ds_matches_closed_form = false;
  bool j_Ds_constant_in_e1 = false;
  bool j_C_matches_closed_form = false;
  bool j_C_nonconstant = false;

  bool all() const {
    return discriminant_factorization && g2_closed_form && j_Ds_matches_closed_form && j_Ds_constant_in_e1 &&
           j_C_matches_closed_form && j_C_nonconstant;
  }

  nlohmann::ordered_json to_json() const {
    return {{"discriminant_factorization", discriminant_factorization},
            {"g2_closed_form", g2_closed_form},
            {"j_Ds_matches_closed_form", j_Ds_matches_closed_form},
            {"j_Ds_constant_in_e1", j_Ds_constant_in_e1},
            {"j_C_matches_closed_form", j_C_matches_closed_form},
            {"j_C_nonconstant", j_C_nonconstant},
            {"pass", all()}};
  }
};

/// Exact polynomial identities behind the j-invariant formulas.
inline GeometryIdentities verify_geometry_identities() {
  const auto e1 = ParamPolynomial::var(Param::e1);
  const auto e2 = ParamPolynomial::var(Param::e2);
  const auto s = ParamPolynomial::var(Param::s);
  GeometryIdentities r;
  auto c = derive_curve(e1, e2);
  r.discriminant_factorization = (c.delta - factored_discriminant(e1, e2)).is_zero();
  r.g2_closed_form = c.g2 == 4 * (e1.pow(2) + e1 * e2 + e2.pow(2));

  auto j = j_invariant_symbolic(c);
  auto jd = j.substitute({{Param::e2, s * e1}});
  r.j_Ds_matches_closed_form = jd == j_Ds_closed_form();
  r.j_Ds_constant_in_e1 = jd.derivative(Param::e1).numerator().is_zero();

  auto jc = j.substitute({{Param::e2, 2 * e1.pow(2)}});
  r.j_C_matches_closed_form = jc == j_C_closed_form();
  r.j_C_nonconstant = j_along_C(Rational(1)) != j_C_closed_form().eval({{Param::e1, Rational(0)}});
  return r;
}

}  // namespace knfam
