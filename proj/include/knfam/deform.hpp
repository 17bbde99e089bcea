#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "knfam/checks.hpp"
#include "knfam/cohomology.hpp"
#include "knfam/family.hpp"
#include "knfam/geometry.hpp"

namespace knfam {

/// phi_1 of mu_t = mu_0 + t phi_1 + t^2 phi_2 + ..., for t one parameter
/// of a family and the other parameters fixed at a base point.
struct FirstOrderCocycle {
  std::string base_family;
  Param parameter = Param::e1;
  /// The fiber at parameter = 0, i.e. mu_0.
  LieFamily base;
  TwoCochain cochain;
  /// Common degree offset of all values, if the cochain is homogeneous.
  /// A zero cochain reports 0.
  std::optional<int> degree_shift;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["base_family"] = base_family;
    j["parameter"] = param_name(parameter);
    j["base_fiber"] = base.name();
    j["window"] = cochain.window().to_json();
    if (degree_shift) j["degree_shift"] = *degree_shift;
    else j["degree_shift"] = nullptr;
    j["cochain"] = cochain.to_json(base.fd_names());
    return j;
  }
};

/// Linear part in `param` of every bracket coefficient, with `others`
/// substituted, on all window pairs x < y.
inline FirstOrderCocycle first_order_cocycle(const LieFamily& f, Param param, const Window& w,
                                             const Bindings& others = {}) {
  if (param == Param::lambda)
    throw NonPolynomialParameter("'lambda' is a rescaling variable, not a deformation parameter of '" + f.name() +
                                 "'");
  if (others.contains(param))
    throw std::invalid_argument("the deformation parameter cannot also be bound at the base point");
  auto linear = [&](const std::vector<BracketTerm>& ts) {
    std::vector<BracketTerm> out;
    for (const auto& t : ts) {
      auto c = t.coeff.coefficient_of(param, 1).substitute(others);
      if (!c.is_zero()) out.push_back({t.offset, t.slope, t.intercept, std::move(c)});
    }
    return out;
  };
  const auto& rule = f.rule();
  LieFamily phi_rule(f.name() + "[d/d" + std::string(param_name(param)) + "]", f.kind(),
                     {linear(rule.odd_odd), linear(rule.even_even), linear(rule.odd_even)}, f.fd_algebra());

  Bindings at_base = others;
  at_base[param] = ParamPolynomial();
  FirstOrderCocycle c{f.name(), param, specialize(f, at_base), TwoCochain(w), std::nullopt};

  std::optional<int> shift;
  bool homogeneous = true;
  auto gens = f.basis(w);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      Element v = basis_bracket(phi_rule, gens[i], gens[j]);
      for (const auto& [g, k] : v.support()) {
        int off = g.degree - gens[i].degree - gens[j].degree;
        if (!shift) shift = off;
        else if (*shift != off) homogeneous = false;
      }
      c.cochain.set(gens[i], gens[j], v);
    }
  if (homogeneous) c.degree_shift = shift.value_or(0);
  return c;
}

struct TrivialityReport {
  FirstOrderCocycle cocycle;
  D2Report cocycle_check;
  std::optional<AdjointSolveResult> coboundary;
  std::string note;

  bool pass() const { return cocycle_check.pass && coboundary && coboundary->solvable && coboundary->verified; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["check"] = "infinitesimal_triviality";
    j["family"] = cocycle.base_family;
    j["parameter"] = param_name(cocycle.parameter);
    j["base_fiber"] = cocycle.base.name();
    j["cocycle_check"] = cocycle_check.to_json(cocycle.base);
    if (coboundary) j["coboundary"] = coboundary->to_json(cocycle.base);
    if (!note.empty()) j["note"] = note;
    j["pass"] = pass();
    return j;
  }
};

/// d2 phi_1 = 0 over the base fiber, then d1 psi = phi_1 solved and
/// re-verified on the window.
inline TrivialityReport verify_infinitesimal_triviality(const FirstOrderCocycle& c, const Window& w,
                                                        const Point& point = {}) {
  TrivialityReport r{c, d2_check(c.base, c.cochain, w), std::nullopt, {}};
  if (!c.degree_shift) {
    r.note = "cochain is not homogeneous; no graded coboundary solve";
    return r;
  }
  r.coboundary = coboundary_solve_adjoint(c.base, c.cochain, {*c.degree_shift, w, Coefficients::Adjoint}, point);
  return r;
}

/// Change of basis V*_n = lambda^(-power n) V_n: the coefficient of the
/// degree n + m + o term is multiplied by lambda^(power o).
inline LieFamily transport(const LieFamily& f, int power, std::optional<std::string> name = std::nullopt) {
  auto move = [&](const std::vector<BracketTerm>& ts) {
    std::vector<BracketTerm> out;
    for (const auto& t : ts) {
      const int e = power * t.offset;
      ParamPolynomial c = t.coeff;
      if (e > 0) {
        c = c * ParamPolynomial::var(Param::lambda, static_cast<std::uint32_t>(e));
      } else if (e < 0) {
        try {
          c = c.divide_by(Monomial::of(Param::lambda, static_cast<std::uint32_t>(-e)));
        } catch (const std::domain_error&) {
          throw KindMismatch("coefficient " + t.coeff.to_string() + " of '" + f.name() +
                             "' is not divisible by lambda^" + std::to_string(-e));
        }
      }
      out.push_back({t.offset, t.slope, t.intercept, std::move(c)});
    }
    return out;
  };
  const auto& r = f.rule();
  return {name.value_or(f.name() + "*"), f.kind(), {move(r.odd_odd), move(r.even_even), move(r.odd_even)},
          f.fd_algebra()};
}

/// The D_s family with e1 = lambda^2 in the basis V*_n = lambda^(-n) V_n.
/// Every lambda must cancel; otherwise the input is not a D_s family.
inline LieFamily rescale_family(const LieFamily& f) {
  if (f.kind() != FamilyKind::VectorField)
    throw KindMismatch("rescaling applies to vector-field families on D_s, not '" + f.name() + "'");
  for (Param p : f.parameters())
    if (p != Param::e1 && p != Param::s)
      throw KindMismatch("'" + f.name() + "' depends on " + std::string(param_name(p)) + "; rescaling needs a D_s family");
  auto sub = specialize(f, Bindings{{Param::e1, ParamPolynomial::var(Param::lambda, 2)}}, f.name() + "[e1=lambda^2]");
  auto out = transport(sub, 1, f.name() + "*");
  if (out.parameters().contains(Param::lambda))
    throw KindMismatch("lambda does not cancel after rescaling '" + f.name() + "'");
  return out;
}

struct CoefficientComparison {
  std::string parity_case;
  int offset = 0;
  ParamPolynomial lhs;
  ParamPolynomial rhs;
  bool equal = false;
};

struct JumpWitness {
  Rational s;
  Window window;
  std::vector<CoefficientComparison> coefficients;
  bool rescaled_equals_unit_fiber = false;
  bool zero_fiber_equals_witt = false;
  std::optional<Rational> j;
  bool exceptional_line = false;

  bool pass() const { return rescaled_equals_unit_fiber && zero_fiber_equals_witt; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json jj;
    jj["check"] = "jump_witness";
    jj["s"] = s.to_string();
    jj["window"] = window.to_json();
    auto table = nlohmann::ordered_json::array();
    for (const auto& c : coefficients)
      table.push_back({{"case", c.parity_case},
                       {"offset", c.offset},
                       {"rescaled", c.lhs.to_string()},
                       {"unit_fiber", c.rhs.to_string()},
                       {"equal", c.equal}});
    jj["coefficients"] = table;
    jj["rescaled_equals_unit_fiber"] = rescaled_equals_unit_fiber;
    jj["zero_fiber_equals_witt"] = zero_fiber_equals_witt;
    if (exceptional_line) jj["geometry"] = "exceptional line: every fiber with e1 != 0 is a nodal cubic";
    else jj["geometry"] = {{"j", j->to_string()}, {"note", "j of every fiber with e1 != 0; the e1 = 0 fiber is the cuspidal cubic"}};
    jj["isomorphism_claim"] = "non-isomorphy of the nonzero fibers to witt is a cited result, not decided here";
    jj["pass"] = pass();
    return jj;
  }
};

/// (a) the lambda-transported D_s family equals its e1 = 1 fiber on the
/// window; (b) its e1 = 0 fiber equals witt on the window.
inline JumpWitness jump_witness(const Rational& s, const Window& w) {
  JumpWitness r;
  r.s = s;
  r.window = w;
  auto ds = specialize(families::genus1_vf_Ds(), Bindings{{Param::s, ParamPolynomial(s)}});
  auto rescaled = rescale_family(ds);
  auto unit = specialize(ds, Bindings{{Param::e1, ParamPolynomial(1)}});

  auto cmp = [&](const char* name, const std::vector<BracketTerm>& a, const std::vector<BracketTerm>& b) {
    std::map<int, std::pair<ParamPolynomial, ParamPolynomial>> by_offset;
    for (const auto& t : a) by_offset[t.offset].first += t.coeff;
    for (const auto& t : b) by_offset[t.offset].second += t.coeff;
    for (auto it = by_offset.rbegin(); it != by_offset.rend(); ++it)
      r.coefficients.push_back({name, it->first, it->second.first, it->second.second,
                                it->second.first == it->second.second});
  };
  cmp("odd_odd", rescaled.rule().odd_odd, unit.rule().odd_odd);
  cmp("even_even", rescaled.rule().even_even, unit.rule().even_even);
  cmp("odd_even", rescaled.rule().odd_even, unit.rule().odd_even);

  r.rescaled_equals_unit_fiber = !compare_on_window(rescaled, unit, w).has_value();
  auto zero = specialize(ds, Bindings{{Param::e1, ParamPolynomial()}});
  r.zero_fiber_equals_witt = !compare_on_window(zero, families::witt(), w).has_value();
  try {
    r.j = j_along_Ds(s);
  } catch (const ExceptionalLine&) {
    r.exceptional_line = true;
  }
  return r;
}

}  // namespace knfam
