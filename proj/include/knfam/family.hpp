#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "knfam/element.hpp"
#include "knfam/errors.hpp"
#include "knfam/finite_lie_algebra.hpp"
#include "knfam/param_poly.hpp"

namespace knfam {

enum class FamilyKind { VectorField, Function, Current };

/// One summand of a structure equation: the generator of degree
/// n + m + offset with coefficient (slope * (m - n) + intercept) * coeff.
struct BracketTerm {
  int offset = 0;
  Rational slope;
  Rational intercept;
  ParamPolynomial coeff;

  ParamPolynomial value(int n, int m) const {
    Rational k = slope * Rational(m - n) + intercept;
    if (k.is_zero()) return {};
    return k * coeff;
  }
};

/// The canonical parity cases of a structure equation. The mixed case is
/// stored for n odd, m even only; the mirror is produced by (anti)symmetry.
struct ParityCases {
  std::vector<BracketTerm> odd_odd;
  std::vector<BracketTerm> even_even;
  std::vector<BracketTerm> odd_even;
};

inline bool is_odd(int n) { return (n % 2) != 0; }

/// A family of algebras on the basis {V_n}, {A_n} or {x (x) A_n}, with
/// structure constants polynomial in the deformation parameters.
///
/// VectorField families are Lie brackets (antisymmetric). Function
/// families are commutative products. Current families combine a
/// commutative product rule with the bracket of a finite-dimensional
/// algebra: [x (x) A_n, y (x) A_m] = [x, y] (x) A_n A_m.
class LieFamily {
public:
  LieFamily(std::string name, FamilyKind kind, ParityCases rule,
            std::optional<FiniteLieAlgebra> fd = std::nullopt)
      : name_(std::move(name)), kind_(kind), rule_(std::move(rule)), fd_(std::move(fd)) {
    if ((kind_ == FamilyKind::Current) != fd_.has_value())
      throw std::invalid_argument("a finite-dimensional algebra is required exactly for current families");
  }

  const std::string& name() const { return name_; }
  FamilyKind kind() const { return kind_; }
  const ParityCases& rule() const { return rule_; }
  const std::optional<FiniteLieAlgebra>& fd_algebra() const { return fd_; }
  const std::vector<std::string>* fd_names() const { return fd_ ? &fd_->basis_names() : nullptr; }
  bool antisymmetric() const { return kind_ == FamilyKind::VectorField; }

  GeneratorKind generator_kind() const {
    switch (kind_) {
      case FamilyKind::VectorField: return GeneratorKind::VectorField;
      case FamilyKind::Function: return GeneratorKind::Function;
      case FamilyKind::Current: return GeneratorKind::Current;
    }
    return GeneratorKind::VectorField;
  }

  std::set<Param> parameters() const {
    std::set<Param> out;
    for (const auto* cs : {&rule_.odd_odd, &rule_.even_even, &rule_.odd_even})
      for (const auto& t : *cs) out.merge(t.coeff.params());
    return out;
  }

  /// Basis generators with degree in the window, ordered.
  std::vector<GeneratorId> basis(const Window& w) const {
    std::vector<GeneratorId> out;
    for (int n = w.lo; n <= w.hi; ++n) {
      if (kind_ == FamilyKind::Current) {
        for (std::size_t a = 0; a < fd_->dim(); ++a) out.push_back(GeneratorId::current(a, n));
      } else {
        out.push_back({generator_kind(), n, std::nullopt});
      }
    }
    return out;
  }

  /// Degree/coefficient pairs of the structure equation at (n, m), with
  /// the mirrored parity case resolved.
  std::vector<std::pair<int, ParamPolynomial>> structure(int n, int m) const {
    if (!is_odd(n) && is_odd(m)) {
      auto mirrored = structure(m, n);
      if (antisymmetric())
        for (auto& [d, c] : mirrored) c = -c;
      return mirrored;
    }
    const auto& terms = is_odd(n) ? (is_odd(m) ? rule_.odd_odd : rule_.odd_even) : rule_.even_even;
    std::vector<std::pair<int, ParamPolynomial>> out;
    for (const auto& t : terms) {
      auto v = t.value(n, m);
      if (!v.is_zero()) out.emplace_back(n + m + t.offset, std::move(v));
    }
    return out;
  }

  void check_generator(const GeneratorId& g) const {
    if (g.kind != generator_kind())
      throw KindMismatch(std::string("generator of kind ") + kind_name(g.kind) + " in family '" +
                         name_ + "' expecting " + kind_name(generator_kind()));
    if (kind_ == FamilyKind::Current && *g.fd_index >= fd_->dim())
      throw KindMismatch("finite-dimensional index out of range in family '" + name_ + "'");
  }

private:
  std::string name_;
  FamilyKind kind_;
  ParityCases rule_;
  std::optional<FiniteLieAlgebra> fd_;
};

/// Bracket (or product) of two basis generators.
inline Element basis_bracket(const LieFamily& f, const GeneratorId& x, const GeneratorId& y) {
  f.check_generator(x);
  f.check_generator(y);
  Element out;
  if (f.kind() == FamilyKind::Current) {
    auto xy = fd_bracket(*f.fd_algebra(), *x.fd_index, *y.fd_index);
    if (xy.empty()) return out;
    for (const auto& [deg, c] : f.structure(x.degree, y.degree))
      for (const auto& [idx, k] : xy) out.add(GeneratorId::current(idx, deg), k * c);
    return out;
  }
  if (f.antisymmetric() && x == y) return out;
  for (const auto& [deg, c] : f.structure(x.degree, y.degree))
    out.add({f.generator_kind(), deg, std::nullopt}, c);
  return out;
}

/// Bilinear extension of the basis rule.
inline Element bracket(const LieFamily& f, const Element& x, const Element& y) {
  Element out;
  for (const auto& [gx, cx] : x.support())
    for (const auto& [gy, cy] : y.support()) {
      auto b = basis_bracket(f, gx, gy);
      if (!b.is_zero()) out += (cx * cy) * b;
    }
  return out;
}

namespace families {

namespace detail {

inline ParamPolynomial e1() { return ParamPolynomial::var(Param::e1); }
inline ParamPolynomial e2() { return ParamPolynomial::var(Param::e2); }
inline ParamPolynomial s() { return ParamPolynomial::var(Param::s); }

/// e3 is eliminated through e1 + e2 + e3 = 0.
inline ParamPolynomial e3() { return -(e1() + e2()); }

/// The vector-field structure equations with V_{n+m-2} coefficient a and
/// V_{n+m-4} coefficient b.
inline ParityCases vector_field_cases(const ParamPolynomial& a, const ParamPolynomial& b) {
  ParityCases pc;
  pc.odd_odd = {{0, 1, 0, 1}};
  pc.even_even = {{0, 1, 0, 1}, {-2, 1, 0, a}, {-4, 1, 0, b}};
  pc.odd_even = {{0, 1, 0, 1}, {-2, 1, -1, a}, {-4, 1, -2, b}};
  pc.even_even.erase(std::remove_if(pc.even_even.begin(), pc.even_even.end(),
                                    [](const BracketTerm& t) { return t.coeff.is_zero(); }),
                     pc.even_even.end());
  pc.odd_even.erase(std::remove_if(pc.odd_even.begin(), pc.odd_even.end(),
                                   [](const BracketTerm& t) { return t.coeff.is_zero(); }),
                    pc.odd_even.end());
  return pc;
}

/// Function products: A_n A_m = A_{n+m} unless both odd.
inline ParityCases product_cases(const ParamPolynomial& a, const ParamPolynomial& b) {
  ParityCases pc;
  pc.even_even = {{0, 0, 1, 1}};
  pc.odd_even = {{0, 0, 1, 1}};
  pc.odd_odd = {{0, 0, 1, 1}};
  if (!a.is_zero()) pc.odd_odd.push_back({-2, 0, 1, a});
  if (!b.is_zero()) pc.odd_odd.push_back({-4, 0, 1, b});
  return pc;
}

}  // namespace detail

/// [l_n, l_m] = (m - n) l_{n+m}.
inline LieFamily witt() {
  return {"witt", FamilyKind::VectorField, detail::vector_field_cases({}, {})};
}

/// Genus-one vector field algebra over the (e1, e2) plane; the V_{n+m-4}
/// coefficient is (e1 - e2)(e1 - e3) = (e1 - e2)(2 e1 + e2).
inline LieFamily genus1_vf_2param() {
  using namespace detail;
  return {"genus1_vf_2param", FamilyKind::VectorField,
          vector_field_cases(3 * e1(), (e1() - e2()) * (e1() - e3()))};
}

/// Restriction to the line e2 = s e1, transcribed directly:
/// coefficients 3 e1 and e1^2 (1 - s)(2 + s).
inline LieFamily genus1_vf_Ds() {
  using namespace detail;
  return {"genus1_vf_Ds", FamilyKind::VectorField,
          vector_field_cases(3 * e1(), e1().pow(2) * (1 - s()) * (2 + s()))};
}

/// The curve-C structure equations in their printed form,
/// V_{n+m-4} coefficient 2 e1 (1 - 2 e1)(1 + e1). Kept only to report the
/// discrepancy with the substituted family; see genus1_vf_curveC.
inline LieFamily genus1_vf_curveC_printed() {
  using namespace detail;
  return {"genus1_vf_curveC_printed", FamilyKind::VectorField,
          vector_field_cases(3 * e1(), 2 * e1() * (1 - 2 * e1()) * (1 + e1()))};
}

/// A_n A_m over the genus-one function algebra.
inline LieFamily function_algebra() {
  using namespace detail;
  return {"function_algebra", FamilyKind::Function,
          product_cases(3 * e1(), (e1() - e2()) * (2 * e1() + e2()))};
}

/// g (x) C[z, 1/z]: [x (x) z^n, y (x) z^m] = [x, y] (x) z^{n+m}.
inline LieFamily classical_current(FiniteLieAlgebra g = sl2()) {
  return {"classical_current", FamilyKind::Current, detail::product_cases({}, {}), std::move(g)};
}

inline LieFamily genus1_current(FiniteLieAlgebra g = sl2()) {
  using namespace detail;
  return {"genus1_current", FamilyKind::Current,
          product_cases(3 * e1(), (e1() - e2()) * (2 * e1() + e2())), std::move(g)};
}

}  // namespace families

/// Coefficient-wise substitution. Terms whose coefficient vanishes are dropped.
inline LieFamily specialize(const LieFamily& f, const Bindings& bindings,
                            std::optional<std::string> new_name = std::nullopt) {
  auto sub = [&](const std::vector<BracketTerm>& ts) {
    std::vector<BracketTerm> out;
    for (const auto& t : ts) {
      auto c = t.coeff.substitute(bindings);
      if (!c.is_zero()) out.push_back({t.offset, t.slope, t.intercept, std::move(c)});
    }
    return out;
  };
  ParityCases pc{sub(f.rule().odd_odd), sub(f.rule().even_even), sub(f.rule().odd_even)};
  std::string name;
  if (new_name) {
    name = *new_name;
  } else if (bindings.empty()) {
    name = f.name();
  } else {
    name = f.name() + "[";
    bool first = true;
    for (const auto& [p, v] : bindings) {
      if (!first) name += ",";
      name += std::string(param_name(p)) + "=" + v.to_string();
      first = false;
    }
    name += "]";
  }
  return {name, f.kind(), std::move(pc), f.fd_algebra()};
}

inline LieFamily specialize(const LieFamily& f, const Point& point) {
  return specialize(f, to_bindings(point));
}

namespace families {

/// Restriction to the curve C: e2 = 2 e1^2, obtained by substitution.
inline LieFamily genus1_vf_curveC() {
  return specialize(genus1_vf_2param(),
                    Bindings{{Param::e2, 2 * ParamPolynomial::var(Param::e1).pow(2)}},
                    "genus1_vf_curveC");
}

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n{"witt",          "genus1_vf_2param", "genus1_vf_Ds",
                                          "genus1_vf_curveC", "classical_current",
                                          "genus1_current", "function_algebra"};
  return n;
}

/// Looks up a shipped family; `fd` replaces sl2 for current families.
inline LieFamily by_name(const std::string& name,
                         const std::optional<FiniteLieAlgebra>& fd = std::nullopt) {
  if (name == "witt") return witt();
  if (name == "genus1_vf_2param") return genus1_vf_2param();
  if (name == "genus1_vf_Ds") return genus1_vf_Ds();
  if (name == "genus1_vf_curveC") return genus1_vf_curveC();
  if (name == "genus1_vf_curveC_printed") return genus1_vf_curveC_printed();
  if (name == "function_algebra") return function_algebra();
  if (name == "classical_current") return classical_current(fd.value_or(sl2()));
  if (name == "genus1_current") return genus1_current(fd.value_or(sl2()));
  throw ParseError("unknown family '" + name + "'");
}

}  // namespace families

/// A_n * A_m in the genus-one function algebra.
inline Element function_product(int n, int m) {
  static const LieFamily fa = families::function_algebra();
  return basis_bracket(fa, GeneratorId::function(n), GeneratorId::function(m));
}

/// [x (x) A_n, y (x) A_m] for basis elements x = T_a, y = T_b.
inline Element current_bracket(const LieFamily& f, std::size_t a, int n, std::size_t b, int m) {
  if (f.kind() != FamilyKind::Current)
    throw KindMismatch("current_bracket needs a current family, got '" + f.name() + "'");
  return basis_bracket(f, GeneratorId::current(a, n), GeneratorId::current(b, m));
}

}  // namespace knfam
