#pragma once

#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "knfam/checks.hpp"
#include "knfam/element.hpp"
#include "knfam/family.hpp"
#include "knfam/linear_solve.hpp"

namespace knfam {

/// (1/12)(m^3 - m) if n = -m, else 0.
inline Rational virasoro_cocycle(int n, int m) {
  if (n != -m) return Rational(0);
  long mm = m;
  return Rational(mm * mm * mm - mm, 12);
}

/// Closed form of (1/2 pi i) \oint A_n dA_m on the genus-one curve.
///   n, m even:         -n delta_{m,-n}
///   different parity:  0
///   n, m odd:          -n delta_{m,-n} + 3 e1 (1 - n) delta_{m,2-n}
///                      + (e1 - e2)(2 e1 + e2)(2 - n) delta_{m,4-n}
inline ParamPolynomial current_cocycle_integral(int n, int m) {
  if (is_odd(n) != is_odd(m)) return {};
  ParamPolynomial r;
  if (m == -n) r += ParamPolynomial(-n);
  if (!is_odd(n)) return r;
  const auto e1 = ParamPolynomial::var(Param::e1);
  const auto e2 = ParamPolynomial::var(Param::e2);
  if (m == -n + 2) r += ParamPolynomial(1 - n) * (3 * e1);
  if (m == -n + 4) r += ParamPolynomial(2 - n) * ((e1 - e2) * (2 * e1 + e2));
  return r;
}

/// Scalar 2-cocycle with values in the trivial module: a rule on basis
/// pairs, scaled by a polynomial prefactor p(e1, e2).
struct ScalarCocycle {
  using Rule = std::function<ParamPolynomial(const LieFamily&, const GeneratorId&, const GeneratorId&)>;

  std::string name;
  FamilyKind kind = FamilyKind::VectorField;
  ParamPolynomial prefactor{1};
  Rule rule;

  ParamPolynomial on_basis(const LieFamily& f, const GeneratorId& x, const GeneratorId& y) const {
    if (f.kind() != kind)
      throw KindMismatch("cocycle '" + name + "' does not apply to family '" + f.name() + "'");
    f.check_generator(x);
    f.check_generator(y);
    auto v = rule(f, x, y);
    return v.is_zero() ? v : prefactor * v;
  }

  ScalarCocycle substitute(const Bindings& b) const {
    ScalarCocycle c = *this;
    c.prefactor = prefactor.substitute(b);
    auto inner = rule;
    c.rule = [inner, b](const LieFamily& f, const GeneratorId& x, const GeneratorId& y) {
      return inner(f, x, y).substitute(b);
    };
    return c;
  }
};

namespace cocycles {

inline ScalarCocycle virasoro() {
  return {"virasoro", FamilyKind::VectorField, ParamPolynomial(1),
          [](const LieFamily&, const GeneratorId& x, const GeneratorId& y) {
            return ParamPolynomial(virasoro_cocycle(x.degree, y.degree));
          }};
}

/// gamma(x (x) A_n, y (x) A_m) = p(e1, e2) beta(x, y) (1/2 pi i) \oint A_n dA_m,
/// with beta the Killing form of the family's finite-dimensional algebra.
inline ScalarCocycle current_geometric(ParamPolynomial prefactor = ParamPolynomial(1)) {
  return {"current_geometric", FamilyKind::Current, std::move(prefactor),
          [](const LieFamily& f, const GeneratorId& x, const GeneratorId& y) {
            Rational beta = killing_form(*f.fd_algebra(), *x.fd_index, *y.fd_index);
            if (beta.is_zero()) return ParamPolynomial();
            return ParamPolynomial(beta) * current_cocycle_integral(x.degree, y.degree);
          }};
}

inline ScalarCocycle zero(FamilyKind kind) {
  return {"zero", kind, ParamPolynomial(1),
          [](const LieFamily&, const GeneratorId&, const GeneratorId&) { return ParamPolynomial(); }};
}

inline ScalarCocycle by_name(const std::string& name, ParamPolynomial prefactor = ParamPolynomial(1)) {
  if (name == "virasoro") {
    auto c = virasoro();
    c.prefactor = std::move(prefactor);
    return c;
  }
  if (name == "current_geometric") return current_geometric(std::move(prefactor));
  throw ParseError("unknown cocycle '" + name + "' (expected virasoro or current_geometric)");
}

}  // namespace cocycles

/// Bilinear extension of the cocycle to elements.
inline ParamPolynomial apply_cocycle(const ScalarCocycle& c, const LieFamily& f, const Element& x,
                                     const Element& y) {
  ParamPolynomial r;
  for (const auto& [gx, cx] : x.support())
    for (const auto& [gy, cy] : y.support()) {
      auto v = c.on_basis(f, gx, gy);
      if (!v.is_zero()) r += cx * cy * v;
    }
  return r;
}

/// Base family plus central element t with [x, y]^ = [x, y] + c(x, y) t.
struct CentralExtension {
  LieFamily base;
  ScalarCocycle cocycle;
};

inline CentralExtension extend(const LieFamily& f, const ScalarCocycle& c) {
  if (f.kind() != c.kind)
    throw KindMismatch("cocycle '" + c.name + "' does not apply to family '" + f.name() + "'");
  return {f, c};
}

inline Element bracket(const CentralExtension& ext, const Element& x, const Element& y) {
  auto strip = [](const Element& e) {
    Element r;
    for (const auto& [g, c] : e.support())
      if (g.kind != GeneratorKind::Central) r.add(g, c);
    return r;
  };
  Element xb = strip(x), yb = strip(y);
  Element r = bracket(ext.base, xb, yb);
  r.add(GeneratorId::central(), apply_cocycle(ext.cocycle, ext.base, xb, yb));
  return r;
}

struct ScalarCocycleReport {
  std::string cocycle;
  std::string family;
  Window window;
  std::size_t pairs_checked = 0;
  std::size_t triples_checked = 0;
  bool antisymmetric = true;
  bool closed = true;
  std::vector<GeneratorId> failing;
  ParamPolynomial residual;

  bool pass() const { return antisymmetric && closed; }

  nlohmann::ordered_json to_json(const LieFamily& f) const {
    nlohmann::ordered_json j;
    j["check"] = "scalar_cocycle";
    j["cocycle"] = cocycle;
    j["family"] = family;
    j["window"] = window.to_json();
    j["pairs_checked"] = pairs_checked;
    j["triples_checked"] = triples_checked;
    j["antisymmetric"] = antisymmetric;
    j["closed"] = closed;
    j["pass"] = pass();
    if (!pass()) {
      j["failing"] = labels(f, failing);
      j["residual"] = residual.to_json();
    }
    return j;
  }
};

/// Antisymmetry on window pairs, then
///   d2 psi(x, y, z) = psi([x,y], z) + psi([y,z], x) + psi([z,x], y) = 0
/// on window triples x < y < z. The cocycle rule is defined in every
/// degree, so no triple is skipped.
inline ScalarCocycleReport scalar_cocycle_check(const ScalarCocycle& c, const LieFamily& f,
                                                const Window& w) {
  ScalarCocycleReport r;
  r.cocycle = c.name;
  r.family = f.name();
  r.window = w;
  auto gens = f.basis(w);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i; j < gens.size(); ++j) {
      ++r.pairs_checked;
      auto s = c.on_basis(f, gens[i], gens[j]) + c.on_basis(f, gens[j], gens[i]);
      if (!s.is_zero()) {
        r.antisymmetric = false;
        r.failing = {gens[i], gens[j]};
        r.residual = s;
        return r;
      }
    }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      Element x(gens[i]), y(gens[j]);
      auto xy = bracket(f, x, y);
      for (std::size_t k = j + 1; k < gens.size(); ++k) {
        Element z(gens[k]);
        auto d = apply_cocycle(c, f, xy, z) + apply_cocycle(c, f, bracket(f, y, z), x) +
                 apply_cocycle(c, f, bracket(f, z, x), y);
        ++r.triples_checked;
        if (!d.is_zero()) {
          r.closed = false;
          r.failing = {gens[i], gens[j], gens[k]};
          r.residual = d;
          return r;
        }
      }
    }
  return r;
}

struct ScalarCoboundaryResult {
  std::string cocycle;
  std::string family;
  Window window;
  std::size_t equations = 0;
  std::size_t unknowns = 0;
  std::size_t rank = 0;
  bool solvable = false;
  /// kappa on every generator reached by a window bracket (free values 0).
  std::map<GeneratorId, Rational> kappa;
  /// When unsolvable: multipliers on window pairs whose combination of
  /// equations reads 0 = certificate_value.
  std::vector<std::pair<std::pair<GeneratorId, GeneratorId>, Rational>> certificate;
  Rational certificate_value;

  nlohmann::ordered_json to_json(const LieFamily& f) const {
    nlohmann::ordered_json j;
    j["solve"] = "scalar_coboundary";
    j["cocycle"] = cocycle;
    j["family"] = family;
    j["window"] = window.to_json();
    j["equations"] = equations;
    j["unknowns"] = unknowns;
    j["rank"] = rank;
    j["solvable"] = solvable;
    if (solvable) {
      auto k = nlohmann::ordered_json::array();
      for (const auto& [g, v] : kappa)
        k.push_back({{"generator", g.label(f.fd_names())}, {"degree", g.degree}, {"value", v.to_string()}});
      j["kappa"] = k;
    } else {
      auto cert = nlohmann::ordered_json::array();
      for (const auto& [p, v] : certificate)
        cert.push_back({{"x", p.first.label(f.fd_names())},
                        {"y", p.second.label(f.fd_names())},
                        {"multiplier", v.to_string()}});
      j["certificate"] = cert;
      j["certificate_value"] = certificate_value.to_string();
    }
    return j;
  }
};

/// Solves kappa([x, y]) = psi(x, y) for a linear form kappa over all window
/// pairs x < y, at a rational parameter point.
inline ScalarCoboundaryResult scalar_coboundary_solve(const ScalarCocycle& c, const LieFamily& family,
                                                      const Window& w, const Point& point = {}) {
  ScalarCoboundaryResult r;
  r.cocycle = c.name;
  r.family = family.name();
  r.window = w;
  LieFamily f = bind_fully(family, point);
  ScalarCocycle cc = c.substitute(to_bindings(point));

  auto gens = f.basis(w);
  std::vector<std::pair<GeneratorId, GeneratorId>> pairs;
  std::vector<Element> brackets;
  std::vector<Rational> rhs;
  std::map<GeneratorId, std::size_t> col;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      auto b = basis_bracket(f, gens[i], gens[j]);
      for (const auto& [g, k] : b.support()) col.try_emplace(g, 0);
      pairs.emplace_back(gens[i], gens[j]);
      brackets.push_back(std::move(b));
      rhs.push_back(cc.on_basis(f, gens[i], gens[j]).constant_value());
    }
  std::size_t idx = 0;
  for (auto& [g, k] : col) k = idx++;

  RationalMatrix A(pairs.size(), col.size());
  for (std::size_t row = 0; row < pairs.size(); ++row)
    for (const auto& [g, k] : brackets[row].support()) A(row, col.at(g)) = k.constant_value();

  auto sol = solve(A, rhs);
  r.equations = pairs.size();
  r.unknowns = col.size();
  r.rank = sol.rank;
  r.solvable = sol.consistent;
  if (sol.consistent) {
    for (const auto& [g, k] : col) r.kappa.emplace(g, sol.particular[k]);
  } else {
    for (std::size_t row = 0; row < pairs.size(); ++row)
      if (!sol.certificate[row].is_zero()) r.certificate.emplace_back(pairs[row], sol.certificate[row]);
    r.certificate_value = sol.certificate_value;
  }
  return r;
}

}  // namespace knfam
