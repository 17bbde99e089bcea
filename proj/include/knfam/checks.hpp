#pragma once

#include <algorithm>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "knfam/element.hpp"
#include "knfam/family.hpp"

namespace knfam {

/// Binds every parameter of f to a rational value; leftover parameters
/// raise UnboundParameter.
inline LieFamily bind_fully(const LieFamily& f, const Point& point) {
  auto g = specialize(f, point);
  auto left = g.parameters();
  if (!left.empty())
    throw UnboundParameter("family '" + f.name() + "' has unbound parameter '" +
                           std::string(param_name(*left.begin())) + "'");
  return g;
}

inline nlohmann::ordered_json labels(const LieFamily& f, const std::vector<GeneratorId>& gs) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& g : gs) a.push_back(g.label(f.fd_names()));
  return a;
}

struct JacobiReport {
  std::string family;
  Window window;
  bool symbolic = true;
  Point point;
  std::size_t triples_checked = 0;
  bool pass = true;
  std::vector<GeneratorId> failing_triple;
  Element residual;

  nlohmann::ordered_json to_json(const LieFamily& f) const {
    nlohmann::ordered_json j;
    j["check"] = "jacobi";
    j["family"] = family;
    j["window"] = window.to_json();
    j["mode"] = symbolic ? "symbolic" : "at-point";
    if (!symbolic) j["point"] = bindings_to_json(to_bindings(point));
    j["triples_checked"] = triples_checked;
    j["pass"] = pass;
    if (!pass) {
      j["failing_triple"] = labels(f, failing_triple);
      j["residual"] = residual.to_json(f.fd_names());
    }
    return j;
  }
};

/// J(x,y,z) = [[x,y],z] + [[y,z],x] + [[z,x],y] over all basis triples
/// x < y < z of the window. Jacobi is alternating for an antisymmetric
/// bracket, so strictly increasing triples cover every case.
inline JacobiReport jacobi_check(const LieFamily& family, const Window& w,
                                 const std::optional<Point>& at_point = std::nullopt) {
  if (!family.antisymmetric() && family.kind() != FamilyKind::Current)
    throw KindMismatch("'" + family.name() + "' is a commutative product; use the associativity check");
  JacobiReport r;
  r.family = family.name();
  r.window = w;
  r.symbolic = !at_point.has_value();
  LieFamily f = at_point ? bind_fully(family, *at_point) : family;
  if (at_point) r.point = *at_point;
  auto gens = f.basis(w);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      Element x(gens[i]), y(gens[j]);
      auto xy = bracket(f, x, y);
      for (std::size_t k = j + 1; k < gens.size(); ++k) {
        Element z(gens[k]);
        Element jac = bracket(f, xy, z);
        jac += bracket(f, bracket(f, y, z), x);
        jac += bracket(f, bracket(f, z, x), y);
        ++r.triples_checked;
        if (!jac.is_zero()) {
          r.pass = false;
          r.failing_triple = {gens[i], gens[j], gens[k]};
          r.residual = std::move(jac);
          return r;
        }
      }
    }
  return r;
}

struct AssociativityReport {
  std::string family;
  Window window;
  std::size_t triples_checked = 0;
  bool pass = true;
  std::vector<GeneratorId> failing_triple;
  Element residual;

  nlohmann::ordered_json to_json(const LieFamily& f) const {
    nlohmann::ordered_json j;
    j["check"] = "associativity";
    j["family"] = family;
    j["window"] = window.to_json();
    j["triples_checked"] = triples_checked;
    j["pass"] = pass;
    if (!pass) {
      j["failing_triple"] = labels(f, failing_triple);
      j["residual"] = residual.to_json();
    }
    return j;
  }
};

/// (A_a A_b) A_c - A_a (A_b A_c) = 0 for all ordered triples in the window.
inline AssociativityReport associativity_check(const LieFamily& f, const Window& w) {
  if (f.kind() != FamilyKind::Function)
    throw KindMismatch("associativity is checked on function algebras, not '" + f.name() + "'");
  AssociativityReport r;
  r.family = f.name();
  r.window = w;
  for (int a = w.lo; a <= w.hi; ++a)
    for (int b = w.lo; b <= w.hi; ++b)
      for (int c = w.lo; c <= w.hi; ++c) {
        Element x(GeneratorId::function(a)), y(GeneratorId::function(b)), z(GeneratorId::function(c));
        Element res = bracket(f, bracket(f, x, y), z) - bracket(f, x, bracket(f, y, z));
        ++r.triples_checked;
        if (!res.is_zero()) {
          r.pass = false;
          r.failing_triple = {x.support().begin()->first, y.support().begin()->first,
                              z.support().begin()->first};
          r.residual = std::move(res);
          return r;
        }
      }
  return r;
}

struct TableRow {
  GeneratorId x;
  GeneratorId y;
  Element value;
};

struct StructureTable {
  std::string family;
  Window window;
  std::vector<TableRow> rows;
  std::optional<std::vector<std::string>> fd_basis;

  const std::vector<std::string>* fd_names() const { return fd_basis ? &*fd_basis : nullptr; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["family"] = family;
    j["window"] = window.to_json();
    auto rs = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json e;
      e["x"] = row.x.label(fd_names());
      e["n"] = row.x.degree;
      e["y"] = row.y.label(fd_names());
      e["m"] = row.y.degree;
      e["value"] = row.value.to_json(fd_names());
      rs.push_back(e);
    }
    j["rows"] = rs;
    return j;
  }

  /// Columns n,m,generator,coefficient; current families prefix the
  /// finite-dimensional factors as columns x,y.
  std::string to_csv() const {
    std::ostringstream out;
    const auto* names = fd_names();
    const bool current = names != nullptr;
    out << (current ? "x,n,y,m,generator,coefficient\n" : "n,m,generator,coefficient\n");
    for (const auto& row : rows)
      for (auto it = row.value.support().rbegin(); it != row.value.support().rend(); ++it) {
        if (current)
          out << (*names)[*row.x.fd_index] << ',' << row.x.degree << ','
              << (*names)[*row.y.fd_index] << ',' << row.y.degree << ',';
        else
          out << row.x.degree << ',' << row.y.degree << ',';
        out << it->first.label(names) << ",\"" << it->second.to_string() << "\"\n";
      }
    return out.str();
  }
};

/// All brackets x < y of window basis elements (including x = y for
/// commutative products).
inline StructureTable structure_table(const LieFamily& f, const Window& w) {
  StructureTable t;
  t.family = f.name();
  t.window = w;
  if (f.fd_names()) t.fd_basis = *f.fd_names();
  auto gens = f.basis(w);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = f.antisymmetric() ? i + 1 : i; j < gens.size(); ++j)
      t.rows.push_back({gens[i], gens[j], basis_bracket(f, gens[i], gens[j])});
  return t;
}

struct GradingBounds {
  int R = 0;
  int S = 0;
};

/// Smallest R and largest S with every window product landing in degrees
/// [n + m + R, n + m + S]. Returns (0, 0) if every product vanishes.
inline GradingBounds almost_grading_bounds(const LieFamily& f, const Window& w) {
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  auto gens = f.basis(w);
  for (const auto& x : gens)
    for (const auto& y : gens)
      for (const auto& [g, c] : basis_bracket(f, x, y).support()) {
        int off = g.degree - x.degree - y.degree;
        lo = std::min(lo, off);
        hi = std::max(hi, off);
      }
  if (lo > hi) return {0, 0};
  return {lo, hi};
}

struct FamilyMismatch {
  GeneratorId x;
  GeneratorId y;
  Element lhs;
  Element rhs;
};

/// First window pair on which two families' brackets differ.
inline std::optional<FamilyMismatch> compare_on_window(const LieFamily& a, const LieFamily& b,
                                                       const Window& w) {
  if (a.kind() != b.kind()) throw KindMismatch("cannot compare families of different kinds");
  auto gens = a.basis(w);
  if (gens != b.basis(w)) throw KindMismatch("families have different bases on the window");
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i; j < gens.size(); ++j) {
      auto l = basis_bracket(a, gens[i], gens[j]);
      auto r = basis_bracket(b, gens[i], gens[j]);
      if (l != r) return FamilyMismatch{gens[i], gens[j], l, r};
    }
  return std::nullopt;
}

}  // namespace knfam
