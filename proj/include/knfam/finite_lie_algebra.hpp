#pragma once

#include <array>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "knfam/errors.hpp"
#include "knfam/rational.hpp"

namespace knfam {

/// Finite-dimensional Lie algebra given by structure constants
/// [T_a, T_b] = sum_c C^c_{a,b} T_c.
class FiniteLieAlgebra {
public:
  FiniteLieAlgebra() = default;
  FiniteLieAlgebra(std::vector<std::string> basis_names)  // NOLINT
      : names_(std::move(basis_names)), c_(names_.size() * names_.size() * names_.size()) {
    if (names_.empty()) throw std::invalid_argument("a Lie algebra needs a nonempty basis");
  }

  std::size_t dim() const { return names_.size(); }
  const std::vector<std::string>& basis_names() const { return names_; }

  const Rational& constant(std::size_t a, std::size_t b, std::size_t c) const {
    return c_[index(a, b, c)];
  }
  void set_constant(std::size_t a, std::size_t b, std::size_t c, Rational v) {
    c_[index(a, b, c)] = std::move(v);
  }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw ParseError("unknown basis element '" + name + "'");
  }

  /// Reads {dim, basis_names, constants: [{a, b, c, value}]}; a, b, c are
  /// basis indices or names, value a rational string.
  static FiniteLieAlgebra from_json(const nlohmann::json& j) {
    try {
      auto names = j.at("basis_names").get<std::vector<std::string>>();
      if (j.contains("dim") && j.at("dim").get<std::size_t>() != names.size())
        throw ParseError("dim does not match the number of basis names");
      FiniteLieAlgebra g(names);
      auto idx = [&](const nlohmann::json& v) -> std::size_t {
        if (v.is_string()) return g.index_of(v.get<std::string>());
        auto i = v.get<std::size_t>();
        if (i >= g.dim()) throw ParseError("basis index out of range");
        return i;
      };
      for (const auto& e : j.at("constants")) {
        const auto& val = e.at("value");
        Rational v = val.is_string() ? Rational::parse(val.get<std::string>())
                                     : Rational(val.get<long>());
        g.set_constant(idx(e.at("a")), idx(e.at("b")), idx(e.at("c")), v);
      }
      return g;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed Lie algebra file: ") + e.what());
    }
  }

  static FiniteLieAlgebra from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["dim"] = dim();
    j["basis_names"] = names_;
    auto cs = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < dim(); ++a)
      for (std::size_t b = 0; b < dim(); ++b)
        for (std::size_t c = 0; c < dim(); ++c)
          if (!constant(a, b, c).is_zero())
            cs.push_back({{"a", a}, {"b", b}, {"c", c}, {"value", constant(a, b, c).to_string()}});
    j["constants"] = cs;
    return j;
  }

private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t c) const {
    if (a >= dim() || b >= dim() || c >= dim()) throw std::out_of_range("basis index out of range");
    return (a * dim() + b) * dim() + c;
  }

  std::vector<std::string> names_;
  std::vector<Rational> c_;
};

/// sl2 with basis (e, h, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
inline FiniteLieAlgebra sl2() {
  FiniteLieAlgebra g({"e", "h", "f"});
  constexpr std::size_t e = 0, h = 1, f = 2;
  g.set_constant(h, e, e, 2);
  g.set_constant(e, h, e, -2);
  g.set_constant(h, f, f, -2);
  g.set_constant(f, h, f, 2);
  g.set_constant(e, f, h, 1);
  g.set_constant(f, e, h, -1);
  return g;
}

/// Sparse vector over the finite-dimensional basis.
using FdVector = std::map<std::size_t, Rational>;

inline FdVector fd_bracket(const FiniteLieAlgebra& g, std::size_t a, std::size_t b) {
  FdVector out;
  for (std::size_t c = 0; c < g.dim(); ++c)
    if (!g.constant(a, b, c).is_zero()) out.emplace(c, g.constant(a, b, c));
  return out;
}

struct FdValidation {
  bool pass = true;
  /// "antisymmetry" or "jacobi" when failing.
  std::string violation;
  std::vector<std::size_t> indices;
  Rational residual;

  nlohmann::ordered_json to_json(const FiniteLieAlgebra& g) const {
    nlohmann::ordered_json j;
    j["pass"] = pass;
    if (!pass) {
      std::vector<std::string> names;
      for (auto i : indices) names.push_back(g.basis_names()[i]);
      j["violation"] = violation;
      j["indices"] = indices;
      j["basis"] = names;
      j["residual"] = residual.to_string();
    }
    return j;
  }
};

/// Checks C^c_{a,b} + C^c_{b,a} = 0 for all (a,b,c), then the Jacobi sum
/// sum_l (C^l_{a,b} C^m_{l,c} + C^l_{b,c} C^m_{l,a} + C^l_{c,a} C^m_{l,b}) = 0.
inline FdValidation fd_validate(const FiniteLieAlgebra& g) {
  FdValidation r;
  const std::size_t n = g.dim();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        Rational s = g.constant(a, b, c) + g.constant(b, a, c);
        if (!s.is_zero()) return {false, "antisymmetry", {a, b, c}, s};
      }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t m = 0; m < n; ++m) {
          Rational s;
          for (std::size_t l = 0; l < n; ++l)
            s += g.constant(a, b, l) * g.constant(l, c, m) +
                 g.constant(b, c, l) * g.constant(l, a, m) +
                 g.constant(c, a, l) * g.constant(l, b, m);
          if (!s.is_zero()) return {false, "jacobi", {a, b, c, m}, s};
        }
  return r;
}

/// trace(ad(T_a) o ad(T_b)).
inline Rational killing_form(const FiniteLieAlgebra& g, std::size_t a, std::size_t b) {
  Rational tr;
  for (std::size_t c = 0; c < g.dim(); ++c)
    for (std::size_t d = 0; d < g.dim(); ++d) {
      const auto& x = g.constant(b, c, d);
      if (x.is_zero()) continue;
      tr += x * g.constant(a, d, c);
    }
  return tr;
}

}  // namespace knfam
