#pragma once

#include <compare>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knfam/errors.hpp"
#include "knfam/param_poly.hpp"

namespace knfam {

enum class GeneratorKind { VectorField, Function, Current, Central };

inline const char* kind_name(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::VectorField: return "VectorField";
    case GeneratorKind::Function: return "Function";
    case GeneratorKind::Current: return "Current";
    case GeneratorKind::Central: return "Central";
  }
  return "?";
}

/// A graded basis symbol: V_n, A_n, x (x) A_n with x an index into a
/// finite-dimensional basis, or the central element t.
struct GeneratorId {
  GeneratorKind kind = GeneratorKind::VectorField;
  int degree = 0;
  std::optional<std::size_t> fd_index;

  static GeneratorId vector_field(int n) { return {GeneratorKind::VectorField, n, std::nullopt}; }
  static GeneratorId function(int n) { return {GeneratorKind::Function, n, std::nullopt}; }
  static GeneratorId current(std::size_t a, int n) { return {GeneratorKind::Current, n, a}; }
  static GeneratorId central() { return {GeneratorKind::Central, 0, std::nullopt}; }

  bool valid() const {
    if (fd_index.has_value() != (kind == GeneratorKind::Current)) return false;
    return kind != GeneratorKind::Central || degree == 0;
  }

  /// Order: kind, then degree, then finite-dimensional index.
  friend auto operator<=>(const GeneratorId& a, const GeneratorId& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.degree <=> b.degree; c != 0) return c;
    return a.fd_index.value_or(0) <=> b.fd_index.value_or(0);
  }
  friend bool operator==(const GeneratorId&, const GeneratorId&) = default;

  /// "V3", "A-2", "t", or "<name>(x)A3" for currents.
  std::string label(const std::vector<std::string>* fd_names = nullptr) const {
    switch (kind) {
      case GeneratorKind::VectorField: return "V" + std::to_string(degree);
      case GeneratorKind::Function: return "A" + std::to_string(degree);
      case GeneratorKind::Central: return "t";
      case GeneratorKind::Current: {
        std::string x = (fd_names && *fd_index < fd_names->size()) ? (*fd_names)[*fd_index]
                                                                   : "T" + std::to_string(*fd_index);
        return x + "(x)A" + std::to_string(degree);
      }
    }
    return "?";
  }
};

/// Finite index range [lo, hi] of degrees.
struct Window {
  int lo = 0;
  int hi = 0;

  Window() = default;
  Window(int l, int h) : lo(l), hi(h) {
    if (lo > hi) throw std::invalid_argument("window requires lo <= hi");
  }
  bool contains(int n) const { return lo <= n && n <= hi; }
  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
  nlohmann::ordered_json to_json() const { return nlohmann::ordered_json::array({lo, hi}); }
};

/// Finite linear combination of generators with polynomial coefficients.
class Element {
public:
  using Support = std::map<GeneratorId, ParamPolynomial>;

  Element() = default;
  explicit Element(const GeneratorId& g, ParamPolynomial c = ParamPolynomial(1)) { add(g, c); }

  const Support& support() const& { return support_; }
  Support support() && { return std::move(support_); }
  bool is_zero() const { return support_.empty(); }
  std::size_t size() const { return support_.size(); }

  ParamPolynomial coefficient(const GeneratorId& g) const {
    auto it = support_.find(g);
    return it == support_.end() ? ParamPolynomial() : it->second;
  }

  void add(const GeneratorId& g, const ParamPolynomial& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = support_.try_emplace(g, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) support_.erase(it);
    }
  }

  Element& operator+=(const Element& o) {
    for (const auto& [g, c] : o.support_) add(g, c);
    return *this;
  }
  Element& operator-=(const Element& o) {
    for (const auto& [g, c] : o.support_) add(g, -c);
    return *this;
  }
  Element operator-() const {
    Element r;
    for (const auto& [g, c] : support_) r.support_.emplace(g, -c);
    return r;
  }
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const ParamPolynomial& s, const Element& x) {
    Element r;
    if (s.is_zero()) return r;
    for (const auto& [g, c] : x.support_) r.add(g, s * c);
    return r;
  }
  friend bool operator==(const Element&, const Element&) = default;

  Element substitute(const Bindings& b) const {
    Element r;
    for (const auto& [g, c] : support_) r.add(g, c.substitute(b));
    return r;
  }

  std::string to_string(const std::vector<std::string>* fd_names = nullptr) const {
    if (support_.empty()) return "0";
    std::string out;
    for (auto it = support_.rbegin(); it != support_.rend(); ++it) {
      const auto& c = it->second;
      std::string cs = c.to_string();
      bool negative = false;
      if (c.size() > 1) {
        cs = "(" + cs + ")";
      } else if (cs.front() == '-') {
        negative = true;
        cs.erase(0, 1);
      }
      if (out.empty()) out = negative ? "-" : "";
      else out += negative ? " - " : " + ";
      out += (cs == "1" ? "" : cs + "*") + it->first.label(fd_names);
    }
    return out;
  }

  /// Map generator label -> coefficient polynomial (exactnum schema).
  nlohmann::ordered_json to_json(const std::vector<std::string>* fd_names = nullptr) const {
    auto arr = nlohmann::ordered_json::array();
    for (auto it = support_.rbegin(); it != support_.rend(); ++it)
      arr.push_back({{"generator", it->first.label(fd_names)}, {"coeff", it->second.to_json()}});
    return arr;
  }

private:
  Support support_;
};

/// Linear combination sum_i c_i * x_i, canonicalized.
inline Element element_combine(const std::vector<std::pair<ParamPolynomial, Element>>& xs) {
  Element r;
  for (const auto& [c, x] : xs) r += c * x;
  return r;
}

inline Element basis(const GeneratorId& g) { return Element(g); }

}  // namespace knfam
