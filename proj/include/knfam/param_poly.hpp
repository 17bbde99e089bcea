#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "knfam/errors.hpp"
#include "knfam/rational.hpp"

namespace knfam {

/// The closed set of parameter names. `lambda` is the square root of e1
/// used by the rescaling isomorphism (e1 = lambda^2).
enum class Param : std::uint8_t { e1 = 0, e2 = 1, s = 2, lambda = 3 };

inline constexpr std::size_t kParamCount = 4;
inline constexpr std::array<Param, kParamCount> kAllParams{Param::e1, Param::e2, Param::s,
                                                            Param::lambda};

inline std::string_view param_name(Param p) {
  switch (p) {
    case Param::e1: return "e1";
    case Param::e2: return "e2";
    case Param::s: return "s";
    case Param::lambda: return "lambda";
  }
  return "?";
}

inline Param param_from_name(std::string_view name) {
  for (Param p : kAllParams)
    if (param_name(p) == name) return p;
  throw UnknownParameter("unknown parameter '" + std::string(name) +
                         "' (expected one of e1, e2, s, lambda)");
}

/// Exponent vector indexed by Param. Absent parameters have exponent 0,
/// which makes the key canonical without storing zero exponents by name.
struct Monomial {
  std::array<std::uint32_t, kParamCount> exp{};

  static Monomial of(Param p, std::uint32_t e = 1) {
    Monomial m;
    m.exp[static_cast<std::size_t>(p)] = e;
    return m;
  }
  std::uint32_t operator[](Param p) const { return exp[static_cast<std::size_t>(p)]; }
  std::uint32_t& operator[](Param p) { return exp[static_cast<std::size_t>(p)]; }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (auto e : exp) d += e;
    return d;
  }
  bool is_one() const { return total_degree() == 0; }
  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < kParamCount; ++i)
      if (exp[i] > o.exp[i]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kParamCount; ++i) r.exp[i] = a.exp[i] + b.exp[i];
    return r;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded-lexicographic order: total degree first, then lexicographic in
/// e1 > e2 > s > lambda.
struct GrLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    auto da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    return a.exp < b.exp;
  }
};

/// Sparse polynomial with rational coefficients in the fixed parameter set.
///
/// Canonical form: no zero coefficient is ever stored, so two polynomials
/// are equal exactly when their term maps are equal.
class ParamPolynomial {
public:
  using TermMap = std::map<Monomial, Rational, GrLexLess>;

  ParamPolynomial() = default;
  ParamPolynomial(const Rational& c) { add_term(Monomial{}, c); }  // NOLINT
  ParamPolynomial(long c) : ParamPolynomial(Rational(c)) {}        // NOLINT
  ParamPolynomial(int c) : ParamPolynomial(Rational(c)) {}         // NOLINT

  static ParamPolynomial var(Param p, std::uint32_t e = 1) {
    ParamPolynomial r;
    r.add_term(Monomial::of(p, e), Rational(1));
    return r;
  }
  static ParamPolynomial term(const Monomial& m, const Rational& c) {
    ParamPolynomial r;
    r.add_term(m, c);
    return r;
  }
  static ParamPolynomial parse(std::string_view text);

  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }
  /// Value of a constant polynomial; throws UnboundParameter otherwise.
  Rational constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant())
      throw UnboundParameter("polynomial '" + to_string() + "' is not a constant");
    return terms_.begin()->second;
  }
  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::set<Param> params() const {
    std::set<Param> out;
    for (const auto& [m, c] : terms_)
      for (Param p : kAllParams)
        if (m[p] > 0) out.insert(p);
    return out;
  }
  std::uint32_t degree_in(Param p) const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[p]);
    return d;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  ParamPolynomial operator-() const {
    ParamPolynomial r;
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
    return r;
  }
  ParamPolynomial& operator+=(const ParamPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  ParamPolynomial& operator-=(const ParamPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  ParamPolynomial& operator*=(const ParamPolynomial& o) { return *this = *this * o; }

  friend ParamPolynomial operator+(ParamPolynomial a, const ParamPolynomial& b) { return a += b; }
  friend ParamPolynomial operator-(ParamPolynomial a, const ParamPolynomial& b) { return a -= b; }
  friend ParamPolynomial operator*(const ParamPolynomial& a, const ParamPolynomial& b) {
    ParamPolynomial r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  friend bool operator==(const ParamPolynomial& a, const ParamPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  ParamPolynomial pow(unsigned e) const {
    ParamPolynomial r(1), base = *this;
    while (e) {
      if (e & 1U) r *= base;
      e >>= 1U;
      if (e) base *= base;
    }
    return r;
  }

  /// Part of the polynomial with exponent exactly k in p, with p removed.
  ParamPolynomial coefficient_of(Param p, std::uint32_t k) const {
    ParamPolynomial r;
    for (const auto& [m, c] : terms_) {
      if (m[p] != k) continue;
      Monomial mm = m;
      mm[p] = 0;
      r.add_term(mm, c);
    }
    return r;
  }

  /// Formal partial derivative.
  ParamPolynomial derivative(Param p) const {
    ParamPolynomial r;
    for (const auto& [m, c] : terms_) {
      if (m[p] == 0) continue;
      Monomial mm = m;
      mm[p] -= 1;
      r.add_term(mm, c * Rational(static_cast<long>(m[p])));
    }
    return r;
  }

  /// Exact division by a monomial; throws std::domain_error if some term
  /// is not divisible.
  ParamPolynomial divide_by(const Monomial& d) const {
    ParamPolynomial r;
    for (const auto& [m, c] : terms_) {
      if (!d.divides(m))
        throw std::domain_error("polynomial '" + to_string() + "' not divisible by monomial");
      Monomial mm = m;
      for (std::size_t i = 0; i < kParamCount; ++i) mm.exp[i] -= d.exp[i];
      r.add_term(mm, c);
    }
    return r;
  }

  /// Simultaneous substitution of the bound parameters.
  ParamPolynomial substitute(const std::map<Param, ParamPolynomial>& bindings) const {
    if (bindings.empty()) return *this;
    // powers are reused across terms
    std::map<std::pair<Param, std::uint32_t>, ParamPolynomial> cache;
    auto power = [&](Param p, std::uint32_t e) -> const ParamPolynomial& {
      auto key = std::make_pair(p, e);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, bindings.at(p).pow(e)).first;
      return it->second;
    };
    ParamPolynomial r;
    for (const auto& [m, c] : terms_) {
      Monomial kept = m;
      ParamPolynomial t = ParamPolynomial::term(Monomial{}, c);
      for (Param p : kAllParams) {
        if (m[p] == 0 || !bindings.contains(p)) continue;
        kept[p] = 0;
        t *= power(p, m[p]);
      }
      if (!kept.is_one()) t *= ParamPolynomial::term(kept, Rational(1));
      r += t;
    }
    return r;
  }

  /// Exact value at a rational point; every occurring parameter must be bound.
  Rational eval(const std::map<Param, Rational>& point) const {
    Rational total;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (Param p : kAllParams) {
        if (m[p] == 0) continue;
        auto it = point.find(p);
        if (it == point.end())
          throw UnboundParameter("parameter '" + std::string(param_name(p)) + "' is unbound");
        t *= it->second.pow(m[p]);
      }
      total += t;
    }
    return total;
  }

  /// Human-readable form, leading (grlex-largest) term first.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      Rational a = c;
      if (first) {
        if (a.sign() < 0) out += "-";
      } else {
        out += a.sign() < 0 ? " - " : " + ";
      }
      if (a.sign() < 0) a = -a;
      std::string mono;
      for (Param p : kAllParams) {
        if (m[p] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += param_name(p);
        if (m[p] > 1) mono += "^" + std::to_string(m[p]);
      }
      if (mono.empty()) {
        out += a.to_string();
      } else {
        if (!a.is_one()) out += a.to_string() + "*";
        out += mono;
      }
      first = false;
    }
    return out;
  }

  /// List of {monomial: {name: exponent}, coeff: "p/q"}, leading term first.
  nlohmann::ordered_json to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      nlohmann::ordered_json mono = nlohmann::ordered_json::object();
      for (Param p : kAllParams)
        if (it->first[p] > 0) mono[std::string(param_name(p))] = it->first[p];
      arr.push_back({{"monomial", mono}, {"coeff", it->second.to_string()}});
    }
    return arr;
  }

  static ParamPolynomial from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("polynomial JSON must be an array of terms");
    ParamPolynomial r;
    for (const auto& t : j) {
      if (!t.is_object() || !t.contains("monomial") || !t.contains("coeff"))
        throw ParseError("polynomial term needs 'monomial' and 'coeff'");
      Monomial m;
      for (const auto& [name, e] : t.at("monomial").items()) {
        if (!e.is_number_unsigned()) throw ParseError("exponent must be a nonnegative integer");
        m[param_from_name(name)] = e.get<std::uint32_t>();
      }
      r.add_term(m, Rational::parse(t.at("coeff").get<std::string>()));
    }
    return r;
  }

private:
  TermMap terms_;
};

namespace detail {

// Recursive-descent parser for expressions such as "e1^2*(1-s)*(2+s) - 3/2*e2".
class PolyParser {
public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  ParamPolynomial parse_all() {
    auto p = sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("cannot parse polynomial '" + std::string(s_) + "': " + why + " at offset " +
                     std::to_string(pos_));
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  ParamPolynomial sum() {
    ParamPolynomial acc;
    bool neg = false;
    skip_ws();
    if (eat('-')) neg = true;
    else eat('+');
    acc = neg ? -product() : product();
    while (true) {
      if (eat('+')) acc += product();
      else if (eat('-')) acc -= product();
      else break;
    }
    return acc;
  }
  ParamPolynomial product() {
    ParamPolynomial acc = power();
    while (eat('*')) acc = acc * power();
    return acc;
  }
  ParamPolynomial power() {
    ParamPolynomial base = atom();
    if (eat('^')) {
      skip_ws();
      auto d = digits();
      if (d.empty()) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(d)));
    }
    return base;
  }
  ParamPolynomial atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto p = sum();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      std::string den = "1";
      skip_ws();
      // "p/q" is a rational literal only when q follows directly.
      if (pos_ + 1 < s_.size() && s_[pos_] == '/' &&
          std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        ++pos_;
        den = digits();
      }
      return ParamPolynomial(Rational::parse(num + "/" + den));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t b = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return ParamPolynomial::var(param_from_name(s_.substr(b, pos_ - b)));
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ParamPolynomial ParamPolynomial::parse(std::string_view text) {
  return detail::PolyParser(text).parse_all();
}

using Bindings = std::map<Param, ParamPolynomial>;
using Point = std::map<Param, Rational>;

inline Bindings to_bindings(const Point& pt) {
  Bindings b;
  for (const auto& [p, v] : pt) b.emplace(p, ParamPolynomial(v));
  return b;
}

/// Parses "name=value" where value is a polynomial expression.
inline std::pair<Param, ParamPolynomial> parse_binding(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ParseError("binding '" + std::string(text) + "' must have the form name=value");
  std::string name(text.substr(0, eq));
  while (!name.empty() && name.back() == ' ') name.pop_back();
  while (!name.empty() && name.front() == ' ') name.erase(name.begin());
  return {param_from_name(name), ParamPolynomial::parse(text.substr(eq + 1))};
}

inline nlohmann::ordered_json bindings_to_json(const Bindings& b) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [p, v] : b) j[std::string(param_name(p))] = v.to_string();
  return j;
}

}  // namespace knfam
