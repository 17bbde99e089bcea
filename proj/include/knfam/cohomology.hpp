#pragma once

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

using GeneratorPair = std::pair<GeneratorId, GeneratorId>;

/// Linear map psi: L -> L given on the basis elements of a window.
/// Basis elements of the window without an entry map to zero.
class OneCochain {
public:
  OneCochain() = default;
  explicit OneCochain(Window w) : window_(w) {}

  const Window& window() const { return window_; }
  const std::map<GeneratorId, Element>& values() const { return values_; }
  bool defined(const GeneratorId& g) const { return window_.contains(g.degree); }

  Element at(const GeneratorId& g) const {
    if (!defined(g))
      throw OutOfWindow("one-cochain needs " + g.label() + " outside window [" +
                        std::to_string(window_.lo) + "," + std::to_string(window_.hi) + "]");
    auto it = values_.find(g);
    return it == values_.end() ? Element() : it->second;
  }
  void set(const GeneratorId& g, Element v) {
    if (!defined(g)) throw OutOfWindow("cannot set " + g.label() + " outside the cochain window");
    if (v.is_zero()) values_.erase(g);
    else values_[g] = std::move(v);
  }

  nlohmann::ordered_json to_json(const std::vector<std::string>* fd_names = nullptr) const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [g, v] : values_)
      arr.push_back({{"generator", g.label(fd_names)}, {"value", v.to_json(fd_names)}});
    return arr;
  }

private:
  Window window_;
  std::map<GeneratorId, Element> values_;
};

/// Antisymmetric bilinear map phi: L x L -> L on window pairs. Only x < y
/// is stored. An optional domain restricts which window pairs are known;
/// pairs outside it are undefined rather than zero.
class TwoCochain {
public:
  TwoCochain() = default;
  explicit TwoCochain(Window w) : window_(w) {}

  const Window& window() const { return window_; }
  const std::map<GeneratorPair, Element>& values() const { return values_; }
  const std::optional<std::set<GeneratorPair>>& domain() const { return domain_; }
  void restrict_domain(std::set<GeneratorPair> d) { domain_ = std::move(d); }

  bool defined(const GeneratorId& x, const GeneratorId& y) const {
    if (x == y) return true;
    if (!window_.contains(x.degree) || !window_.contains(y.degree)) return false;
    return !domain_ || domain_->contains(ordered(x, y));
  }

  Element at(const GeneratorId& x, const GeneratorId& y) const {
    if (x == y) return {};
    if (!defined(x, y))
      throw OutOfWindow("two-cochain undefined on (" + x.label() + ", " + y.label() + ")");
    auto it = values_.find(ordered(x, y));
    if (it == values_.end()) return {};
    return x < y ? it->second : -it->second;
  }

  void set(const GeneratorId& x, const GeneratorId& y, const Element& v) {
    if (x == y) {
      if (!v.is_zero()) throw std::invalid_argument("an antisymmetric cochain vanishes on the diagonal");
      return;
    }
    if (!window_.contains(x.degree) || !window_.contains(y.degree))
      throw OutOfWindow("cannot set (" + x.label() + ", " + y.label() + ") outside the cochain window");
    auto key = ordered(x, y);
    Element val = x < y ? v : -v;
    if (val.is_zero()) values_.erase(key);
    else values_[key] = std::move(val);
  }

  TwoCochain substitute(const Bindings& b) const {
    TwoCochain r = *this;
    for (auto& [k, v] : r.values_) v = v.substitute(b);
    std::erase_if(r.values_, [](const auto& kv) { return kv.second.is_zero(); });
    return r;
  }

  nlohmann::ordered_json to_json(const std::vector<std::string>* fd_names = nullptr) const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [k, v] : values_)
      arr.push_back({{"x", k.first.label(fd_names)}, {"y", k.second.label(fd_names)}, {"value", v.to_json(fd_names)}});
    return arr;
  }

  static GeneratorPair ordered(const GeneratorId& x, const GeneratorId& y) {
    return x < y ? GeneratorPair{x, y} : GeneratorPair{y, x};
  }

private:
  Window window_;
  std::map<GeneratorPair, Element> values_;
  std::optional<std::set<GeneratorPair>> domain_;
};

/// Which module the cochains take values in.
enum class Coefficients { Adjoint, Trivial };

/// Homogeneous cochains of degree d: phi(x, y) has degree
/// deg x + deg y + d, psi(x) has degree deg x + d.
struct GradedCochainSpec {
  int degree_shift = 0;
  Window window;
  Coefficients coefficients = Coefficients::Adjoint;
};

namespace detail {

// psi([x,y]) - [x, psi(y)] + [y, psi(x)] as a list of terms
// coeff * psi(arg) or coeff * [outer, psi(arg)].
struct D1Term {
  GeneratorId arg;
  ParamPolynomial coeff;
  std::optional<GeneratorId> outer;
};

inline std::vector<D1Term> d1_terms(const LieFamily& f, const GeneratorId& x, const GeneratorId& y) {
  std::vector<D1Term> t;
  for (const auto& [h, c] : basis_bracket(f, x, y).support()) t.push_back({h, c, std::nullopt});
  t.push_back({y, ParamPolynomial(-1), x});
  t.push_back({x, ParamPolynomial(1), y});
  return t;
}

// phi([x,y],z) + phi([y,z],x) + phi([z,x],y)
//   - [x, phi(y,z)] - [y, phi(z,x)] - [z, phi(x,y)]
// as terms coeff * phi(a, b) or coeff * [outer, phi(a, b)].
struct D2Term {
  GeneratorId a;
  GeneratorId b;
  ParamPolynomial coeff;
  std::optional<GeneratorId> outer;
};

inline std::vector<D2Term> d2_terms(const LieFamily& f, const GeneratorId& x, const GeneratorId& y,
                                    const GeneratorId& z, bool with_action = true) {
  std::vector<D2Term> t;
  for (const auto& [h, c] : basis_bracket(f, x, y).support()) t.push_back({h, z, c, std::nullopt});
  for (const auto& [h, c] : basis_bracket(f, y, z).support()) t.push_back({h, x, c, std::nullopt});
  for (const auto& [h, c] : basis_bracket(f, z, x).support()) t.push_back({h, y, c, std::nullopt});
  if (with_action) {
    t.push_back({y, z, ParamPolynomial(-1), x});
    t.push_back({z, x, ParamPolynomial(-1), y});
    t.push_back({x, y, ParamPolynomial(-1), z});
  }
  return t;
}

}  // namespace detail

/// (d1 psi)(x, y) = psi([x,y]) - [x, psi(y)] + [y, psi(x)].
inline Element d1(const LieFamily& f, const OneCochain& psi, const GeneratorId& x, const GeneratorId& y) {
  Element r;
  for (const auto& t : detail::d1_terms(f, x, y)) {
    Element v = psi.at(t.arg);
    if (v.is_zero()) continue;
    r += t.outer ? t.coeff * bracket(f, Element(*t.outer), v) : t.coeff * v;
  }
  return r;
}

inline bool d1_evaluable(const LieFamily& f, const OneCochain& psi, const GeneratorId& x,
                         const GeneratorId& y) {
  for (const auto& t : detail::d1_terms(f, x, y))
    if (!psi.defined(t.arg)) return false;
  return true;
}

/// d1 psi on every window pair whose evaluation stays inside psi's window;
/// the result's domain is exactly those pairs.
inline TwoCochain coboundary_of(const LieFamily& f, const OneCochain& psi, const Window& w) {
  TwoCochain phi(w);
  std::set<GeneratorPair> dom;
  auto gens = f.basis(w);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!d1_evaluable(f, psi, gens[i], gens[j])) continue;
      dom.insert({gens[i], gens[j]});
      phi.set(gens[i], gens[j], d1(f, psi, gens[i], gens[j]));
    }
  phi.restrict_domain(std::move(dom));
  return phi;
}

struct D2Report {
  std::string family;
  Window window;
  std::size_t triples_checked = 0;
  std::size_t triples_skipped = 0;
  bool pass = true;
  std::vector<GeneratorId> failing_triple;
  Element residual;

  nlohmann::ordered_json to_json(const LieFamily& f) const {
    nlohmann::ordered_json j;
    j["check"] = "d2";
    j["family"] = family;
    j["window"] = window.to_json();
    j["triples_checked"] = triples_checked;
    j["triples_skipped"] = triples_skipped;
    j["pass"] = pass;
    if (!pass) {
      j["failing_triple"] = labels(f, failing_triple);
      j["residual"] = residual.to_json(f.fd_names());
    }
    return j;
  }
};

/// Six-term cocycle condition on every window triple x < y < z. Triples
/// that need phi outside its window or domain are skipped and counted.
inline D2Report d2_check(const LieFamily& f, const TwoCochain& phi, const Window& w) {
  D2Report r;
  r.family = f.name();
  r.window = w;
  auto gens = f.basis(w);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      for (std::size_t k = j + 1; k < gens.size(); ++k) {
        auto terms = detail::d2_terms(f, gens[i], gens[j], gens[k]);
        bool ok = true;
        for (const auto& t : terms)
          if (!phi.defined(t.a, t.b)) {
            ok = false;
            break;
          }
        if (!ok) {
          ++r.triples_skipped;
          continue;
        }
        Element res;
        for (const auto& t : terms) {
          Element v = phi.at(t.a, t.b);
          if (v.is_zero()) continue;
          res += t.outer ? t.coeff * bracket(f, Element(*t.outer), v) : t.coeff * v;
        }
        ++r.triples_checked;
        if (!res.is_zero()) {
          r.pass = false;
          r.failing_triple = {gens[i], gens[j], gens[k]};
          r.residual = std::move(res);
          return r;
        }
      }
  return r;
}

/// First window pair (x < y) evaluable for psi where d1 psi differs from phi.
inline std::optional<GeneratorPair> d1_mismatch(const LieFamily& f, const OneCochain& psi,
                                                const TwoCochain& phi, const Window& w) {
  auto gens = f.basis(w);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!d1_evaluable(f, psi, gens[i], gens[j]) || !phi.defined(gens[i], gens[j])) continue;
      if (d1(f, psi, gens[i], gens[j]) != phi.at(gens[i], gens[j])) return GeneratorPair{gens[i], gens[j]};
    }
  return std::nullopt;
}

struct AdjointSolveResult {
  std::string family;
  Window window;
  int degree_shift = 0;
  std::size_t equations = 0;
  std::size_t unknowns = 0;
  std::size_t rank = 0;
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;
  bool solvable = false;
  std::size_t solution_space_dim = 0;
  OneCochain psi;
  /// Basis of the solutions of d1 psi = 0 in the same unknowns.
  std::vector<OneCochain> kernel;
  /// The returned psi re-checked against phi on every used pair.
  bool verified = false;
  std::vector<std::pair<std::pair<GeneratorPair, GeneratorId>, Rational>> certificate;
  Rational certificate_value;

  nlohmann::ordered_json to_json(const LieFamily& f) const {
    nlohmann::ordered_json j;
    j["solve"] = "adjoint_coboundary";
    j["family"] = family;
    j["window"] = window.to_json();
    j["degree_shift"] = degree_shift;
    j["matrix"] = {{"rows", equations}, {"cols", unknowns}, {"rank", rank}};
    j["pairs_used"] = pairs_used;
    j["pairs_skipped"] = pairs_skipped;
    j["solvable"] = solvable;
    if (solvable) {
      j["solution_space_dim"] = solution_space_dim;
      j["psi"] = psi.to_json(f.fd_names());
      auto ker = nlohmann::ordered_json::array();
      for (const auto& k : kernel) ker.push_back(k.to_json(f.fd_names()));
      j["kernel"] = ker;
      j["verified"] = verified;
    } else {
      auto cert = nlohmann::ordered_json::array();
      for (const auto& [k, v] : certificate)
        cert.push_back({{"x", k.first.first.label(f.fd_names())},
                        {"y", k.first.second.label(f.fd_names())},
                        {"component", k.second.label(f.fd_names())},
                        {"multiplier", v.to_string()}});
      j["certificate"] = cert;
      j["certificate_value"] = certificate_value.to_string();
    }
    return j;
  }
};

/// Solves d1 psi = phi with psi(x) in the span of the basis elements of
/// degree deg x + d, over all window pairs whose evaluation stays in the
/// window, at a rational parameter point.
inline AdjointSolveResult coboundary_solve_adjoint(const LieFamily& family, const TwoCochain& phi_in,
                                                   const GradedCochainSpec& spec, const Point& point = {}) {
  if (spec.coefficients != Coefficients::Adjoint)
    throw std::invalid_argument("coboundary_solve_adjoint needs adjoint coefficients");
  const Window& w = spec.window;
  LieFamily f = bind_fully(family, point);
  TwoCochain phi = phi_in.substitute(to_bindings(point));

  AdjointSolveResult r;
  r.family = family.name();
  r.window = w;
  r.degree_shift = spec.degree_shift;

  auto gens = f.basis(w);
  std::map<std::pair<GeneratorId, GeneratorId>, std::size_t> col;  // (source, target)
  std::vector<std::pair<GeneratorId, GeneratorId>> cols;
  for (const auto& g : gens)
    for (const auto& t : f.basis(Window(g.degree + spec.degree_shift, g.degree + spec.degree_shift))) {
      col.emplace(std::make_pair(g, t), cols.size());
      cols.emplace_back(g, t);
    }

  OneCochain probe(w);
  std::vector<std::pair<GeneratorPair, GeneratorId>> row_keys;
  std::vector<std::map<std::size_t, Rational>> rows;
  std::vector<Rational> rhs;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const auto &x = gens[i], &y = gens[j];
      if (!d1_evaluable(f, probe, x, y) || !phi.defined(x, y)) {
        ++r.pairs_skipped;
        continue;
      }
      ++r.pairs_used;
      std::map<GeneratorId, std::map<std::size_t, Rational>> comp;
      for (const auto& t : detail::d1_terms(f, x, y)) {
        const int td = t.arg.degree + spec.degree_shift;
        for (const auto& target : f.basis(Window(td, td))) {
          std::size_t c = col.at({t.arg, target});
          Element v = t.outer ? bracket(f, Element(*t.outer), Element(target)) : Element(target);
          for (const auto& [g, k] : v.support()) {
            auto& cell = comp[g][c];
            cell += (t.coeff * k).constant_value();
          }
        }
      }
      Element target_value = phi.at(x, y);
      for (const auto& [g, k] : target_value.support()) comp.try_emplace(g);
      for (auto& [g, entries] : comp) {
        row_keys.push_back({{x, y}, g});
        rows.push_back(std::move(entries));
        rhs.push_back(target_value.coefficient(g).constant_value());
      }
    }

  RationalMatrix A(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [c, v] : rows[i]) A(i, c) = v;
  auto sol = solve(A, rhs, true);
  r.equations = rows.size();
  r.unknowns = cols.size();
  r.rank = sol.rank;
  r.solvable = sol.consistent;
  if (sol.consistent) {
    r.solution_space_dim = sol.nullspace.size();
    auto to_cochain = [&](const std::vector<Rational>& x) {
      OneCochain psi(w);
      std::map<GeneratorId, Element> vals;
      for (std::size_t c = 0; c < cols.size(); ++c)
        if (!x[c].is_zero()) vals[cols[c].first].add(cols[c].second, ParamPolynomial(x[c]));
      for (auto& [g, v] : vals) psi.set(g, std::move(v));
      return psi;
    };
    r.psi = to_cochain(sol.particular);
    for (const auto& k : sol.nullspace) r.kernel.push_back(to_cochain(k));
    r.verified = !d1_mismatch(f, r.psi, phi, w).has_value();
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!sol.certificate[i].is_zero()) r.certificate.emplace_back(row_keys[i], sol.certificate[i]);
    r.certificate_value = sol.certificate_value;
  }
  return r;
}

struct H2Report {
  std::string family;
  GradedCochainSpec spec;
  std::size_t pairs_in_domain = 0;
  std::size_t pairs_excluded = 0;
  std::size_t cochain_dim = 0;
  std::size_t d2_rows = 0;
  std::size_t d2_rank = 0;
  std::size_t cocycle_dim = 0;
  std::size_t d1_rows = 0;
  std::size_t d1_cols = 0;
  std::size_t coboundary_dim = 0;
  std::size_t quotient_dim = 0;
  std::size_t triples_checked = 0;
  std::size_t triples_skipped = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["label"] = "EVIDENCE";
    j["note"] = "dimensions of a finite window; they approximate, and do not equal, H^2 of the infinite-dimensional algebra";
    j["family"] = family;
    j["coefficients"] = spec.coefficients == Coefficients::Adjoint ? "adjoint" : "trivial";
    j["window"] = spec.window.to_json();
    j["degree_shift"] = spec.degree_shift;
    j["pairs_in_domain"] = pairs_in_domain;
    j["pairs_excluded"] = pairs_excluded;
    j["cochain_dim"] = cochain_dim;
    j["d2_matrix"] = {{"rows", d2_rows}, {"cols", cochain_dim}, {"rank", d2_rank}};
    j["d1_matrix"] = {{"rows", d1_rows}, {"cols", d1_cols}, {"rank", coboundary_dim}};
    j["cocycle_dim"] = cocycle_dim;
    j["coboundary_dim"] = coboundary_dim;
    j["quotient_dim"] = quotient_dim;
    j["triples_checked"] = triples_checked;
    j["triples_skipped"] = triples_skipped;
    return j;
  }
};

/// Windowed dimensions of degree-d cocycles, coboundaries and their
/// quotient, by exact rank computation at a rational parameter point.
///
/// The cochain domain is the set of window pairs x < y whose d1 needs only
/// window indices. A cocycle triple using a pair outside the domain is
/// skipped. The family must be graded at the point (almost-grading band
/// R = S = 0 on the window).
inline H2Report graded_h2_report(const LieFamily& family, const GradedCochainSpec& spec,
                                 const Point& point = {}) {
  const Window& w = spec.window;
  const int d = spec.degree_shift;
  LieFamily f = bind_fully(family, point);
  auto bounds = almost_grading_bounds(f, w);
  if (bounds.R != 0 || bounds.S != 0)
    throw KindMismatch("graded report needs a graded fiber; '" + family.name() + "' has band [" +
                       std::to_string(bounds.R) + "," + std::to_string(bounds.S) + "] at this point");
  const bool adjoint = spec.coefficients == Coefficients::Adjoint;

  H2Report r;
  r.family = family.name();
  r.spec = spec;

  auto gens = f.basis(w);
  auto targets = [&](int deg) { return f.basis(Window(deg, deg)); };

  // Cochain coordinates: (pair, target) for adjoint, pair for trivial.
  std::map<GeneratorPair, std::vector<std::size_t>> coord;
  std::size_t ncols = 0;
  OneCochain probe(w);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const auto &x = gens[i], &y = gens[j];
      const int out = x.degree + y.degree + d;
      if (adjoint) {
        if (!d1_evaluable(f, probe, x, y)) {
          ++r.pairs_excluded;
          continue;
        }
        auto& v = coord[{x, y}];
        for (std::size_t t = 0; t < targets(out).size(); ++t) v.push_back(ncols++);
      } else {
        if (out != 0) continue;
        coord[{x, y}].push_back(ncols++);
      }
    }
  r.pairs_in_domain = coord.size();
  r.cochain_dim = ncols;

  // phi(a, b) is known if it is in the domain, on the diagonal, or (trivial
  // coefficients) forced to zero by homogeneity.
  auto known = [&](const GeneratorId& a, const GeneratorId& b) {
    if (a == b) return true;
    if (!adjoint && a.degree + b.degree + d != 0) return true;
    if (!w.contains(a.degree) || !w.contains(b.degree)) return false;
    return coord.contains(TwoCochain::ordered(a, b));
  };

  std::vector<std::map<std::size_t, Rational>> d2rows;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      for (std::size_t k = j + 1; k < gens.size(); ++k) {
        auto terms = detail::d2_terms(f, gens[i], gens[j], gens[k], adjoint);
        bool ok = true;
        for (const auto& t : terms)
          if (!known(t.a, t.b)) {
            ok = false;
            break;
          }
        if (!ok) {
          ++r.triples_skipped;
          continue;
        }
        ++r.triples_checked;
        std::map<GeneratorId, std::map<std::size_t, Rational>> comp;
        for (const auto& t : terms) {
          if (t.a == t.b) continue;
          auto key = TwoCochain::ordered(t.a, t.b);
          auto it = coord.find(key);
          if (it == coord.end()) continue;  // zero by homogeneity
          Rational sign = t.a < t.b ? Rational(1) : Rational(-1);
          Rational c = t.coeff.constant_value() * sign;
          if (!adjoint) {
            comp[GeneratorId::central()][it->second[0]] += c;
            continue;
          }
          auto tg = targets(key.first.degree + key.second.degree + d);
          for (std::size_t q = 0; q < tg.size(); ++q) {
            Element v = t.outer ? bracket(f, Element(*t.outer), Element(tg[q])) : Element(tg[q]);
            for (const auto& [g, kk] : v.support()) comp[g][it->second[q]] += c * kk.constant_value();
          }
        }
        for (auto& [g, row] : comp) d2rows.push_back(std::move(row));
      }
  RationalMatrix D2(d2rows.size(), ncols);
  for (std::size_t i = 0; i < d2rows.size(); ++i)
    for (const auto& [c, v] : d2rows[i]) D2(i, c) = v;
  r.d2_rows = d2rows.size();
  r.d2_rank = rank(D2);
  r.cocycle_dim = ncols - r.d2_rank;

  // Coboundary map: psi coordinates -> cochain coordinates.
  std::map<std::pair<GeneratorId, GeneratorId>, std::size_t> pcol;
  if (adjoint) {
    for (const auto& g : gens)
      for (const auto& t : targets(g.degree + d)) pcol.emplace(std::make_pair(g, t), pcol.size());
  } else {
    for (const auto& t : targets(-d)) pcol.emplace(std::make_pair(t, GeneratorId::central()), pcol.size());
  }
  RationalMatrix D1(ncols, pcol.size());
  for (const auto& [pair, cs] : coord) {
    const auto& [x, y] = pair;
    if (!adjoint) {
      for (const auto& [h, c] : basis_bracket(f, x, y).support())
        D1(cs[0], pcol.at({h, GeneratorId::central()})) += c.constant_value();
      continue;
    }
    auto tg = targets(x.degree + y.degree + d);
    for (const auto& t : detail::d1_terms(f, x, y)) {
      for (const auto& src : targets(t.arg.degree + d)) {
        std::size_t c = pcol.at({t.arg, src});
        Element v = t.outer ? bracket(f, Element(*t.outer), Element(src)) : Element(src);
        for (const auto& [g, kk] : v.support()) {
          auto pos = std::find(tg.begin(), tg.end(), g);
          if (pos == tg.end()) throw std::logic_error("coboundary left the homogeneous component");
          D1(cs[static_cast<std::size_t>(pos - tg.begin())], c) += (t.coeff * kk).constant_value();
        }
      }
    }
  }
  r.d1_rows = ncols;
  r.d1_cols = pcol.size();
  r.coboundary_dim = rank(D1);
  r.quotient_dim = r.cocycle_dim - r.coboundary_dim;
  return r;
}

}  // namespace knfam
