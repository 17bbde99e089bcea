#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "knfam/knfam.hpp"

namespace knfam::cli {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string family;
  std::pair<int, int> window{-4, 4};
  std::vector<std::string> params;
  bool symbolic = false;
  std::string format = "json";
  std::string output;
  std::string fd;
  std::string cocycle;
  std::string prefactor = "1";
  int degree = -2;
  std::string coefficients = "adjoint";
  std::string param;
  std::string s, e1, e2, on_c;
  std::pair<int, int> grid{0, 0};
  int denominator = 1;
};

namespace detail {

inline Window window_of(const Options& o) {
  if (o.window.first > o.window.second)
    throw UsageError("--window: lo must not exceed hi (got " + std::to_string(o.window.first) + " " +
                     std::to_string(o.window.second) + ")");
  return {o.window.first, o.window.second};
}

inline Point point_of(const Options& o) {
  Point pt;
  for (const auto& b : o.params) {
    auto [p, v] = parse_binding(b);
    if (!v.is_constant())
      throw UsageError("--params: '" + b + "' must bind a rational value");
    pt[p] = v.constant_value();
  }
  return pt;
}

inline LieFamily family_of(const Options& o, const std::string& fallback = {}) {
  std::string name = o.family.empty() ? fallback : o.family;
  if (name.empty()) throw UsageError("--family is required");
  std::optional<FiniteLieAlgebra> fd;
  if (!o.fd.empty()) fd = FiniteLieAlgebra::from_file(o.fd);
  return families::by_name(name, fd);
}

/// The family with --params applied: fully bound unless --symbolic.
inline LieFamily prepared(const Options& o, const LieFamily& f) {
  Point pt = point_of(o);
  if (o.symbolic) return pt.empty() ? f : specialize(f, pt);
  auto left = specialize(f, pt).parameters();
  if (!left.empty())
    throw UnboundParameter("family '" + f.name() + "' has unbound parameter '" +
                           std::string(param_name(*left.begin())) + "'; bind it with --params or pass --symbolic");
  return bind_fully(f, pt);
}

inline void reject_symbolic(const Options& o, const std::string& verb) {
  if (o.symbolic) throw UsageError("--symbolic: '" + verb + "' solves exact linear systems and needs bound parameters");
}

inline void require_json(const Options& o, const std::string& verb) {
  if (o.format != "json") throw UsageError("--format: '" + verb + "' only writes json");
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

inline Rational rational_arg(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const ParseError&) {
    throw UsageError(flag + ": '" + text + "' is not a rational number");
  }
}

}  // namespace detail

struct Outcome {
  std::string text;
  bool pass = true;
};

inline Outcome run_verb(const std::string& verb, const Options& o) {
  using namespace detail;
  if (verb == "table") {
    auto f = prepared(o, family_of(o));
    auto t = structure_table(f, window_of(o));
    return {o.format == "csv" ? t.to_csv() : dump(t.to_json()), true};
  }
  if (verb == "jacobi") {
    require_json(o, verb);
    auto f = prepared(o, family_of(o));
    auto r = jacobi_check(f, window_of(o));
    r.symbolic = o.symbolic;
    if (!o.symbolic) r.point = point_of(o);
    return {dump(r.to_json(f)), r.pass};
  }
  if (verb == "assoc") {
    require_json(o, verb);
    auto f = prepared(o, family_of(o, "function_algebra"));
    auto r = associativity_check(f, window_of(o));
    return {dump(r.to_json(f)), r.pass};
  }
  if (verb == "cocycle-check") {
    require_json(o, verb);
    if (o.cocycle.empty()) throw UsageError("--cocycle is required");
    auto c = cocycles::by_name(o.cocycle, ParamPolynomial::parse(o.prefactor));
    auto f = prepared(o, family_of(o, o.cocycle == "virasoro" ? "witt" : "genus1_current"));
    auto pt = point_of(o);
    if (!pt.empty()) c = c.substitute(to_bindings(pt));
    auto r = scalar_cocycle_check(c, f, window_of(o));
    return {dump(r.to_json(f)), r.pass()};
  }
  if (verb == "coboundary-solve") {
    require_json(o, verb);
    reject_symbolic(o, verb);
    if (o.cocycle.empty() == o.param.empty())
      throw UsageError("coboundary-solve needs exactly one of --cocycle (scalar) or --param (first-order)");
    auto f = family_of(o, o.cocycle == "virasoro" ? "witt" : (o.cocycle.empty() ? "genus1_vf_Ds" : "genus1_current"));
    auto w = window_of(o);
    auto pt = point_of(o);
    if (!o.cocycle.empty()) {
      auto c = cocycles::by_name(o.cocycle, ParamPolynomial::parse(o.prefactor));
      auto r = scalar_coboundary_solve(c, f, w, pt);
      // A solvable system is a verification failure: the cocycle is trivial on the window.
      return {dump(r.to_json(f)), !r.solvable};
    }
    Param p = param_from_name(o.param);
    if (pt.contains(p)) throw UsageError("--params: the deformation parameter '" + o.param + "' cannot be bound");
    auto c = first_order_cocycle(f, p, w, to_bindings(pt));
    auto r = verify_infinitesimal_triviality(c, w);
    return {dump(r.to_json()), r.pass()};
  }
  if (verb == "h2") {
    require_json(o, verb);
    reject_symbolic(o, verb);
    Coefficients k;
    if (o.coefficients == "adjoint") k = Coefficients::Adjoint;
    else if (o.coefficients == "trivial") k = Coefficients::Trivial;
    else throw UsageError("--coefficients: expected adjoint or trivial, got '" + o.coefficients + "'");
    auto f = family_of(o);
    auto r = graded_h2_report(f, {o.degree, window_of(o), k}, point_of(o));
    return {dump(r.to_json()), true};
  }
  if (verb == "first-order") {
    require_json(o, verb);
    if (o.param.empty()) throw UsageError("--param is required");
    auto f = family_of(o);
    auto w = window_of(o);
    auto c = first_order_cocycle(f, param_from_name(o.param), w, to_bindings(point_of(o)));
    auto d2 = d2_check(c.base, c.cochain, w);
    auto j = c.to_json();
    j["cocycle_check"] = d2.to_json(c.base);
    j["pass"] = d2.pass;
    return {dump(j), d2.pass};
  }
  if (verb == "rescale-check") {
    require_json(o, verb);
    auto f = family_of(o, "genus1_vf_Ds");
    auto pt = point_of(o);
    if (!pt.empty()) f = specialize(f, pt);
    auto rescaled = rescale_family(f);
    auto unit = specialize(f, Bindings{{Param::e1, ParamPolynomial(1)}});
    auto w = window_of(o);
    auto mismatch = compare_on_window(rescaled, unit, w);
    nlohmann::ordered_json j;
    j["check"] = "rescale";
    j["family"] = f.name();
    j["window"] = w.to_json();
    j["substitution"] = "e1 = lambda^2, V*_n = lambda^(-n) V_n";
    j["rescaled"] = rescaled.name();
    auto tab = nlohmann::ordered_json::array();
    for (const auto& [name, ts] : {std::pair{"odd_odd", &rescaled.rule().odd_odd},
                                   std::pair{"even_even", &rescaled.rule().even_even},
                                   std::pair{"odd_even", &rescaled.rule().odd_even}})
      for (const auto& t : *ts) tab.push_back({{"case", name}, {"offset", t.offset}, {"coefficient", t.coeff.to_string()}});
    j["rescaled_terms"] = tab;
    j["equals_unit_fiber"] = !mismatch;
    if (mismatch) {
      j["mismatch"] = {{"x", mismatch->x.label()}, {"y", mismatch->y.label()},
                       {"rescaled", mismatch->lhs.to_json()}, {"unit_fiber", mismatch->rhs.to_json()}};
    }
    j["pass"] = !mismatch;
    return {dump(j), !mismatch};
  }
  if (verb == "jump-witness") {
    require_json(o, verb);
    if (o.s.empty()) throw UsageError("--s is required");
    auto r = jump_witness(rational_arg("--s", o.s), window_of(o));
    return {dump(r.to_json()), r.pass()};
  }
  if (verb == "curve") {
    require_json(o, verb);
    if (o.symbolic) {
      auto id = verify_geometry_identities();
      auto c = derive_curve(ParamPolynomial::var(Param::e1), ParamPolynomial::var(Param::e2));
      auto j = c.to_json();
      j["j"] = j_invariant_symbolic(c).to_json();
      j["identities"] = id.to_json();
      return {dump(j), id.all()};
    }
    if (o.e1.empty() || o.e2.empty()) throw UsageError("curve needs --e1 and --e2 (or --symbolic)");
    auto c = derive_curve(rational_arg("--e1", o.e1), rational_arg("--e2", o.e2));
    auto j = c.to_json();
    if (c.type == CurveType::Smooth) j["j"] = j_invariant(c).to_string();
    return {dump(j), true};
  }
  if (verb == "j") {
    require_json(o, verb);
    const int given = !o.s.empty() + !o.on_c.empty() + (!o.e1.empty() || !o.e2.empty());
    if (given != 1) throw UsageError("j needs exactly one of --s, --on-c, or --e1 with --e2");
    nlohmann::ordered_json j;
    if (!o.s.empty()) {
      auto s = rational_arg("--s", o.s);
      j["line"] = "D_s";
      j["s"] = s.to_string();
      j["j"] = j_along_Ds(s).to_string();
    } else if (!o.on_c.empty()) {
      auto e = rational_arg("--on-c", o.on_c);
      j["curve"] = "C: e2 = 2 e1^2";
      j["e1"] = e.to_string();
      j["j"] = j_along_C(e).to_string();
      if (e.is_zero()) j["note"] = "formula value at the cusp; not a curve invariant";
    } else {
      if (o.e1.empty() || o.e2.empty()) throw UsageError("--e1 and --e2 must be given together");
      auto e1 = rational_arg("--e1", o.e1), e2 = rational_arg("--e2", o.e2);
      j["e1"] = e1.to_string();
      j["e2"] = e2.to_string();
      j["j"] = j_invariant(e1, e2).to_string();
    }
    return {dump(j), true};
  }
  if (verb == "classify") {
    auto row = [](const CurveParams& c) {
      std::string jv = c.type == CurveType::Smooth ? j_invariant(c).to_string() : "";
      return std::vector<std::string>{c.e1.constant_value().to_string(), c.e2.constant_value().to_string(),
                                      curve_type_name(c.type), c.line ? nodal_line_name(*c.line) : "",
                                      c.delta.constant_value().to_string(), jv};
    };
    std::vector<CurveParams> pts;
    if (!o.e1.empty() || !o.e2.empty()) {
      if (o.e1.empty() || o.e2.empty()) throw UsageError("--e1 and --e2 must be given together");
      pts.push_back(derive_curve(rational_arg("--e1", o.e1), rational_arg("--e2", o.e2)));
    } else {
      if (o.grid.first > o.grid.second) throw UsageError("--grid: lo must not exceed hi");
      if (o.denominator <= 0) throw UsageError("--denominator must be positive");
      for (int a = o.grid.first; a <= o.grid.second; ++a)
        for (int b = o.grid.first; b <= o.grid.second; ++b)
          pts.push_back(derive_curve(Rational(a, o.denominator), Rational(b, o.denominator)));
    }
    if (o.format == "csv") {
      std::string out = "e1,e2,classification,line,delta,j\n";
      for (const auto& c : pts) {
        auto r = row(c);
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
        out += "\n";
      }
      return {out, true};
    }
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : pts) {
      auto j = c.to_json();
      if (c.type == CurveType::Smooth) j["j"] = j_invariant(c).to_string();
      arr.push_back(j);
    }
    return {dump(pts.size() == 1 ? arr[0] : arr), true};
  }
  if (verb == "validate-fd") {
    require_json(o, verb);
    auto g = o.fd.empty() ? sl2() : FiniteLieAlgebra::from_file(o.fd);
    auto v = fd_validate(g);
    auto j = v.to_json(g);
    nlohmann::ordered_json out;
    out["check"] = "fd_validate";
    out["basis_names"] = g.basis_names();
    out["pass"] = v.pass;
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "pass") out[it.key()] = it.value();
    if (v.pass) {
      auto k = nlohmann::ordered_json::array();
      for (std::size_t a = 0; a < g.dim(); ++a) {
        auto rowj = nlohmann::ordered_json::array();
        for (std::size_t b = 0; b < g.dim(); ++b) rowj.push_back(killing_form(g, a, b).to_string());
        k.push_back(rowj);
      }
      out["killing_form"] = k;
    }
    return {dump(out), v.pass};
  }
  throw UsageError("unknown verb '" + verb + "'");
}

/// Parses argv (without the program name), runs the verb and writes the
/// report. Returns 0 on success, 1 on a failed verification and 2 on
/// usage or input errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact structure constants, cocycles and invariants of Krichever-Novikov type deformation families",
               "knfam"};
  app.require_subcommand(1);

  auto family = [&](CLI::App* s) {
    s->add_option("--family", o.family, "family name")
        ->check(CLI::IsMember(std::vector<std::string>{"witt", "genus1_vf_2param", "genus1_vf_Ds", "genus1_vf_curveC",
                                                       "genus1_vf_curveC_printed", "classical_current",
                                                       "genus1_current", "function_algebra"}));
    s->add_option("--fd", o.fd, "finite-dimensional Lie algebra file for current families (default sl2)");
  };
  auto window = [&](CLI::App* s) { s->add_option("--window", o.window, "degree window lo hi"); };
  auto params = [&](CLI::App* s) { s->add_option("--params", o.params, "bindings name=rational")->expected(1, 4); };
  auto symbolic = [&](CLI::App* s) { s->add_flag("--symbolic", o.symbolic, "keep unbound parameters as polynomials"); };
  auto format = [&](CLI::App* s) {
    s->add_option("--format", o.format, "json or csv")->check(CLI::IsMember(std::vector<std::string>{"json", "csv"}));
  };
  auto output = [&](CLI::App* s) { s->add_option("--output", o.output, "write the report to a file"); };
  auto common = [&](CLI::App* s) {
    family(s);
    window(s);
    params(s);
    symbolic(s);
    format(s);
    output(s);
  };

  common(app.add_subcommand("table", "structure constants on a window"));
  common(app.add_subcommand("jacobi", "Jacobi identity on all window triples"));
  common(app.add_subcommand("assoc", "associativity of a function algebra"));
  {
    auto* s = app.add_subcommand("cocycle-check", "antisymmetry and closedness of a scalar cocycle");
    common(s);
    s->add_option("--cocycle", o.cocycle, "virasoro or current_geometric");
    s->add_option("--prefactor", o.prefactor, "polynomial prefactor p(e1, e2)");
  }
  {
    auto* s = app.add_subcommand("coboundary-solve", "exact coboundary solve for a scalar or first-order cocycle");
    common(s);
    s->add_option("--cocycle", o.cocycle, "scalar cocycle: virasoro or current_geometric");
    s->add_option("--prefactor", o.prefactor, "polynomial prefactor p(e1, e2)");
    s->add_option("--param", o.param, "deformation parameter of the first-order cocycle");
  }
  {
    auto* s = app.add_subcommand("h2", "windowed second cohomology dimensions (evidence only)");
    common(s);
    s->add_option("--degree", o.degree, "degree shift d of homogeneous cochains");
    s->add_option("--coefficients", o.coefficients, "adjoint or trivial");
  }
  {
    auto* s = app.add_subcommand("first-order", "first-order cocycle of a family in one parameter");
    common(s);
    s->add_option("--param", o.param, "deformation parameter");
  }
  common(app.add_subcommand("rescale-check", "rescaling isomorphism on D_s against the e1 = 1 fiber"));
  {
    auto* s = app.add_subcommand("jump-witness", "jump-deformation witness on the line D_s");
    window(s);
    format(s);
    output(s);
    s->add_option("--s", o.s, "slope s of the line e2 = s e1");
  }
  {
    auto* s = app.add_subcommand("curve", "derived curve data at (e1, e2)");
    s->add_option("--e1", o.e1);
    s->add_option("--e2", o.e2);
    symbolic(s);
    format(s);
    output(s);
  }
  {
    auto* s = app.add_subcommand("j", "j-invariant at a point, on D_s, or on the curve C");
    s->add_option("--s", o.s, "slope of D_s");
    s->add_option("--e1", o.e1);
    s->add_option("--e2", o.e2);
    s->add_option("--on-c", o.on_c, "e1 coordinate on C: e2 = 2 e1^2");
    format(s);
    output(s);
  }
  {
    auto* s = app.add_subcommand("classify", "smooth, nodal or cuspidal, at a point or on a grid");
    s->add_option("--e1", o.e1);
    s->add_option("--e2", o.e2);
    s->add_option("--grid", o.grid, "numerator range lo hi");
    s->add_option("--denominator", o.denominator, "common denominator of grid points");
    format(s);
    output(s);
  }
  {
    auto* s = app.add_subcommand("validate-fd", "antisymmetry, Jacobi and Killing form of a finite-dimensional algebra");
    s->add_option("--fd", o.fd, "algebra file (default sl2)");
    format(s);
    output(s);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  Outcome res;
  try {
    if (o.format == "csv" && verb != "table" && verb != "classify")
      throw UsageError("--format: csv output exists for table and classify only");
    res = run_verb(verb, o);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (o.output.empty()) {
    out << res.text;
  } else {
    std::ofstream f(o.output);
    if (!f) {
      err << "usage error: --output: cannot write '" << o.output << "'\n";
      return 2;
    }
    f << res.text;
  }
  return res.pass ? 0 : 1;
}

}  // namespace knfam::cli
