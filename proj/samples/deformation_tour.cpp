// Walks the D_s family from the Witt algebra to a smooth fiber and back.
#include <iostream>

#include "knfam/knfam.hpp"

using namespace knfam;

int main() {
  auto ds = families::genus1_vf_Ds();
  const Window w(-4, 4);

  auto v = [](int n) { return Element(GeneratorId::vector_field(n)); };
  std::cout << "[V2, V4] = " << bracket(ds, v(2), v(4)).to_string() << "\n";
  std::cout << "[V1, V2] = " << bracket(ds, v(1), v(2)).to_string() << "\n";

  auto jac = jacobi_check(ds, w);
  std::cout << "Jacobi on [-4,4]: " << (jac.pass ? "holds" : "fails") << " over " << jac.triples_checked
            << " triples\n";

  auto witt = specialize(ds, Bindings{{Param::e1, ParamPolynomial()}});
  std::cout << "e1 = 0 fiber equals witt: " << (!compare_on_window(witt, families::witt(), w) ? "yes" : "no") << "\n";

  auto phi = first_order_cocycle(ds, Param::e1, w);
  auto triv = verify_infinitesimal_triviality(phi, w);
  std::cout << "first-order cocycle in e1 is a coboundary: " << (triv.pass() ? "yes" : "no") << "\n";

  for (int s : {0, -1, 3}) {
    auto jw = jump_witness(Rational(s), w);
    std::cout << "s = " << s << ": j = " << jw.j->to_string()
              << ", rescaled fiber equals e1 = 1 fiber: " << (jw.rescaled_equals_unit_fiber ? "yes" : "no") << "\n";
  }

  auto ext = extend(families::witt(), cocycles::virasoro());
  std::cout << "Virasoro [l2, l-2] = " << bracket(ext, v(2), v(-2)).to_string() << "\n";
  return 0;
}
