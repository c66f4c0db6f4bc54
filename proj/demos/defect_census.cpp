// Defect types of size <= 3 at d = 9 and their expected counts m_T at λ = 1.
#include <iostream>

#include "hyperis/polymers.hpp"

using namespace hyperis;

int main() {
  const Dim d(9);
  const Census c = census(d, 3);
  std::cout << "type            n_T        |N(S)|   m_T\n";
  for (const auto& [t, e] : c.entries) {
    const Rat m = Rat(e.count) * type_weight(t, d.value(), Rat(1));
    std::cout << t.key() << "  " << e.count << "  " << t.nbhd_at(d.value()) << "  " << m.convert_to<double>() << "\n";
  }
}
