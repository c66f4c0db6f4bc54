// Prints the first few R_j, B_j and P_j in closed form.
#include <iostream>

#include "hyperis/asymptotics.hpp"

using namespace hyperis;

int main() {
  for (int j = 1; j <= 2; ++j) std::cout << "R_" << j << " = " << asym::R_poly(j).to_string() << "\n";
  const auto b = asym::compute_B(2);
  for (std::size_t j = 0; j < b.size(); ++j) std::cout << "B_" << j + 1 << " = " << b[j].to_string() << "\n";
  const auto p = asym::compute_P(4);
  for (std::size_t j = 0; j < p.P.size(); ++j) std::cout << "P_" << j + 1 << " = " << p.P[j].to_string() << "\n";
}
