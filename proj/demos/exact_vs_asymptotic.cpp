// Compares the fixed-size counting formula with exact counts on Q_5, then shows it at larger d.
#include <iostream>

#include "hyperis/asymptotics.hpp"
#include "hyperis/exact_oracle.hpp"

using namespace hyperis;

int main() {
  const auto prof = size_profile(Dim(5));
  std::cout << "Q_5 has " << prof.total() << " independent sets\n\n";
  PrecisionScope ps(40);
  std::cout << "beta   t   log i_m exact        via P              via lambda_beta\n";
  for (const Rat beta : {Rat(1, 4), Rat(1, 2)}) {
    for (int t = 1; t <= 3; ++t) {
      const auto est = asym::log_count_asymptotic(beta, Dim(5), t, 40);
      std::cout << to_string(beta) << "    " << t << "   " << format_real(log_of(prof.counts[est.m]), 12) << "   "
                << format_real(est.via_P.value, 12) << "   " << format_real(est.via_lambda.value, 12) << "\n";
    }
  }
  std::cout << "\nlog10 of the number of independent sets of size N/2 in Q_d, t = 3\n";
  for (int d : {10, 20, 40}) {
    const auto est = asym::log_count_asymptotic(Rat(1, 2), Dim(d), 3, 40);
    std::cout << "d = " << d << ": " << format_real(est.via_P.log10_value(), 15) << "\n";
  }
}
