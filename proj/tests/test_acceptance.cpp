#include <cstdlib>
#include <iostream>
#include <string>

#include "hyperis/validation/acceptance.hpp"

// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Optional arguments restrict the run to the listed criterion numbers.
int main(int argc, char** argv) {
  hyperis::validation::AcceptanceOptions opt;
  opt.threads = hyperis::default_threads();
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& r : hyperis::validation::run_acceptance(opt, only)) {
    std::cout << hyperis::validation::summary_line(r) << std::endl;
    failed += !r.passed;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
