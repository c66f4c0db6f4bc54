// Samples the hard-core model on Q_8 and summarises the minority-side defects.
#include <iostream>

#include "hyperis/sampler.hpp"

using namespace hyperis;

int main() {
  mc::RunConfig cfg;
  cfg.d = 8;
  cfg.lambda = 1;
  cfg.burn_in = mc::default_burn_in(cfg.d);
  cfg.thin = 512;
  cfg.steps = cfg.burn_in + cfg.thin * 4000;
  cfg.seed = 7;
  const auto reports = mc::sample_chains(cfg, 2, 2);
  std::vector<mc::DefectReport> all;
  for (const auto& r : reports) all.insert(all.end(), r.begin(), r.end());
  const auto s = mc::defect_statistics(all, census(Dim(cfg.d), 2), cfg.lambda);
  std::cout << "samples " << s.samples << ", mean |I| " << s.size.mean << " (se " << s.size_se << ")\n";
  for (const auto& t : s.types) {
    if (t.moments.mean < 0.01) continue;
    std::cout << t.type.key() << ": mean " << t.moments.mean << " se " << t.se;
    if (t.m_T) std::cout << "  m_T " << *t.m_T;
    if (t.poisson) std::cout << "  Poisson p " << t.poisson->p_value;
    std::cout << "\n";
  }
}
