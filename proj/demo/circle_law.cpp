// Radial density of complex Ginibre eigenvalues against the circular law.
#include <cmath>
#include <cstdio>

#include "rmtlab/rmtlab.hpp"

using namespace rmtlab;

int main() {
  EnsembleSpec s;
  s.family = Family::Ginibre;
  s.field = Field::Complex;
  s.N = 200;
  const double R = spectral_radius(s);

  RadialDensityAccumulator acc(linspace_edges(0.0, 1.2 * R, 12));
  for (int i = 0; i < 50; ++i) acc.add(sample_cloud(s, 2024, i));
  const RadialDensityEstimate e = acc.result();

  const auto model = *density_model_for(s);
  std::printf("  r/R    density   model\n");
  for (std::size_t k = 0; k < e.bins(); ++k) {
    const double want = radial_mass(model, e.bin_edges[k], e.bin_edges[k + 1]) / e.area(k);
    std::printf("%6.3f %9.5f %9.5f\n", e.center(k) / R, e.density[k], want);
  }
}
