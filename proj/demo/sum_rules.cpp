// Moment and dipole sum rules for the bulk and edge kernels of complex Ginibre.
#include <cstdio>

#include "rmtlab/rmtlab.hpp"

using namespace rmtlab;

namespace {

void show(const SumRuleReport& r) {
  std::printf("%-15s computed % .12f  expected % .12f  %s\n", std::string(rule_name(r.rule_id)).c_str(),
              r.computed.real(), r.expected.real(), r.pass ? "ok" : "FAIL");
}

}  // namespace

int main() {
  const double rho = 1.0 / kPi;
  for (const auto& r : check_moment_rules([&](double x) { return bulk_rho2T(x, rho); }, rho, 2.0)) show(r);
  show(check_dipole([](double y) { return edge_profile_H(y).real(); }, rho, 2.0));
  for (double dx : {8.0, 16.0}) {
    const auto r = check_edge_asymptotic(dx, 0.0, 0.0);
    std::printf("edge dx=%-4g    relative deviation from 1/dx^2 law %.4f\n", dx, r.deviation());
  }
}
