// Solves the limiting second-step alignments for a few gamma values, walking
// down from gamma = 1.

#include "tdefl/asymptotics.hpp"

#include <cstdio>

int main() {
  const tdefl::ModelParams m{10.0, 8.0, 0.6};
  const tdefl::FirstStepSolution first = tdefl::solve_first(m, {11.0, 0.9, 0.7, 0.0});
  tdefl::SecondStepSolution s;
  s.lambda2 = 5.0;
  s.theta21 = 0.3;
  s.theta22 = 0.9;
  s.rho21 = 0.4;
  s.rho22 = 0.95;
  s.eta = 0.5;
  s = tdefl::solve_second_gamma1(m, first, s);
  std::printf("lambda1 %.5f rho11 %.5f rho12 %.5f\n", first.lambda1, first.rho11, first.rho12);
  for (double gamma = 1.0; gamma > 0.64; gamma -= 0.04) {
    s = tdefl::solve_second(m, gamma, first, s);
    std::printf("gamma %.2f  lambda2 %.5f  theta22 %.5f  rho22 %.5f  kappa %.5f\n", gamma, s.lambda2, s.theta22,
                s.rho22, s.kappa);
  }
}
