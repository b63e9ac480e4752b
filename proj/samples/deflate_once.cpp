// Draws one spiked tensor, runs the two deflation steps and prints the
// alignments with the planted components.

#include "tdefl/pipeline.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
  const double alpha = argc > 1 ? std::atof(argv[1]) : 0.5;
  const double gamma = argc > 2 ? std::atof(argv[2]) : 1.0;
  const tdefl::SpikedSample s = tdefl::gen_spiked({80, 6.0, 5.0, alpha, 7});
  const tdefl::DeflationRun run = tdefl::deflate(s.tensor, gamma, &s.truth);
  const tdefl::AlignmentRecord& a = *run.alignments;
  std::printf("lambda1 %.4f  lambda2 %.4f  kappa %.2e  eta %.4f\n", run.factor1.lambda, run.factor2.lambda,
              run.kappa_hat, run.eta_hat);
  std::printf("first factor  |<u,x1>| %.4f  |<u,x2>| %.4f\n", a.rho1_u[0], a.rho1_u[1]);
  std::printf("second factor |<u,x1>| %.4f  |<u,x2>| %.4f\n", a.theta2[0], a.theta2[1]);
}
