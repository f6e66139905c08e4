#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "xhwe/tests.hpp"
#include "xhwe/types.hpp"

namespace xhwe {

/// One simulation cell of the type-I-error / power protocol.
struct SimScenario {
  std::int64_t f = 500;
  std::int64_t m = 500;
  double p_f = 0.3;
  double sdmaf = 0.0;    // p_m = p_f - sdmaf
  double delta_f = 0.0;  // female HWD
  double delta_m = 0.0;  // male HWD (PAR only)
  Region region = Region::X_NPR;
  std::int64_t replicates = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 0;

  double p_m() const { return p_f - sdmaf; }
};

struct TestRejection {
  TestId test;
  double rate = 0.0;
  double mc_se = 0.0;
  double ci99_lo = 0.0;
  double ci99_hi = 0.0;
  std::int64_t rejections = 0;
  std::int64_t evaluated = 0;   // replicates minus degenerate draws
  std::int64_t degenerate = 0;  // monomorphic replicates, excluded from rate
};

struct RejectionReport {
  SimScenario scenario;
  std::vector<TestRejection> tests;
};

/// Female genotype probabilities (p_AA, p_Aa, p_aa) for frequency p and
/// disequilibrium delta. Throws if any probability falls outside [0,1].
std::array<double, 3> genotype_probs(double p, double delta);

/// One replicate draw: female genotypes multinomial, males Binomial(m, p_m)
/// hemizygous for NPR or multinomial (p_m, delta_m) for PAR/autosome.
/// Deterministic given (scenario.seed, replicate_index).
GenotypeCounts simulate_counts(const SimScenario& scenario,
                               std::int64_t replicate_index);

RejectionReport run_t1e(const SimScenario& scenario,
                        const std::vector<TestId>& tests);

/// Rejection rates for each scenario in the grid (no null constraint on
/// delta_f; a delta of 0 reproduces run_t1e).
std::vector<RejectionReport> run_power(const std::vector<SimScenario>& grid,
                                       const std::vector<TestId>& tests);

}  // namespace xhwe
