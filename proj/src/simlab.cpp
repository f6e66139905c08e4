#include "xhwe/simlab.hpp"

#include <cmath>

#include "xhwe/rng.hpp"

namespace xhwe {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // 99.5% normal quantile

void draw_multinomial3(CounterRng& rng, std::int64_t n,
                       const std::array<double, 3>& probs_aaAaAA,
                       std::int64_t& c0, std::int64_t& c1, std::int64_t& c2) {
  // probs are (p_AA, p_Aa, p_aa); c0/c1/c2 count aa/Aa/AA.
  c0 = c1 = c2 = 0;
  const double t_aa = probs_aaAaAA[2];
  const double t_aa_het = probs_aaAaAA[2] + probs_aaAaAA[1];
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    if (u < t_aa) {
      ++c0;
    } else if (u < t_aa_het) {
      ++c1;
    } else {
      ++c2;
    }
  }
}

RejectionReport run_scenario(const SimScenario& scenario,
                             const std::vector<TestId>& tests) {
  if (scenario.replicates < 1) {
    throw XhweError(ErrorCode::EmptyRun, "replicates must be >= 1");
  }
  RejectionReport report;
  report.scenario = scenario;
  report.tests.resize(tests.size());
  for (std::size_t t = 0; t < tests.size(); ++t) report.tests[t].test = tests[t];

  for (std::int64_t rep = 0; rep < scenario.replicates; ++rep) {
    const GenotypeCounts counts = simulate_counts(scenario, rep);
    for (std::size_t t = 0; t < tests.size(); ++t) {
      try {
        const TestResult res = run_test(tests[t], counts);
        ++report.tests[t].evaluated;
        if (res.p <= scenario.alpha) ++report.tests[t].rejections;
      } catch (const XhweError& e) {
        if (e.code() == ErrorCode::DegenerateLocus) {
          ++report.tests[t].degenerate;  // monomorphic replicate, not counted
        } else {
          throw;
        }
      }
    }
  }
  for (auto& tr : report.tests) {
    if (tr.evaluated > 0) {
      tr.rate = static_cast<double>(tr.rejections) / static_cast<double>(tr.evaluated);
      tr.mc_se = std::sqrt(tr.rate * (1.0 - tr.rate) /
                           static_cast<double>(tr.evaluated));
      tr.ci99_lo = tr.rate - kZ99 * tr.mc_se;
      tr.ci99_hi = tr.rate + kZ99 * tr.mc_se;
    }
  }
  return report;
}

}  // namespace

std::array<double, 3> genotype_probs(double p, double delta) {
  const double p_hom = p * p + delta;
  const double p_het = 2.0 * p * (1.0 - p) - 2.0 * delta;
  if (p_hom < 0.0 || p_hom > 1.0 || p_het < 0.0 || p_het > 1.0 ||
      p_hom + p_het > 1.0) {
    throw XhweError(ErrorCode::InfeasibleDisequilibrium,
                    "genotype probabilities fall outside [0,1]");
  }
  return {p_hom, p_het, 1.0 - p_hom - p_het};
}

GenotypeCounts simulate_counts(const SimScenario& scenario,
                               std::int64_t replicate_index) {
  const std::array<double, 3> fem = genotype_probs(scenario.p_f, scenario.delta_f);
  const double pm = scenario.p_m();
  if (!(pm >= 0.0 && pm <= 1.0)) {
    throw XhweError(ErrorCode::InfeasibleDisequilibrium, "p_m outside [0,1]");
  }
  CounterRng rng(scenario.seed, static_cast<std::uint64_t>(replicate_index) + 1);
  GenotypeCounts counts;
  counts.region = scenario.region;
  draw_multinomial3(rng, scenario.f, fem, counts.f0, counts.f1, counts.f2);
  if (scenario.region == Region::X_NPR) {
    counts.m1 = 0;
    counts.m2 = 0;
    for (std::int64_t j = 0; j < scenario.m; ++j) {
      if (rng.uniform() < pm) ++counts.m2;
    }
    counts.m0 = scenario.m - counts.m2;
  } else {
    const std::array<double, 3> male = genotype_probs(pm, scenario.delta_m);
    draw_multinomial3(rng, scenario.m, male, counts.m0, counts.m1, counts.m2);
  }
  return counts;
}

RejectionReport run_t1e(const SimScenario& scenario,
                        const std::vector<TestId>& tests) {
  if (scenario.delta_f != 0.0) {
    throw XhweError(ErrorCode::InfeasibleDisequilibrium,
                    "type-I-error runs require delta_f = 0 (HWE null)");
  }
  return run_scenario(scenario, tests);
}

std::vector<RejectionReport> run_power(const std::vector<SimScenario>& grid,
                                       const std::vector<TestId>& tests) {
  std::vector<RejectionReport> out;
  out.reserve(grid.size());
  for (const auto& scenario : grid) out.push_back(run_scenario(scenario, tests));
  return out;
}

}  // namespace xhwe
