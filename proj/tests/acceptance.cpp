// Acceptance suite: one pass/fail line per criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "test_util.hpp"
#include "xhwe/null_dist.hpp"
#include "xhwe/rng.hpp"
#include "xhwe/scan.hpp"
#include "xhwe/simlab.hpp"
#include "xhwe/table3.hpp"
#include "xhwe/tests.hpp"

using namespace xhwe;
using xhwe::testutil::random_counts;
using xhwe::testutil::rel_diff;

namespace {

int g_failures = 0;

void report(const char* name, bool pass, const std::string& detail = "") {
  std::printf("[%s] %s%s%s\n", pass ? "PASS" : "FAIL", name,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

// Criterion 1: algebraic identity suite over fuzzed counts.
void criterion1() {
  std::mt19937 rng(101);
  double worst = 0.0;
  bool pass = true;
  for (int i = 0; i < 1000; ++i) {
    const auto au = random_counts(rng, Region::Autosome);
    worst = std::max(worst, rel_diff(ra_auto_1df(au).statistic,
                                     pearson_auto_1df(au).statistic));

    const auto npr = random_counts(rng, Region::X_NPR);
    const auto joint = ra_xnpr_joint_2df(npr);
    worst = std::max(worst, rel_diff(joint.statistic,
                                     pearson_xnpr_fm(npr).statistic));

    // female-only RA form vs the three-cell Pearson form
    const double f = static_cast<double>(npr.females());
    const double pf = (npr.f1 + 2.0 * npr.f2) / (2.0 * f);
    const double e0 = f * (1 - pf) * (1 - pf), e1 = f * 2 * pf * (1 - pf),
                 e2 = f * pf * pf;
    const double pearson9 = (npr.f0 - e0) * (npr.f0 - e0) / e0 +
                            (npr.f1 - e1) * (npr.f1 - e1) / e1 +
                            (npr.f2 - e2) * (npr.f2 - e2) / e2;
    worst = std::max(worst, rel_diff(ra_xnpr_female_1df(npr).statistic, pearson9));

    const auto dec = decompose_joint(npr);
    worst = std::max(worst, std::fabs(dec.identity_residual) /
                                std::max(1.0, joint.statistic));

    const auto mix = pearson_xnpr_pooled(npr);
    worst = std::max(worst, rel_diff(mix.statistic, mix.components->first +
                                                        mix.components->second));
  }
  pass = worst <= 1e-10;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst relative deviation %.2e", worst);
  report("1 identity suite", pass, buf);
}

// Criterion 2: goodness-of-fit vs reformulated statistics.
void criterion2() {
  std::mt19937 rng(102);
  std::uniform_real_distribution<double> pdist(0.05, 0.95);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto au = random_counts(rng, Region::Autosome);
    const auto r2 = pearson_auto_2df(au, pdist(rng));
    worst = std::max(worst, rel_diff(r2.statistic,
                                     r2.components->first + r2.components->second));
    worst = std::max(worst, rel_diff(pearson_auto_1df(au).statistic,
                                     ra_auto_1df(au).statistic));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst relative deviation %.2e", worst);
  report("2 reformulation suite", worst <= 1e-10, buf);
}

// Criterion 3: deterministic mixture evaluation vs the Monte Carlo oracle.
void criterion3() {
  bool pass = true;
  std::ostringstream detail;
  for (double w : {0.2, 1.0 / 3.0, 0.6}) {
    const std::int64_t draws = 10000000;
    std::vector<double> samples(static_cast<std::size_t>(draws));
    CounterRng rng(2024, 0);
    for (auto& s : samples) s = rng.chisq1() + w * rng.chisq1();
    std::sort(samples.begin(), samples.end());
    for (double alpha : {0.1, 0.05, 1e-3}) {
      const double q_det = mixture_quantile(alpha, w);
      const auto k = static_cast<std::size_t>((1.0 - alpha) * draws);
      const double q_mc = samples[std::min(k, samples.size() - 1)];
      // quantile standard error: sqrt(a(1-a)/N) / density(q)
      const double h = 1e-4;
      const double density = (mixture_sf(q_det - h, w) - mixture_sf(q_det + h, w)) /
                             (2.0 * h);
      const double se = std::sqrt(alpha * (1.0 - alpha) / draws) / density;
      if (std::fabs(q_det - q_mc) > 3.0 * se) {
        pass = false;
        detail << "w=" << w << " alpha=" << alpha << " |" << q_det << "-" << q_mc
               << "| > 3se=" << 3.0 * se << "; ";
      }
    }
  }
  for (double x : {0.5, 2.0, 6.0, 15.0}) {
    if (std::fabs(mixture_sf(x, 0.0) - chisq_sf(x, 1)) > 1e-10 ||
        std::fabs(mixture_sf(x, 1.0) - chisq_sf(x, 2)) > 1e-10) {
      pass = false;
      detail << "endpoint reduction failed at x=" << x << "; ";
    }
  }
  report("3 mixture-null fidelity", pass, detail.str());
}

void criterion4() {
  const auto rep = validate_table3();
  double worst = 0.0;
  for (const auto& c : rep.checks) worst = std::max(worst, c.deviation);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%zu checks, worst -log10 p deviation %.3f",
                rep.checks.size(), worst);
  report("4 published-results reproduction", rep.pass, buf);
}

const std::vector<TestId> kNprPanel = {TestId::RaXnprJoint2, TestId::RaXnprPooled1,
                                       TestId::PearsonXnprPooled,
                                       TestId::RaXnprFemale1};

void criterion5() {
  bool pass = true;
  std::ostringstream detail;
  const double band = 2.5758293 * std::sqrt(0.05 * 0.95 / 10000.0);
  std::uint64_t seed = 50001;
  // (a) no sdMAF: all four NPR tests calibrated
  for (double p : {0.2, 0.3, 0.4}) {
    for (std::int64_t f : {250, 500, 750}) {
      SimScenario s;
      s.f = f;
      s.m = 1000 - f;
      s.p_f = p;
      s.replicates = 10000;
      s.seed = ++seed;
      const auto rep = run_t1e(s, kNprPanel);
      for (const auto& tr : rep.tests) {
        if (std::fabs(tr.rate - 0.05) > band) {
          pass = false;
          detail << test_id_name(tr.test) << "@p=" << p << ",f=" << f
                 << " rate=" << tr.rate << "; ";
        }
      }
    }
  }
  // (b) sdMAF = 0.10: female-only stays calibrated, pooled tests inflate
  SimScenario s;
  s.f = 250;
  s.m = 750;
  s.p_f = 0.3;
  s.sdmaf = 0.10;
  s.replicates = 10000;
  s.seed = 777;
  const auto rep = run_t1e(s, kNprPanel);
  const double female = rep.tests[3].rate;
  const double ra_pooled = rep.tests[1].rate;
  const double pearson_pooled = rep.tests[2].rate;
  if (std::fabs(female - 0.05) > band) {
    pass = false;
    detail << "female-only rate " << female << " outside band; ";
  }
  if (!(pearson_pooled > 0.20)) {
    pass = false;
    detail << "pooled Pearson rate " << pearson_pooled << " <= 0.20; ";
  }
  if (!(ra_pooled > female)) {
    pass = false;
    detail << "pooled RA rate " << ra_pooled << " not above female rate; ";
  }
  std::ostringstream ok;
  ok << "sdMAF cell: female=" << female << " ra_pooled=" << ra_pooled
     << " pearson_pooled=" << pearson_pooled;
  report("5 type-I-error calibration", pass, pass ? ok.str() : detail.str());

  // scaled smoke of the stringent alpha run: alpha = 1e-4, 1e5 replicates
  SimScenario sm;
  sm.f = 500;
  sm.m = 500;
  sm.p_f = 0.3;
  sm.replicates = 100000;
  sm.alpha = 1e-4;
  sm.seed = 888;
  const auto smoke = run_t1e(sm, {TestId::RaXnprFemale1, TestId::RaXnprPooled1});
  bool smoke_pass = true;
  std::ostringstream sd;
  for (const auto& tr : smoke.tests) {
    // expected 10 rejections; generous Poisson 99.9% range
    sd << test_id_name(tr.test) << "=" << tr.rejections << " ";
    if (tr.rejections < 1 || tr.rejections > 30) smoke_pass = false;
  }
  report("5s stringent-alpha smoke (1e5 reps @ 1e-4)", smoke_pass,
         sd.str() + "rejections (expect ~10)");
}

void criterion6() {
  bool pass = true;
  std::ostringstream detail;
  for (double delta : {-0.04, 0.04}) {
    SimScenario s;
    s.f = 500;
    s.m = 500;
    s.p_f = 0.3;
    s.delta_f = delta;
    s.replicates = 10000;
    s.seed = delta < 0 ? 6001 : 6002;
    const auto reps = run_power({s}, kNprPanel);
    const auto& t = reps[0].tests;
    const double joint = t[0].rate, pooled = t[1].rate, female = t[3].rate;
    auto se2 = [&](int a, int b) { return 2.0 * std::hypot(t[a].mc_se, t[b].mc_se); };
    if (!(pooled - joint > se2(1, 0)) || !(female - joint > se2(3, 0))) {
      pass = false;
      detail << "1df not above joint at delta=" << delta << " (joint=" << joint
             << " pooled=" << pooled << " female=" << female << "); ";
    }
    // sign-specific ordering of the two 1 df tests, within MC error
    if (delta < 0 && female < pooled - se2(3, 1)) {
      pass = false;
      detail << "female < pooled at delta<0; ";
    }
    if (delta > 0 && pooled < female - se2(1, 3)) {
      pass = false;
      detail << "pooled < female at delta>0; ";
    }
    detail << "delta=" << delta << ": joint=" << joint << " pooled=" << pooled
           << " female=" << female << "; ";
  }
  report("6 power ordering", pass, detail.str());
}

void criterion7() {
  bool pass = true;
  std::ostringstream detail;
  // male-specific disequilibrium with large sdMAF: 2 df finds what the
  // pooled test obscures
  SimScenario a;
  a.region = Region::X_PAR;
  a.f = 336;
  a.m = 316;
  a.p_f = 0.15;
  a.sdmaf = -0.40;  // p_m = 0.55
  a.delta_f = 0.0;
  a.delta_m = -0.15;
  a.replicates = 10000;
  a.seed = 7001;
  const auto ra = run_power({a}, {TestId::RaXpar2, TestId::RaXparPooled1})[0];
  const double two_df = ra.tests[0].rate, pooled = ra.tests[1].rate;
  if (!(two_df - pooled > 2.0 * std::hypot(ra.tests[0].mc_se, ra.tests[1].mc_se))) {
    pass = false;
    detail << "2df " << two_df << " not above pooled " << pooled << "; ";
  } else {
    detail << "sdMAF cell: 2df=" << two_df << " pooled=" << pooled << "; ";
  }
  // homogeneous HWD, no sdMAF: pooling is the more efficient test
  SimScenario b;
  b.region = Region::X_PAR;
  b.f = 336;
  b.m = 316;
  b.p_f = 0.3;
  b.delta_f = 0.03;
  b.delta_m = 0.03;
  b.replicates = 10000;
  b.seed = 7002;
  const auto rb = run_power({b}, {TestId::RaXpar2, TestId::RaXparPooled1})[0];
  const double se = 2.0 * std::hypot(rb.tests[0].mc_se, rb.tests[1].mc_se);
  if (rb.tests[1].rate < rb.tests[0].rate - se) {
    pass = false;
    detail << "pooled " << rb.tests[1].rate << " below 2df " << rb.tests[0].rate;
  } else {
    detail << "homogeneous cell: 2df=" << rb.tests[0].rate
           << " pooled=" << rb.tests[1].rate;
  }
  report("7 PAR behavior", pass, detail.str());
}

void criterion8() {
  // scan: byte-identical output across thread counts
  std::ostringstream tsv;
  tsv << "chrom\tpos\tid\tref\talt\tregion\tf0\tf1\tf2\tm0\tm1\tm2\n";
  for (const auto& c : table3_counts()) {
    const auto& l = *c.locus;
    tsv << l.chrom << '\t' << l.pos << '\t' << l.id << '\t' << l.ref << '\t' << l.alt
        << '\t' << region_name(c.region) << '\t' << c.f0 << '\t' << c.f1 << '\t'
        << c.f2 << '\t' << c.m0 << '\t' << c.m1 << '\t' << c.m2 << '\n';
  }
  std::istringstream in1(tsv.str());
  const auto rows = parse_counts_stream(in1, true, nullptr);
  auto render = [&](int threads) {
    ScanConfig cfg;
    cfg.threads = threads;
    const auto recs = scan_records(rows, cfg);
    std::ostringstream out;
    write_results_tsv(out, recs, tests_in_records(recs));
    write_plot_tsv(out, recs);
    return out.str();
  };
  bool pass = render(1) == render(8);

  // simulation: identical reports for identical seeds
  SimScenario s;
  s.f = 300;
  s.m = 300;
  s.p_f = 0.25;
  s.replicates = 2000;
  s.seed = 808;
  const auto r1 = run_t1e(s, kNprPanel);
  const auto r2 = run_t1e(s, kNprPanel);
  for (std::size_t i = 0; i < r1.tests.size(); ++i) {
    if (r1.tests[i].rejections != r2.tests[i].rejections) pass = false;
  }
  if (mc_mixture_quantile(0.05, 0.4, 200000, 5) !=
      mc_mixture_quantile(0.05, 0.4, 200000, 5)) {
    pass = false;
  }
  report("8 determinism", pass);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
