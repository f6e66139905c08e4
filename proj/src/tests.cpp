#include "xhwe/tests.hpp"

#include <algorithm>
#include <cmath>

namespace xhwe {

namespace {

TestResult finish(double stat, NullSpec null,
                  std::optional<std::pair<double, double>> components,
                  bool warn) {
  TestResult r;
  r.statistic = stat;
  r.null = null;
  const double log_p = null.log_sf(stat);
  r.p = std::exp(log_p);
  r.neglog10_p = std::max(0.0, -log_p / M_LN10);
  r.components = components;
  r.low_count_warning = warn;
  return r;
}

void require_region(const GenotypeCounts& c, Region want) {
  if (c.region != want) {
    throw XhweError(ErrorCode::WrongRegion,
                    "test requires region " + region_name(want) + ", got " +
                        region_name(c.region));
  }
}

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw XhweError(ErrorCode::DegenerateLocus,
                    std::string(what) + " is monomorphic in the required sample");
  }
}

struct Pooled {
  double n0, n1, n2, n, p;
};

Pooled pooled_diploid(const GenotypeCounts& c) {
  Pooled out;
  out.n0 = static_cast<double>(c.f0 + c.m0);
  out.n1 = static_cast<double>(c.f1 + c.m1);
  out.n2 = static_cast<double>(c.f2 + c.m2);
  out.n = out.n0 + out.n1 + out.n2;
  if (out.n <= 0) throw XhweError(ErrorCode::EmptySex, "no samples");
  out.p = (out.n1 + 2.0 * out.n2) / (2.0 * out.n);
  return out;
}

// Three-cell goodness-of-fit of (n0, n1, n2) against HWE proportions at p.
double gof3(double n0, double n1, double n2, double n, double p) {
  const double q = 1.0 - p;
  const double e0 = n * q * q;
  const double e1 = n * 2.0 * p * q;
  const double e2 = n * p * p;
  const double d0 = n0 - e0;
  const double d1 = n1 - e1;
  const double d2 = n2 - e2;
  return d0 * d0 / e0 + d1 * d1 / e1 + d2 * d2 / e2;
}

bool low_counts(double n, double p) { return n < 30.0 || n * 2.0 * p * (1.0 - p) < 5.0; }

// Internal 1 df pooled Pearson HWE test; shared by the autosomal and the
// PAR no-sdMAF entry points.
TestResult pooled_pearson_1df(const GenotypeCounts& c) {
  validate(c);
  const Pooled pool = pooled_diploid(c);
  require_open_unit(pool.p, "pooled frequency");
  const double stat = gof3(pool.n0, pool.n1, pool.n2, pool.n, pool.p);
  return finish(stat, NullSpec::chisq(1), std::nullopt, low_counts(pool.n, pool.p));
}

}  // namespace

TestResult pearson_auto_1df(const GenotypeCounts& counts) {
  if (counts.region == Region::X_NPR) {
    throw XhweError(ErrorCode::WrongRegion, "pooled autosomal test is invalid for X NPR");
  }
  return pooled_pearson_1df(counts);
}

TestResult pearson_auto_2df(const GenotypeCounts& counts, double p) {
  if (counts.region == Region::X_NPR) {
    throw XhweError(ErrorCode::WrongRegion, "pooled autosomal test is invalid for X NPR");
  }
  validate(counts);
  if (!(p > 0.0 && p < 1.0)) {
    throw XhweError(ErrorCode::ExternalFrequencyOutOfRange,
                    "external frequency must be in (0,1)");
  }
  const Pooled pool = pooled_diploid(counts);
  const double stat = gof3(pool.n0, pool.n1, pool.n2, pool.n, p);
  // HWD + frequency-consistency reformulation of the same statistic.
  const double p2 = pool.n2 / pool.n;
  const double d = p2 - pool.p * pool.p + (pool.p - p) * (pool.p - p);
  const double t1 = d * d / (p * p * (1.0 - p) * (1.0 - p) / pool.n);
  const double t2 = (pool.p - p) * (pool.p - p) / (p * (1.0 - p) / (2.0 * pool.n));
  return finish(stat, NullSpec::chisq(2), std::make_pair(t1, t2),
                low_counts(pool.n, p));
}

TestResult ra_auto_1df(const GenotypeCounts& counts) {
  if (counts.region == Region::X_NPR) {
    throw XhweError(ErrorCode::WrongRegion, "pooled autosomal test is invalid for X NPR");
  }
  validate(counts);
  const Pooled pool = pooled_diploid(counts);
  require_open_unit(pool.p, "pooled frequency");
  const double p2 = pool.n2 / pool.n;
  const double delta = p2 - pool.p * pool.p;
  const double denom = pool.p * pool.p * (1.0 - pool.p) * (1.0 - pool.p) / pool.n;
  return finish(delta * delta / denom, NullSpec::chisq(1), std::nullopt,
                low_counts(pool.n, pool.p));
}

namespace {

struct NprStats {
  double f, m, pf, pm, p, delta_f, w;
};

NprStats npr_stats(const GenotypeCounts& c, bool need_males) {
  require_region(c, Region::X_NPR);
  validate(c);
  NprStats s;
  s.f = static_cast<double>(c.females());
  s.m = static_cast<double>(c.males());
  if (s.f <= 0) throw XhweError(ErrorCode::EmptySex, "no female samples");
  if (need_males && s.m <= 0) throw XhweError(ErrorCode::EmptySex, "no male samples");
  s.pf = (c.f1 + 2.0 * c.f2) / (2.0 * s.f);
  s.pm = s.m > 0 ? c.m2 / s.m : 0.0;
  s.p = (c.f1 + 2.0 * c.f2 + c.m2) / (2.0 * s.f + s.m);
  s.delta_f = c.f2 / s.f - s.pf * s.pf;
  s.w = s.m / (2.0 * s.f + s.m);
  return s;
}

double npr_hwd_term(const NprStats& s) {
  // m = 0 is the w -> 0 limit: the sdMAF contribution vanishes.
  const double sd2 = s.m > 0 ? (s.pf - s.pm) * (s.pf - s.pm) : 0.0;
  const double num = s.delta_f + s.w * s.w * sd2;
  return num * num / (s.p * s.p * (1.0 - s.p) * (1.0 - s.p) / s.f);
}

double npr_sdmaf_term(const NprStats& s) {
  const double sd2 = (s.pf - s.pm) * (s.pf - s.pm);
  return sd2 / ((1.0 / (2.0 * s.f) + 1.0 / s.m) * s.p * (1.0 - s.p));
}

}  // namespace

TestResult ra_xnpr_joint_2df(const GenotypeCounts& counts) {
  const NprStats s = npr_stats(counts, true);
  require_open_unit(s.p, "pooled frequency");
  const double t1 = npr_hwd_term(s);
  const double t2 = npr_sdmaf_term(s);
  return finish(t1 + t2, NullSpec::chisq(2), std::make_pair(t1, t2),
                low_counts(s.f, s.p));
}

TestResult pearson_xnpr_fm(const GenotypeCounts& counts) {
  const NprStats s = npr_stats(counts, true);
  require_open_unit(s.p, "pooled frequency");
  double stat = gof3(counts.f0, counts.f1, counts.f2, s.f, s.p);
  const double e0 = s.m * (1.0 - s.p);
  const double e2 = s.m * s.p;
  const double d0 = counts.m0 - e0;
  const double d2 = counts.m2 - e2;
  stat += d0 * d0 / e0 + d2 * d2 / e2;
  return finish(stat, NullSpec::chisq(2), std::nullopt, low_counts(s.f, s.p));
}

TestResult ra_xnpr_pooled_1df(const GenotypeCounts& counts) {
  const NprStats s = npr_stats(counts, false);
  require_open_unit(s.p, "pooled frequency");
  return finish(npr_hwd_term(s), NullSpec::chisq(1), std::nullopt,
                low_counts(s.f, s.p));
}

TestResult pearson_xnpr_pooled(const GenotypeCounts& counts) {
  const NprStats s = npr_stats(counts, false);
  require_open_unit(s.p, "pooled frequency");
  const double stat = gof3(counts.f0, counts.f1, counts.f2, s.f, s.p);
  const double hwd = npr_hwd_term(s);
  const double sdm = s.m > 0 ? s.w * npr_sdmaf_term(s) : 0.0;
  return finish(stat, NullSpec::mixture(s.w), std::make_pair(hwd, sdm),
                low_counts(s.f, s.p));
}

TestResult ra_xnpr_female_1df(const GenotypeCounts& counts) {
  validate(counts);
  const double f = static_cast<double>(counts.females());
  if (f <= 0) throw XhweError(ErrorCode::EmptySex, "no female samples");
  const double pf = (counts.f1 + 2.0 * counts.f2) / (2.0 * f);
  require_open_unit(pf, "female frequency");
  const double delta_f = counts.f2 / f - pf * pf;
  const double stat = f * delta_f * delta_f / (pf * pf * (1.0 - pf) * (1.0 - pf));
  return finish(stat, NullSpec::chisq(1), std::nullopt, low_counts(f, pf));
}

TestResult sdmaf_component_hwe(const GenotypeCounts& counts) {
  const NprStats s = npr_stats(counts, true);
  require_open_unit(s.p, "pooled frequency");
  return finish(npr_sdmaf_term(s), NullSpec::chisq(1), std::nullopt,
                low_counts(s.f, s.p));
}

TestResult sdmaf_robust(const GenotypeCounts& counts) {
  validate(counts);
  const double f = static_cast<double>(counts.females());
  const double m = static_cast<double>(counts.males());
  if (f <= 0 || m <= 0) throw XhweError(ErrorCode::EmptySex, "both sexes required");
  const AlleleStats stats = allele_stats(counts);
  const double pf = *stats.p_f;
  const double pm = *stats.p_m;
  require_open_unit(pf, "female frequency");
  require_open_unit(pm, "male frequency");
  const double rho_f = *stats.rho_f;
  double var = pf * (1.0 - pf) * (1.0 + rho_f) / (2.0 * f);
  if (counts.region == Region::X_NPR) {
    var += pm * (1.0 - pm) / m;
  } else {
    var += pm * (1.0 - pm) * (1.0 + *stats.rho_m) / (2.0 * m);
  }
  if (!(var > 0.0)) {
    throw XhweError(ErrorCode::VarianceNonpositive, "sdMAF variance is not positive");
  }
  const double sd = pf - pm;
  return finish(sd * sd / var, NullSpec::chisq(1), std::nullopt,
                low_counts(f, pf) || low_counts(m, pm));
}

TestResult ra_xpar_2df(const GenotypeCounts& counts) {
  if (counts.region == Region::X_NPR) {
    throw XhweError(ErrorCode::WrongRegion,
                    "sex-stratified diploid test is invalid for X NPR");
  }
  validate(counts);
  const double f = static_cast<double>(counts.females());
  const double m = static_cast<double>(counts.males());
  if (f <= 0 || m <= 0) throw XhweError(ErrorCode::EmptySex, "both sexes required");
  const AlleleStats stats = allele_stats(counts);
  require_open_unit(*stats.p_f, "female frequency");
  require_open_unit(*stats.p_m, "male frequency");
  const double tf = f * (*stats.rho_f) * (*stats.rho_f);
  const double tm = m * (*stats.rho_m) * (*stats.rho_m);
  return finish(tf + tm, NullSpec::chisq(2), std::make_pair(tf, tm),
                low_counts(f, *stats.p_f) || low_counts(m, *stats.p_m));
}

TestResult ra_xpar_pooled_1df(const GenotypeCounts& counts) {
  if (counts.region == Region::X_NPR) {
    throw XhweError(ErrorCode::WrongRegion, "pooled diploid test is invalid for X NPR");
  }
  return pooled_pearson_1df(counts);
}

JointDecomposition decompose_joint(const GenotypeCounts& counts) {
  JointDecomposition out;
  out.hwd = ra_xnpr_pooled_1df(counts);
  out.sdmaf = sdmaf_component_hwe(counts);
  const TestResult joint = ra_xnpr_joint_2df(counts);
  out.identity_residual = joint.statistic - (out.hwd.statistic + out.sdmaf.statistic);
  return out;
}

std::string test_id_name(TestId id) {
  switch (id) {
    case TestId::PearsonAuto1: return "pearson_auto_1df";
    case TestId::RaAuto1: return "ra_auto_1df";
    case TestId::RaXnprJoint2: return "ra_xnpr_joint_2df";
    case TestId::PearsonXnprFm: return "pearson_xnpr_fm";
    case TestId::RaXnprPooled1: return "ra_xnpr_pooled_1df";
    case TestId::PearsonXnprPooled: return "pearson_xnpr_pooled";
    case TestId::RaXnprFemale1: return "ra_xnpr_female_1df";
    case TestId::SdmafComponentHwe: return "sdmaf_component_hwe";
    case TestId::SdmafRobust: return "sdmaf_robust";
    case TestId::RaXpar2: return "ra_xpar_2df";
    case TestId::RaXparPooled1: return "ra_xpar_pooled_1df";
  }
  return "?";
}

std::optional<TestId> parse_test_id(const std::string& name) {
  for (TestId id : {TestId::PearsonAuto1, TestId::RaAuto1, TestId::RaXnprJoint2,
                    TestId::PearsonXnprFm, TestId::RaXnprPooled1,
                    TestId::PearsonXnprPooled, TestId::RaXnprFemale1,
                    TestId::SdmafComponentHwe, TestId::SdmafRobust, TestId::RaXpar2,
                    TestId::RaXparPooled1}) {
    if (test_id_name(id) == name) return id;
  }
  return std::nullopt;
}

std::vector<TestId> default_tests(Region region) {
  switch (region) {
    case Region::Autosome:
      return {TestId::PearsonAuto1};
    case Region::X_NPR:
      return {TestId::RaXnprJoint2, TestId::RaXnprPooled1, TestId::PearsonXnprPooled,
              TestId::RaXnprFemale1, TestId::SdmafComponentHwe, TestId::SdmafRobust};
    case Region::X_PAR:
      return {TestId::RaXpar2, TestId::RaXparPooled1, TestId::SdmafRobust};
  }
  return {};
}

TestResult run_test(TestId id, const GenotypeCounts& counts) {
  switch (id) {
    case TestId::PearsonAuto1: return pearson_auto_1df(counts);
    case TestId::RaAuto1: return ra_auto_1df(counts);
    case TestId::RaXnprJoint2: return ra_xnpr_joint_2df(counts);
    case TestId::PearsonXnprFm: return pearson_xnpr_fm(counts);
    case TestId::RaXnprPooled1: return ra_xnpr_pooled_1df(counts);
    case TestId::PearsonXnprPooled: return pearson_xnpr_pooled(counts);
    case TestId::RaXnprFemale1: return ra_xnpr_female_1df(counts);
    case TestId::SdmafComponentHwe: return sdmaf_component_hwe(counts);
    case TestId::SdmafRobust: return sdmaf_robust(counts);
    case TestId::RaXpar2: return ra_xpar_2df(counts);
    case TestId::RaXparPooled1: return ra_xpar_pooled_1df(counts);
  }
  throw XhweError(ErrorCode::WrongRegion, "unknown test id");
}

}  // namespace xhwe
