#include "xhwe/table3.hpp"

#include <cmath>

namespace xhwe {

namespace {

Table3Row npr_row(std::string id, std::int64_t pos, std::string ref, std::string alt,
                  double delta_f, double p_f, double p_m, double p_sdmaf,
                  double p_joint, double p_pooled, double p_female) {
  Table3Row r;
  r.locus = {"X", pos, std::move(id), std::move(ref), std::move(alt)};
  r.region = Region::X_NPR;
  r.delta_f = delta_f;
  r.delta_m = 0.0;
  r.p_f = p_f;
  r.p_m = p_m;
  r.published = {{TestId::SdmafRobust, p_sdmaf},
                 {TestId::RaXnprJoint2, p_joint},
                 {TestId::RaXnprPooled1, p_pooled},
                 {TestId::RaXnprFemale1, p_female}};
  return r;
}

Table3Row par_row(std::string id, std::int64_t pos, std::string ref, std::string alt,
                  double delta_f, double delta_m, double p_f, double p_m,
                  double p_sdmaf, double p_pooled, double p_2df) {
  Table3Row r;
  r.locus = {"X", pos, std::move(id), std::move(ref), std::move(alt)};
  r.region = Region::X_PAR;
  r.delta_f = delta_f;
  r.delta_m = delta_m;
  r.p_f = p_f;
  r.p_m = p_m;
  r.published = {{TestId::SdmafRobust, p_sdmaf},
                 {TestId::RaXparPooled1, p_pooled},
                 {TestId::RaXpar2, p_2df}};
  return r;
}

}  // namespace

const std::vector<Table3Row>& table3_rows() {
  static const std::vector<Table3Row> rows = {
      // (a) NPR SNPs
      npr_row("rs6655837", 3448664, "A", "G", -0.098, 0.405, 0.297,
              2.83e-04, 1.07e-15, 2.21e-14, 7.26e-14),
      npr_row("rs1278131", 3455479, "A", "C", -0.067, 0.296, 0.266,
              0.292, 1.01e-08, 2.13e-09, 4.11e-09),
      npr_row("rs6612851", 57025923, "C", "T", -0.065, 0.272, 0.329,
              0.058, 1.08e-08, 7.83e-09, 1.60e-09),
      npr_row("rs7879488", 64320997, "A", "G", 0.024, 0.074, 0.070,
              0.796, 4.00e-10, 4.92e-11, 1.13e-10),
      npr_row("X_105854847", 105854847, "T", "C", 0.087, 0.132, 0.085,
              0.045, 5.63e-53, 2.88e-53, 1.94e-43),
      npr_row("rs28788859", 110914049, "G", "A", -0.078, 0.467, 0.513,
              0.160, 2.81e-08, 9.22e-09, 7.60e-09),
      npr_row("rs859902", 142631953, "T", "C", 0.027, 0.092, 0.066,
              0.175, 2.71e-10, 8.25e-11, 2.62e-09),
      npr_row("rs5936969", 69163175, "C", "T", -0.059, 0.293, 0.177,
              8.98e-06, 9.88e-11, 2.70e-08, 1.67e-07),
      npr_row("rs764585100", 107457632, "A", "T", 0.023, 0.062, 0.142,
              3.91e-04, 1.06e-10, 7.80e-08, 8.21e-13),
      npr_row("rs5968817", 84588702, "A", "C", 0.017, 0.061, 0.085,
              0.197, 2.12e-06, 9.04e-07, 4.38e-08),
      npr_row("rs73550265", 96543648, "T", "C", 0.015, 0.051, 0.066,
              0.352, 3.78e-07, 9.14e-08, 5.30e-09),
      npr_row("rs150556780", 145219770, "G", "A", 0.021, 0.076, 0.130,
              0.015, 5.56e-07, 3.69e-06, 3.90e-08),
      // (b) PAR1 SNPs
      par_row("rs867436760", 11391, "A", "G", -0.119, -0.108, 0.382, 0.386,
              0.852, 1.03e-34, 1.27e-33),
      par_row("rs73178918", 1184574, "C", "G", -0.097, -0.103, 0.360, 0.354,
              0.775, 8.99e-29, 1.13e-27),
      par_row("rs184807393", 249017, "A", "G", 0.049, 0.035, 0.247, 0.282,
              0.198, 2.54e-08, 8.12e-08),
      par_row("rs2259750", 2387607, "G", "A", 0.002, -0.089, 0.113, 0.460,
              1.05e-66, 1.39e-01, 1.75e-09),
      par_row("rs2857317", 2393813, "A", "G", 0.001, -0.179, 0.119, 0.547,
              1.47e-152, 2.21e-06, 9.74e-37),
      // (c) PAR2 SNPs
      par_row("rs306932", 153946131, "C", "T", 0.004, -0.151, 0.177, 0.576,
              1.97e-95, 5.94e-04, 3.87e-27),
      par_row("rs306921", 153949768, "A", "T", 0.012, -0.131, 0.268, 0.601,
              4.27e-52, 2.10e-03, 2.58e-21),
      par_row("rs306903", 153964583, "C", "T", -0.007, -0.133, 0.240, 0.598,
              7.52e-67, 1.58e-04, 7.55e-22),
      par_row("rs306898", 153972806, "C", "T", -0.001, -0.100, 0.333, 0.650,
              4.37e-43, 1.44e-02, 4.96e-14),
  };
  return rows;
}

GenotypeCounts reconstruct_counts(const Table3Row& row, std::int64_t f,
                                  std::int64_t m) {
  GenotypeCounts c;
  c.region = row.region;
  c.locus = row.locus;
  c.f2 = std::llround(f * (row.delta_f + row.p_f * row.p_f));
  c.f1 = std::llround(2.0 * f * row.p_f) - 2 * c.f2;
  c.f0 = f - c.f1 - c.f2;
  if (row.region == Region::X_NPR) {
    c.m2 = std::llround(m * row.p_m);
    c.m1 = 0;
    c.m0 = m - c.m2;
  } else {
    c.m2 = std::llround(m * (row.delta_m + row.p_m * row.p_m));
    c.m1 = std::llround(2.0 * m * row.p_m) - 2 * c.m2;
    c.m0 = m - c.m1 - c.m2;
  }
  return validate(c);
}

std::vector<GenotypeCounts> table3_counts() {
  std::vector<GenotypeCounts> out;
  for (const auto& row : table3_rows()) out.push_back(reconstruct_counts(row));
  return out;
}

Table3Report validate_table3() {
  Table3Report report;
  for (const auto& row : table3_rows()) {
    const GenotypeCounts counts = reconstruct_counts(row);
    for (const auto& [test, published_p] : row.published) {
      const TestResult res = run_test(test, counts);
      Table3Check check;
      check.snp = row.locus.id;
      check.test = test;
      check.published_neglog10 = -std::log10(published_p);
      check.recomputed_neglog10 = res.neglog10_p;
      check.deviation = std::fabs(check.recomputed_neglog10 - check.published_neglog10);
      check.pass = check.deviation <= 0.5;
      report.pass = report.pass && check.pass;
      report.checks.push_back(check);
    }
  }
  return report;
}

}  // namespace xhwe
