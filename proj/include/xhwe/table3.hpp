#pragma once

#include <string>
#include <vector>

#include "xhwe/tests.hpp"
#include "xhwe/types.hpp"

namespace xhwe {

/// One published significant AFR SNP: reported per-sex estimates plus the
/// reported p-value for each test column. Raw counts are not published;
/// they are reconstructed from the estimates (f = 336, m = 316).
struct Table3Row {
  LocusInfo locus;
  Region region;
  double delta_f;
  double delta_m;  // ignored for NPR
  double p_f;
  double p_m;
  // (test, published p-value) for each reported column
  std::vector<std::pair<TestId, double>> published;
};

const std::vector<Table3Row>& table3_rows();

/// Rebuilds integer genotype counts from reported (p, delta) estimates.
GenotypeCounts reconstruct_counts(const Table3Row& row, std::int64_t f = 336,
                                  std::int64_t m = 316);

std::vector<GenotypeCounts> table3_counts();

struct Table3Check {
  std::string snp;
  TestId test;
  double published_neglog10;
  double recomputed_neglog10;
  double deviation;  // |recomputed - published|
  bool pass;         // deviation <= 0.5
};

struct Table3Report {
  std::vector<Table3Check> checks;
  bool pass = true;
};

/// Recomputes every reported p-value from reconstructed counts and compares
/// -log10 p against the published value (tolerance 0.5).
Table3Report validate_table3();

}  // namespace xhwe
