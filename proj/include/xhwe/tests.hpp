#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xhwe/null_dist.hpp"
#include "xhwe/types.hpp"

namespace xhwe {

struct TestResult {
  double statistic = 0.0;
  NullSpec null;
  double p = 1.0;           // linear probability; flushes to 0 in deep tails
  double neglog10_p = 0.0;  // computed in log space, valid past underflow
  // (HWD part, sdMAF part) for decomposable statistics.
  std::optional<std::pair<double, double>> components;
  bool low_count_warning = false;
};

// --- Autosomal (and sex-pooled PAR) HWE tests ---

/// Classical 1 df goodness-of-fit HWE test on sex-pooled genotype counts,
/// with the allele frequency estimated from the same sample.
TestResult pearson_auto_1df(const GenotypeCounts& counts);

/// 2 df goodness-of-fit test against an externally specified frequency p.
/// components = the two terms of the equivalent HWD + frequency-consistency
/// reformulation.
TestResult pearson_auto_2df(const GenotypeCounts& counts, double p);

/// Score-test form n*rho^2 of the 1 df autosomal HWE test; numerically
/// identical to pearson_auto_1df but computed on an independent path.
TestResult ra_auto_1df(const GenotypeCounts& counts);

// --- X NPR tests (females diploid, males hemizygous) ---

/// 2 df joint test of HWE and sdMAF; score-test form with
/// components = (HWD-at-pooled-frequency term, sdMAF term).
TestResult ra_xnpr_joint_2df(const GenotypeCounts& counts);

/// Five-cell goodness-of-fit form of the joint test at the pooled
/// frequency (female genotypes plus male hemizygous alleles).
TestResult pearson_xnpr_fm(const GenotypeCounts& counts);

/// 1 df HWE test assuming no sdMAF (pooled frequency); chi-square(1) null.
TestResult ra_xnpr_pooled_1df(const GenotypeCounts& counts);

/// Female three-cell goodness-of-fit at the pooled frequency. Its null is
/// the mixture X1 + w*X2 with w = m/(2f+m), not a standard chi-square.
TestResult pearson_xnpr_pooled(const GenotypeCounts& counts);

/// 1 df female-only HWE test allowing sdMAF; males ignored entirely.
TestResult ra_xnpr_female_1df(const GenotypeCounts& counts);

/// 1 df test of sdMAF under HWE (the second term of the joint statistic).
TestResult sdmaf_component_hwe(const GenotypeCounts& counts);

/// HWD-robust 1 df sdMAF test: (p_f - p_m)^2 over a variance that inflates
/// each diploid sex's term by (1 + rho); valid for NPR, PAR and autosomes.
TestResult sdmaf_robust(const GenotypeCounts& counts);

// --- X PAR tests (both sexes diploid) ---

/// 2 df HWE test allowing sdMAF: f*rho_f^2 + m*rho_m^2, the sum of the two
/// sex-specific 1 df tests; components = (female term, male term).
TestResult ra_xpar_2df(const GenotypeCounts& counts);

/// 1 df HWE test assuming no sdMAF: the classical pooled test on summed
/// genotype counts.
TestResult ra_xpar_pooled_1df(const GenotypeCounts& counts);

struct JointDecomposition {
  TestResult hwd;
  TestResult sdmaf;
  double identity_residual = 0.0;
};

/// Splits the NPR joint statistic into its independent HWD and sdMAF parts
/// and reports the reconstruction residual.
JointDecomposition decompose_joint(const GenotypeCounts& counts);

// --- test registry (CLI / scan selection) ---

enum class TestId {
  PearsonAuto1,
  RaAuto1,
  RaXnprJoint2,
  PearsonXnprFm,
  RaXnprPooled1,
  PearsonXnprPooled,
  RaXnprFemale1,
  SdmafComponentHwe,
  SdmafRobust,
  RaXpar2,
  RaXparPooled1,
};

std::string test_id_name(TestId id);
std::optional<TestId> parse_test_id(const std::string& name);
std::vector<TestId> default_tests(Region region);
TestResult run_test(TestId id, const GenotypeCounts& counts);

}  // namespace xhwe
