#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace xhwe {

enum class Region { Autosome, X_NPR, X_PAR };

std::string region_name(Region r);
std::optional<Region> parse_region(const std::string& tag);

enum class ErrorCode {
  NegativeCount,
  NPRMaleHeterozygote,
  EmptySex,
  DegenerateLocus,
  WrongRegion,
  ExternalFrequencyOutOfRange,
  VarianceNonpositive,
  InvalidDf,
  NegativeStatistic,
  WeightOutOfRange,
  AlphaOutOfRange,
  InfeasibleDisequilibrium,
  EmptyRun,
};

std::string error_code_name(ErrorCode code);

class XhweError : public std::runtime_error {
public:
  XhweError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

struct LocusInfo {
  std::string chrom;
  std::int64_t pos = 0;
  std::string id;
  std::string ref;
  std::string alt;
};

/// Sex-stratified genotype counts for one bi-allelic SNP.
/// Female counts f0/f1/f2 are aa/Aa/AA. Male counts are aa/Aa/AA for
/// autosomes and PAR; for X NPR males are hemizygous and m0/m2 count the
/// a/A alleles with m1 required to be zero.
struct GenotypeCounts {
  Region region = Region::Autosome;
  std::int64_t f0 = 0, f1 = 0, f2 = 0;
  std::int64_t m0 = 0, m1 = 0, m2 = 0;
  std::optional<LocusInfo> locus;

  std::int64_t females() const { return f0 + f1 + f2; }
  std::int64_t males() const { return m0 + m1 + m2; }
};

/// Per-SNP allele-frequency and disequilibrium estimates. Sex-specific
/// fields are absent when that sex has no samples; delta_m/rho_m are also
/// absent for X NPR where males carry a single allele.
struct AlleleStats {
  std::optional<double> p_f;
  std::optional<double> p_m;
  std::optional<double> p_pooled;
  std::optional<double> delta_f;
  std::optional<double> delta_m;
  std::optional<double> rho_f;
  std::optional<double> rho_m;
  std::optional<double> sdmaf;  // p_f - p_m
};

/// Checks all type invariants; throws XhweError on violation.
const GenotypeCounts& validate(const GenotypeCounts& counts);

AlleleStats allele_stats(const GenotypeCounts& counts);

/// Swaps the roles of the two alleles (f0<->f2, m0<->m2). An involution.
GenotypeCounts relabel_alleles(const GenotypeCounts& counts);

}  // namespace xhwe
