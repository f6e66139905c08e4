#include "xhwe/types.hpp"

namespace xhwe {

std::string region_name(Region r) {
  switch (r) {
    case Region::Autosome: return "auto";
    case Region::X_NPR: return "npr";
    case Region::X_PAR: return "par";
  }
  return "?";
}

std::optional<Region> parse_region(const std::string& tag) {
  if (tag == "auto" || tag == "autosome") return Region::Autosome;
  if (tag == "npr" || tag == "x_npr") return Region::X_NPR;
  if (tag == "par" || tag == "x_par") return Region::X_PAR;
  return std::nullopt;
}

std::string error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::NPRMaleHeterozygote: return "NPRMaleHeterozygote";
    case ErrorCode::EmptySex: return "EmptySex";
    case ErrorCode::DegenerateLocus: return "DegenerateLocus";
    case ErrorCode::WrongRegion: return "WrongRegion";
    case ErrorCode::ExternalFrequencyOutOfRange: return "ExternalFrequencyOutOfRange";
    case ErrorCode::VarianceNonpositive: return "VarianceNonpositive";
    case ErrorCode::InvalidDf: return "InvalidDf";
    case ErrorCode::NegativeStatistic: return "NegativeStatistic";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::InfeasibleDisequilibrium: return "InfeasibleDisequilibrium";
    case ErrorCode::EmptyRun: return "EmptyRun";
  }
  return "Unknown";
}

const GenotypeCounts& validate(const GenotypeCounts& counts) {
  const std::int64_t c[6] = {counts.f0, counts.f1, counts.f2,
                             counts.m0, counts.m1, counts.m2};
  for (std::int64_t v : c) {
    if (v < 0) {
      throw XhweError(ErrorCode::NegativeCount, "genotype count is negative");
    }
  }
  if (counts.region == Region::X_NPR && counts.m1 != 0) {
    throw XhweError(ErrorCode::NPRMaleHeterozygote,
                    "male heterozygote count must be 0 for X NPR (hemizygous males)");
  }
  return counts;
}

AlleleStats allele_stats(const GenotypeCounts& counts) {
  validate(counts);
  AlleleStats s;
  const double f = static_cast<double>(counts.females());
  const double m = static_cast<double>(counts.males());

  if (f > 0) {
    const double pf = (counts.f1 + 2.0 * counts.f2) / (2.0 * f);
    s.p_f = pf;
    const double df = counts.f2 / f - pf * pf;
    s.delta_f = df;
    if (pf > 0.0 && pf < 1.0) s.rho_f = df / (pf * (1.0 - pf));
  }
  if (m > 0) {
    if (counts.region == Region::X_NPR) {
      s.p_m = counts.m2 / m;
    } else {
      const double pm = (counts.m1 + 2.0 * counts.m2) / (2.0 * m);
      s.p_m = pm;
      const double dm = counts.m2 / m - pm * pm;
      s.delta_m = dm;
      if (pm > 0.0 && pm < 1.0) s.rho_m = dm / (pm * (1.0 - pm));
    }
  }
  if (f + m > 0) {
    if (counts.region == Region::X_NPR) {
      if (2.0 * f + m > 0) {
        s.p_pooled = (counts.f1 + 2.0 * counts.f2 + counts.m2) / (2.0 * f + m);
      }
    } else {
      const double n1 = static_cast<double>(counts.f1 + counts.m1);
      const double n2 = static_cast<double>(counts.f2 + counts.m2);
      s.p_pooled = (n1 + 2.0 * n2) / (2.0 * (f + m));
    }
  }
  if (s.p_f && s.p_m) s.sdmaf = *s.p_f - *s.p_m;
  return s;
}

GenotypeCounts relabel_alleles(const GenotypeCounts& counts) {
  GenotypeCounts out = counts;
  std::swap(out.f0, out.f2);
  std::swap(out.m0, out.m2);
  if (out.locus) std::swap(out.locus->ref, out.locus->alt);
  return out;
}

}  // namespace xhwe
