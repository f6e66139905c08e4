#include "xhwe/null_dist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "xhwe/rng.hpp"
#include "xhwe/types.hpp"

namespace xhwe {

namespace {

constexpr double kLogHalfLn2Pi = 0.9189385332046727;  // 0.5*ln(2*pi)

// Regularized upper incomplete gamma Q(a, x) in log space.
// Series for x < a+1, continued fraction otherwise.
double log_gamma_q(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series, then log1p(-P).
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    const double log_p = log_prefix + std::log(sum);
    const double p = std::exp(log_p);
    if (p >= 1.0) return -std::numeric_limits<double>::infinity();
    return std::log1p(-p);
  }
  // Lentz continued fraction for Q(a,x).
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return log_prefix + std::log(h);
}

// 32-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; symmetric).
constexpr std::array<double, 16> kGlNodes = {
    0.0483076656877383, 0.1444719615827965, 0.2392873622521371, 0.3318686022821277,
    0.4213512761306353, 0.5068999089322294, 0.5877157572407623, 0.6630442669302152,
    0.7321821187402897, 0.7944837959679424, 0.8493676137325700, 0.8963211557660521,
    0.9349060759377397, 0.9647622555875064, 0.9856115115452684, 0.9972638618494816};
constexpr std::array<double, 16> kGlWeights = {
    0.0965400885147278, 0.0956387200792749, 0.0938443990808046, 0.0911738786957639,
    0.0876520930044038, 0.0833119242269467, 0.0781938957870703, 0.0723457941088485,
    0.0658222227763618, 0.0586840934785355, 0.0509980592623762, 0.0428358980222267,
    0.0342738629130214, 0.0253920653092621, 0.0162743947309057, 0.0070186100094701};

double logsumexp(const std::vector<double>& v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace

double log_erfc(double y) {
  if (y < 8.0) return std::log(std::erfc(y));
  // Asymptotic expansion: erfc(y) = exp(-y^2)/(y*sqrt(pi)) * sum_k (-1)^k (2k-1)!!/(2y^2)^k
  const double inv2y2 = 1.0 / (2.0 * y * y);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 10; ++k) {
    term *= -(2.0 * k - 1.0) * inv2y2;
    sum += term;
  }
  return -y * y - std::log(y) - 0.5 * std::log(M_PI) + std::log(sum);
}

double chisq_log_sf(double x, int df) {
  if (df < 1) throw XhweError(ErrorCode::InvalidDf, "df must be >= 1");
  if (x < 0.0) throw XhweError(ErrorCode::NegativeStatistic, "statistic must be >= 0");
  if (x == 0.0) return 0.0;
  if (df == 1) return log_erfc(std::sqrt(x / 2.0));
  if (df == 2) return -x / 2.0;
  return log_gamma_q(df / 2.0, x / 2.0);
}

double chisq_sf(double x, int df) { return std::exp(chisq_log_sf(x, df)); }

double mixture_log_sf(double x, double w) {
  if (w < 0.0 || w > 1.0) {
    throw XhweError(ErrorCode::WeightOutOfRange, "mixture weight must be in [0,1]");
  }
  if (x < 0.0) throw XhweError(ErrorCode::NegativeStatistic, "statistic must be >= 0");
  if (x == 0.0) return 0.0;
  if (w == 0.0) return chisq_log_sf(x, 1);
  if (w == 1.0) return chisq_log_sf(x, 2);

  // P(X1 + w*Z^2 > x) with Z standard normal:
  //   = 2 * int_0^z0 phi(z) * P(X1 > x - w z^2) dz + P(Z^2 > x/w),  z0 = sqrt(x/w).
  // Panelled Gauss-Legendre, accumulated in log space for deep tails.
  const double z0 = std::sqrt(x / w);
  const int panels = std::max(16, static_cast<int>(std::ceil(z0 * 4.0)));
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(panels) * 32 + 1);
  const double h = z0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    const double half = 0.5 * h;
    for (int i = 0; i < 16; ++i) {
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        const double z = mid + sgn * half * kGlNodes[i];
        const double u = x - w * z * z;
        const double log_phi = -0.5 * z * z - kLogHalfLn2Pi;
        const double log_q = u <= 0.0 ? 0.0 : log_erfc(std::sqrt(u / 2.0));
        logs.push_back(std::log(2.0 * half * kGlWeights[i]) + log_phi + log_q);
      }
    }
  }
  logs.push_back(log_erfc(z0 / std::sqrt(2.0)));  // P(Z^2 >= x/w)
  return std::min(0.0, logsumexp(logs));
}

double mixture_sf(double x, double w) { return std::exp(mixture_log_sf(x, w)); }

double mixture_quantile(double alpha, double w) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw XhweError(ErrorCode::AlphaOutOfRange, "alpha must be in (0,1)");
  }
  if (w < 0.0 || w > 1.0) {
    throw XhweError(ErrorCode::WeightOutOfRange, "mixture weight must be in [0,1]");
  }
  double lo = 0.0;
  double hi = 1.0;
  while (mixture_sf(hi, w) > alpha) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mixture_sf(mid, w) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double mc_mixture_quantile(double alpha, double w, std::int64_t draws,
                           std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw XhweError(ErrorCode::AlphaOutOfRange, "alpha must be in (0,1)");
  }
  if (w < 0.0 || w > 1.0) {
    throw XhweError(ErrorCode::WeightOutOfRange, "mixture weight must be in [0,1]");
  }
  if (draws < 1) throw XhweError(ErrorCode::EmptyRun, "draws must be >= 1");
  std::vector<double> samples(static_cast<std::size_t>(draws));
  CounterRng rng(seed, 0);
  for (auto& s : samples) s = rng.chisq1() + w * rng.chisq1();
  auto k = static_cast<std::size_t>((1.0 - alpha) * static_cast<double>(draws));
  k = std::min(k, samples.size() - 1);
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(k),
                   samples.end());
  return samples[k];
}

double NullSpec::sf(double x) const { return std::exp(log_sf(x)); }

double NullSpec::log_sf(double x) const {
  return kind == Kind::ChiSq ? chisq_log_sf(x, df) : mixture_log_sf(x, weight);
}

}  // namespace xhwe
