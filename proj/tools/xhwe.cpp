#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xhwe/null_dist.hpp"
#include "xhwe/scan.hpp"
#include "xhwe/simlab.hpp"
#include "xhwe/table3.hpp"
#include "xhwe/tests.hpp"

namespace {

using namespace xhwe;

std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<TestId> parse_test_list(const std::string& arg) {
  std::vector<TestId> tests;
  if (arg.empty() || arg == "default") return tests;
  for (const auto& name : split_list(arg)) {
    const auto id = parse_test_id(name);
    if (!id) throw CLI::ValidationError("--tests", "unknown test id: " + name);
    tests.push_back(*id);
  }
  return tests;
}

int cmd_scan(const ScanConfig& config) {
  std::vector<ParseIssue> issues;
  ScanConfig cfg = config;
  try {
    const ScanSummary summary = run_scan(cfg);
    std::printf("rows=%zu retained=%zu filtered=%zu hits=%zu\n", summary.rows_in,
                summary.retained, summary.filtered, summary.hits);
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return config.strict && std::string(e.what()).find("line ") == 0 ? 2 : 1;
  }
  return 0;
}

// key = value config; list values are comma-separated.
std::map<std::string, std::string> read_keyvalue_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 std::uint64_t seed_override, bool has_seed_override) {
  const auto kv = read_keyvalue_config(config_path);
  auto get = [&](const std::string& key, const std::string& dflt) {
    const auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  };

  SimScenario base;
  base.f = std::stoll(get("f", "500"));
  base.m = std::stoll(get("m", "500"));
  base.replicates = std::stoll(get("replicates", "10000"));
  base.alpha = std::stod(get("alpha", "0.05"));
  base.seed = std::stoull(get("seed", "1"));
  if (has_seed_override) base.seed = seed_override;
  const auto region = parse_region(get("region", "npr"));
  if (!region) throw std::runtime_error("bad region in config");
  base.region = *region;

  std::vector<double> p_f_list, sdmaf_list, delta_f_list, delta_m_list;
  for (const auto& s : split_list(get("p_f", "0.3"))) p_f_list.push_back(std::stod(s));
  for (const auto& s : split_list(get("sdmaf", "0"))) sdmaf_list.push_back(std::stod(s));
  for (const auto& s : split_list(get("delta_f", "0"))) delta_f_list.push_back(std::stod(s));
  for (const auto& s : split_list(get("delta_m", "0"))) delta_m_list.push_back(std::stod(s));

  std::vector<TestId> tests = parse_test_list(get("tests", "default"));
  if (tests.empty()) tests = default_tests(base.region);

  std::vector<SimScenario> grid;
  std::uint64_t cell = 0;
  for (double pf : p_f_list) {
    for (double sd : sdmaf_list) {
      for (double df : delta_f_list) {
        for (double dm : delta_m_list) {
          SimScenario s = base;
          s.p_f = pf;
          s.sdmaf = sd;
          s.delta_f = df;
          s.delta_m = dm;
          s.seed = base.seed + 1000003ULL * ++cell;  // distinct stream per cell
          grid.push_back(s);
        }
      }
    }
  }

  const std::vector<RejectionReport> reports = run_power(grid, tests);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    out = &file;
  }
  *out << "f\tm\tregion\tp_f\tsdmaf\tdelta_f\tdelta_m\treplicates\talpha\ttest"
          "\trate\tmc_se\tci99_lo\tci99_hi\tdegenerate\n";
  for (const auto& rep : reports) {
    for (const auto& tr : rep.tests) {
      char buf[256];
      std::snprintf(buf, sizeof(buf),
                    "%lld\t%lld\t%s\t%g\t%g\t%g\t%g\t%lld\t%g\t%s\t%.6f\t%.6f\t%.6f"
                    "\t%.6f\t%lld\n",
                    static_cast<long long>(rep.scenario.f),
                    static_cast<long long>(rep.scenario.m),
                    region_name(rep.scenario.region).c_str(), rep.scenario.p_f,
                    rep.scenario.sdmaf, rep.scenario.delta_f, rep.scenario.delta_m,
                    static_cast<long long>(rep.scenario.replicates),
                    rep.scenario.alpha, test_id_name(tr.test).c_str(), tr.rate,
                    tr.mc_se, tr.ci99_lo, tr.ci99_hi,
                    static_cast<long long>(tr.degenerate));
      *out << buf;
    }
  }
  return 0;
}

double chisq_quantile(double alpha, int df) {
  double lo = 0.0, hi = 1.0;
  while (chisq_sf(hi, df) > alpha) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (chisq_sf(mid, df) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

int cmd_dist(const std::string& null_spec, double x, bool has_x, double alpha,
             bool has_alpha, std::int64_t mc_draws, std::uint64_t seed) {
  int df = 0;
  double w = -1.0;
  if (null_spec.rfind("chisq:", 0) == 0) {
    df = std::stoi(null_spec.substr(6));
  } else if (null_spec.rfind("mixture:", 0) == 0) {
    w = std::stod(null_spec.substr(8));
  } else {
    std::fprintf(stderr, "error: --null must be chisq:<df> or mixture:<w>\n");
    return 1;
  }
  if (has_x) {
    const double log_sf = df > 0 ? chisq_log_sf(x, df) : mixture_log_sf(x, w);
    std::printf("sf(%g) = %.12g  (-log10 p = %.6f)\n", x, std::exp(log_sf),
                -log_sf / M_LN10);
  }
  if (has_alpha) {
    const double q = df > 0 ? chisq_quantile(alpha, df) : mixture_quantile(alpha, w);
    std::printf("quantile(alpha=%g) = %.8f\n", alpha, q);
    if (mc_draws > 0 && w >= 0.0) {
      std::printf("mc_quantile(alpha=%g, draws=%lld, seed=%llu) = %.8f\n", alpha,
                  static_cast<long long>(mc_draws),
                  static_cast<unsigned long long>(seed),
                  mc_mixture_quantile(alpha, w, mc_draws, seed));
    }
  }
  if (!has_x && !has_alpha) {
    std::fprintf(stderr, "error: provide --x and/or --alpha\n");
    return 1;
  }
  return 0;
}

int cmd_validate_table3() {
  const Table3Report report = validate_table3();
  for (const auto& c : report.checks) {
    std::printf("%-12s %-22s published=%8.3f recomputed=%8.3f dev=%6.3f  %s\n",
                c.snp.c_str(), test_id_name(c.test).c_str(), c.published_neglog10,
                c.recomputed_neglog10, c.deviation, c.pass ? "PASS" : "FAIL");
  }
  std::printf("%s\n", report.pass ? "ALL ROWS PASS" : "FAILURES PRESENT");
  return report.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HWE and sdMAF tests for autosomal, X NPR and X PAR SNPs"};
  app.require_subcommand(1);

  // scan
  auto* scan = app.add_subcommand("scan", "run tests over a genotype-count table");
  ScanConfig config;
  std::string tests_arg = "default";
  scan->add_option("--input", config.input_path, "counts TSV")->required();
  scan->add_option("--tests", tests_arg, "comma list of test ids, or 'default'");
  scan->add_option("--threshold", config.threshold, "significance threshold");
  scan->add_option("--maf-filter", config.maf_filter, "minimum MAF in each sample");
  scan->add_flag("--orient-female-minor", config.orient_female_minor,
                 "flip alleles so the female MAF allele is counted");
  scan->add_option("--threads", config.threads, "worker threads");
  scan->add_flag("--strict", config.strict, "fail hard on malformed rows");
  scan->add_option("--out", config.out_path, "results TSV");
  scan->add_option("--hits", config.hits_path, "significant-hits TSV");
  scan->add_option("--plot", config.plot_path, "plot-data TSV");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "type-I-error / power study");
  std::string sim_config, sim_out;
  std::uint64_t sim_seed = 0;
  simulate->add_option("--config", sim_config, "key=value scenario config")->required();
  simulate->add_option("--out", sim_out, "rates TSV (default stdout)");
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "override config seed");

  // dist
  auto* dist = app.add_subcommand("dist", "evaluate null distributions");
  std::string null_spec;
  double dist_x = 0.0, dist_alpha = 0.0;
  std::int64_t mc_draws = 0;
  std::uint64_t dist_seed = 1;
  dist->add_option("--null", null_spec, "chisq:<df> or mixture:<w>")->required();
  auto* x_opt = dist->add_option("--x", dist_x, "statistic value");
  auto* a_opt = dist->add_option("--alpha", dist_alpha, "tail probability");
  dist->add_option("--mc-draws", mc_draws, "Monte Carlo draws for the quantile oracle");
  dist->add_option("--seed", dist_seed, "Monte Carlo seed");

  // validate-table3
  app.add_subcommand("validate-table3",
                     "recompute the embedded published-results fixture");

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan->parsed()) {
      config.tests = parse_test_list(tests_arg);
      return cmd_scan(config);
    }
    if (simulate->parsed()) {
      return cmd_simulate(sim_config, sim_out, sim_seed, seed_opt->count() > 0);
    }
    if (dist->parsed()) {
      return cmd_dist(null_spec, dist_x, x_opt->count() > 0, dist_alpha,
                      a_opt->count() > 0, mc_draws, dist_seed);
    }
    return cmd_validate_table3();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
