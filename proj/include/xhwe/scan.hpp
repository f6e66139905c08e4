#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xhwe/tests.hpp"
#include "xhwe/types.hpp"

namespace xhwe {

struct ScanConfig {
  std::string input_path;
  std::vector<TestId> tests;  // empty = per-region defaults
  double threshold = 5e-8;
  double maf_filter = 0.05;  // applied to female, male and pooled MAF
  bool orient_female_minor = false;
  int threads = 1;
  bool strict = false;
  std::string out_path;
  std::string hits_path;
  std::string plot_path;
};

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

/// Parses the tab-separated counts table. In strict mode the first
/// malformed row throws; otherwise bad rows are reported in `issues` and
/// skipped.
std::vector<GenotypeCounts> parse_counts_table(const std::string& path, bool strict,
                                               std::vector<ParseIssue>* issues);

std::vector<GenotypeCounts> parse_counts_stream(std::istream& in, bool strict,
                                                std::vector<ParseIssue>* issues);

struct TestOutcome {
  TestId test;
  std::optional<TestResult> result;
  std::string error;  // error code name when the test could not run
};

struct ScanRecord {
  std::size_t row_index = 0;
  GenotypeCounts counts;  // after any allele flip
  AlleleStats stats;
  bool flipped = false;
  bool filtered = false;  // failed the MAF filter; tests not run
  std::vector<TestOutcome> outcomes;

  bool degenerate() const;
  bool significant(double threshold) const;
};

struct ScanSummary {
  std::size_t rows_in = 0;
  std::size_t retained = 0;
  std::size_t filtered = 0;
  std::size_t hits = 0;
};

/// Runs the selected tests on every record. Output order always matches
/// input order regardless of thread count.
std::vector<ScanRecord> scan_records(const std::vector<GenotypeCounts>& rows,
                                     const ScanConfig& config);

ScanSummary run_scan(const ScanConfig& config);

void write_results_tsv(std::ostream& out, const std::vector<ScanRecord>& records,
                       const std::vector<TestId>& all_tests);
void write_hits_tsv(std::ostream& out, const std::vector<ScanRecord>& records,
                    const std::vector<TestId>& all_tests, double threshold);
void write_plot_tsv(std::ostream& out, const std::vector<ScanRecord>& records);

/// Union of tests that ran on any record, in registry order; the column set
/// of the results table.
std::vector<TestId> tests_in_records(const std::vector<ScanRecord>& records);

std::string format_pvalue(double p, double neglog10_p);

}  // namespace xhwe
