#include "xhwe/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace xhwe {

namespace {

const char* kColumns[] = {"chrom", "pos", "id", "ref", "alt", "region",
                          "f0", "f1", "f2", "m0", "m1", "m2"};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::int64_t parse_count(const std::string& field, std::size_t line_no,
                         const char* col) {
  if (field.empty()) return 0;  // blank NPR male heterozygote cell
  std::size_t consumed = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(field, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != field.size()) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": CountParseError in column " + col + ": '" + field + "'");
  }
  return value;
}

double maf(double p) { return std::min(p, 1.0 - p); }

}  // namespace

std::vector<GenotypeCounts> parse_counts_stream(std::istream& in, bool strict,
                                                std::vector<ParseIssue>* issues) {
  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_tabs(line);
  std::vector<int> col_idx;
  for (const char* want : kColumns) {
    const auto it = std::find(header.begin(), header.end(), want);
    if (it == header.end()) {
      throw std::runtime_error(std::string("MissingColumn: header lacks '") + want + "'");
    }
    col_idx.push_back(static_cast<int>(it - header.begin()));
  }

  std::vector<GenotypeCounts> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const std::vector<std::string> fields = split_tabs(line);
      if (fields.size() < header.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": expected " + std::to_string(header.size()) +
                                 " columns, got " + std::to_string(fields.size()));
      }
      auto field = [&](int c) -> const std::string& {
        return fields[static_cast<std::size_t>(col_idx[static_cast<std::size_t>(c)])];
      };
      GenotypeCounts counts;
      LocusInfo locus;
      locus.chrom = field(0);
      locus.pos = parse_count(field(1), line_no, "pos");
      locus.id = field(2);
      locus.ref = field(3);
      locus.alt = field(4);
      counts.locus = locus;
      const auto region = parse_region(field(5));
      if (!region) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": BadRegionTag '" + field(5) + "'");
      }
      counts.region = *region;
      counts.f0 = parse_count(field(6), line_no, "f0");
      counts.f1 = parse_count(field(7), line_no, "f1");
      counts.f2 = parse_count(field(8), line_no, "f2");
      counts.m0 = parse_count(field(9), line_no, "m0");
      counts.m1 = parse_count(field(10), line_no, "m1");
      counts.m2 = parse_count(field(11), line_no, "m2");
      try {
        validate(counts);
      } catch (const XhweError& e) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": " +
                                 error_code_name(e.code()) + ": " + e.what());
      }
      rows.push_back(std::move(counts));
    } catch (const std::runtime_error& e) {
      if (strict) throw;
      if (issues) issues->push_back({line_no, e.what()});
    }
  }
  return rows;
}

std::vector<GenotypeCounts> parse_counts_table(const std::string& path, bool strict,
                                               std::vector<ParseIssue>* issues) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return parse_counts_stream(in, strict, issues);
}

bool ScanRecord::degenerate() const {
  for (const auto& o : outcomes) {
    if (o.error == error_code_name(ErrorCode::DegenerateLocus)) return true;
  }
  return false;
}

bool ScanRecord::significant(double threshold) const {
  for (const auto& o : outcomes) {
    if (o.result && o.result->p <= threshold) return true;
  }
  return false;
}

namespace {

ScanRecord process_row(std::size_t index, const GenotypeCounts& input,
                       const ScanConfig& config) {
  ScanRecord rec;
  rec.row_index = index;
  rec.counts = input;
  rec.stats = allele_stats(input);
  if (config.orient_female_minor && rec.stats.p_f && *rec.stats.p_f > 0.5) {
    rec.counts = relabel_alleles(input);
    rec.stats = allele_stats(rec.counts);
    rec.flipped = true;
  }
  if (config.maf_filter > 0.0) {
    const bool ok = rec.stats.p_f && rec.stats.p_m && rec.stats.p_pooled &&
                    maf(*rec.stats.p_f) >= config.maf_filter &&
                    maf(*rec.stats.p_m) >= config.maf_filter &&
                    maf(*rec.stats.p_pooled) >= config.maf_filter;
    if (!ok) {
      rec.filtered = true;
      return rec;
    }
  }
  const std::vector<TestId> tests =
      config.tests.empty() ? default_tests(rec.counts.region) : config.tests;
  for (TestId id : tests) {
    TestOutcome outcome;
    outcome.test = id;
    try {
      outcome.result = run_test(id, rec.counts);
    } catch (const XhweError& e) {
      outcome.error = error_code_name(e.code());
    }
    rec.outcomes.push_back(std::move(outcome));
  }
  return rec;
}

}  // namespace

std::vector<ScanRecord> scan_records(const std::vector<GenotypeCounts>& rows,
                                     const ScanConfig& config) {
  std::vector<ScanRecord> records(rows.size());
  const int threads = std::max(1, config.threads);
  if (threads == 1 || rows.size() < 2) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      records[i] = process_row(i, rows[i], config);
    }
    return records;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = static_cast<std::size_t>(t); i < rows.size();
           i += static_cast<std::size_t>(threads)) {
        records[i] = process_row(i, rows[i], config);
      }
    });
  }
  for (auto& th : pool) th.join();
  return records;
}

std::string format_pvalue(double p, double neglog10_p) {
  char buf[32];
  if (p > 0.0) {
    std::snprintf(buf, sizeof(buf), "%.2e", p);
    return buf;
  }
  // Underflowed linear value: rebuild mantissa/exponent from -log10 p.
  const double exp10 = std::floor(neglog10_p);
  double mant = std::pow(10.0, exp10 - neglog10_p + 1.0);
  std::int64_t e = static_cast<std::int64_t>(exp10) + 1;
  if (mant >= 9.995) {
    mant /= 10.0;
    --e;
  }
  std::snprintf(buf, sizeof(buf), "%.2fe-%lld", mant, static_cast<long long>(e));
  return buf;
}

namespace {

std::string fmt_freq(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", *v);
  return buf;
}

void write_record_row(std::ostream& out, const ScanRecord& rec,
                      const std::vector<TestId>& all_tests) {
  const LocusInfo locus = rec.counts.locus.value_or(LocusInfo{});
  out << locus.chrom << '\t' << locus.pos << '\t' << locus.id << '\t' << locus.ref
      << '\t' << locus.alt << '\t' << region_name(rec.counts.region);
  std::string flags;
  auto add_flag = [&](const char* f) {
    if (!flags.empty()) flags += ',';
    flags += f;
  };
  if (rec.flipped) add_flag("flipped");
  if (rec.filtered) add_flag("filtered");
  if (rec.degenerate()) add_flag("degenerate");
  for (const auto& o : rec.outcomes) {
    if (o.result && o.result->low_count_warning) {
      add_flag("low_count");
      break;
    }
  }
  out << '\t' << (flags.empty() ? "." : flags);
  out << '\t' << fmt_freq(rec.stats.p_f) << '\t' << fmt_freq(rec.stats.p_m) << '\t'
      << fmt_freq(rec.stats.p_pooled) << '\t' << fmt_freq(rec.stats.delta_f) << '\t'
      << fmt_freq(rec.stats.delta_m) << '\t' << fmt_freq(rec.stats.sdmaf);
  for (TestId id : all_tests) {
    const TestOutcome* found = nullptr;
    for (const auto& o : rec.outcomes) {
      if (o.test == id) {
        found = &o;
        break;
      }
    }
    if (found == nullptr) {
      out << "\tNA\tNA\tNA";
    } else if (found->result) {
      char stat[32], nl[32];
      std::snprintf(stat, sizeof(stat), "%.6g", found->result->statistic);
      std::snprintf(nl, sizeof(nl), "%.4f", found->result->neglog10_p);
      out << '\t' << stat << '\t'
          << format_pvalue(found->result->p, found->result->neglog10_p) << '\t' << nl;
    } else {
      out << '\t' << found->error << "\tNA\tNA";
    }
  }
  out << '\n';
}

void write_header(std::ostream& out, const std::vector<TestId>& all_tests) {
  out << "chrom\tpos\tid\tref\talt\tregion\tflags\tp_f\tp_m\tp_pooled\tdelta_f"
         "\tdelta_m\tsdmaf";
  for (TestId id : all_tests) {
    const std::string name = test_id_name(id);
    out << '\t' << name << "_stat\t" << name << "_p\t" << name << "_neglog10p";
  }
  out << '\n';
}

}  // namespace

std::vector<TestId> tests_in_records(const std::vector<ScanRecord>& records) {
  std::vector<TestId> all;
  for (TestId id : {TestId::PearsonAuto1, TestId::RaAuto1, TestId::RaXnprJoint2,
                    TestId::PearsonXnprFm, TestId::RaXnprPooled1,
                    TestId::PearsonXnprPooled, TestId::RaXnprFemale1,
                    TestId::SdmafComponentHwe, TestId::SdmafRobust, TestId::RaXpar2,
                    TestId::RaXparPooled1}) {
    for (const auto& rec : records) {
      const bool present = std::any_of(rec.outcomes.begin(), rec.outcomes.end(),
                                       [&](const TestOutcome& o) { return o.test == id; });
      if (present) {
        all.push_back(id);
        break;
      }
    }
  }
  return all;
}

void write_results_tsv(std::ostream& out, const std::vector<ScanRecord>& records,
                       const std::vector<TestId>& all_tests) {
  write_header(out, all_tests);
  for (const auto& rec : records) write_record_row(out, rec, all_tests);
}

void write_hits_tsv(std::ostream& out, const std::vector<ScanRecord>& records,
                    const std::vector<TestId>& all_tests, double threshold) {
  write_header(out, all_tests);
  for (const auto& rec : records) {
    if (!rec.filtered && rec.significant(threshold)) {
      write_record_row(out, rec, all_tests);
    }
  }
}

void write_plot_tsv(std::ostream& out, const std::vector<ScanRecord>& records) {
  out << "pos_bp\ttest_id\tneglog10_p_clipped\tabs_sdmaf\n";
  for (const auto& rec : records) {
    if (rec.filtered) continue;
    const std::int64_t pos = rec.counts.locus ? rec.counts.locus->pos : 0;
    const double abs_sdmaf = rec.stats.sdmaf ? std::fabs(*rec.stats.sdmaf) : 0.0;
    for (const auto& o : rec.outcomes) {
      if (!o.result) continue;
      // p-values above 0.1 are plotted at 0.1.
      const double clipped = std::max(o.result->neglog10_p, 1.0);
      char nl[32], sd[32];
      std::snprintf(nl, sizeof(nl), "%.4f", clipped);
      std::snprintf(sd, sizeof(sd), "%.6g", abs_sdmaf);
      out << pos << '\t' << test_id_name(o.test) << '\t' << nl << '\t' << sd << '\n';
    }
  }
}

ScanSummary run_scan(const ScanConfig& config) {
  std::vector<ParseIssue> issues;
  const std::vector<GenotypeCounts> rows =
      parse_counts_table(config.input_path, config.strict, &issues);
  const std::vector<ScanRecord> records = scan_records(rows, config);
  const std::vector<TestId> all_tests = tests_in_records(records);

  ScanSummary summary;
  summary.rows_in = rows.size();
  for (const auto& rec : records) {
    if (rec.filtered) {
      ++summary.filtered;
    } else {
      ++summary.retained;
      if (rec.significant(config.threshold)) ++summary.hits;
    }
  }

  auto open = [](const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    return f;
  };
  if (!config.out_path.empty()) {
    auto f = open(config.out_path);
    write_results_tsv(f, records, all_tests);
  }
  if (!config.hits_path.empty()) {
    auto f = open(config.hits_path);
    write_hits_tsv(f, records, all_tests, config.threshold);
  }
  if (!config.plot_path.empty()) {
    auto f = open(config.plot_path);
    write_plot_tsv(f, records);
  }
  return summary;
}

}  // namespace xhwe
