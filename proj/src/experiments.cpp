#include "eventprim/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "eventprim/search.hpp"
#include "eventprim/serialize.hpp"
#include "eventprim/synthetic.hpp"
#include "json.hpp"

namespace eventprim {

namespace {

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
T parse(const std::string& s, const char* what) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw DataError(std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Thousands separators for the aligned table.
std::string grouped(double v) {
  std::string digits = fixed(std::fabs(v), 0);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return (v < 0 && digits != "0" ? "-" : "") + out;
}

nlohmann::json bayes_json(const BayesReport& r) {
  return {{"events", r.events},
          {"total_bits", r.total_bits},
          {"bits_per_event", r.bits_per_event},
          {"coverage", r.coverage},
          {"library_bits", r.library_bits},
          {"program_bits", r.program_bits},
          {"unexplained_bits", r.unexplained_bits}};
}

nlohmann::json usage_json(const std::vector<UsageRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back({{"op", r.op}, {"count", r.count}, {"percent", r.percent}});
  return arr;
}

}  // namespace

LibraryScore score_library(std::string name, std::span<const Event> events, const Library& lib,
                           const SearchConfig& cfg, const Pools& pools) {
  LibraryScore s;
  s.name = std::move(name);
  s.ops = lib.size();
  const WakeResults wake = explain_all(events, lib, cfg);
  s.mdl = total_mdl(events, wake, lib);
  s.bayes = bayes_total(events, wake, lib, pools);
  return s;
}

ComparisonReport compare_libraries(std::span<const Event> events,
                                   const std::vector<std::pair<std::string, Library>>& libraries,
                                   const SearchConfig& cfg) {
  if (libraries.empty()) throw std::invalid_argument("compare needs at least one library");
  const Pools pools = Pools::from_events(events);
  ComparisonReport report;
  for (const auto& [name, lib] : libraries) {
    report.rows.push_back(score_library(name, events, lib, cfg, pools));
  }
  for (auto& row : report.rows) row.log2_bf = log2_bayes_factor(row.bayes, report.rows.front().bayes);
  return report;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  CsvTable t;
  t.header = {"library",  "ops",     "total_mdl",    "total_bits",   "bits_per_event",
              "coverage", "log2_bf", "library_bits", "program_bits", "unexplained_bits"};
  for (const auto& r : report.rows) {
    t.rows.push_back({r.name, std::to_string(r.ops), std::to_string(r.mdl.total),
                      num(r.bayes.total_bits), num(r.bayes.bits_per_event), num(r.bayes.coverage),
                      num(r.log2_bf), num(r.bayes.library_bits), num(r.bayes.program_bits),
                      num(r.bayes.unexplained_bits)});
  }
  write_table(out, t);
}

ComparisonReport read_comparison_csv(std::istream& in) {
  const CsvTable t = read_table(in, ',');
  ComparisonReport report;
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw DataError("comparison row has wrong width");
    auto col = [&](const char* name) -> const std::string& { return row[t.column(name)]; };
    LibraryScore s;
    s.name = col("library");
    s.ops = parse<std::size_t>(col("ops"), "op count");
    s.mdl.total = parse<Units>(col("total_mdl"), "total MDL");
    s.bayes.total_bits = parse<double>(col("total_bits"), "bit count");
    s.bayes.bits_per_event = parse<double>(col("bits_per_event"), "bits per event");
    s.bayes.coverage = parse<double>(col("coverage"), "coverage");
    s.log2_bf = parse<double>(col("log2_bf"), "Bayes factor");
    s.bayes.library_bits = parse<double>(col("library_bits"), "bit count");
    s.bayes.program_bits = parse<double>(col("program_bits"), "bit count");
    s.bayes.unexplained_bits = parse<double>(col("unexplained_bits"), "bit count");
    report.rows.push_back(std::move(s));
  }
  return report;
}

std::string format_comparison_table(const ComparisonReport& report) {
  const std::vector<std::string> head = {"Library", "Ops", "MDL", "Total (bits)", "bits/event",
                                         "Coverage", "log2 BF"};
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    std::string bf = i == 0 ? "---" : (r.log2_bf > 0 ? "+" : "") + grouped(r.log2_bf);
    cells.push_back({r.name, std::to_string(r.ops), std::to_string(r.mdl.total),
                     grouped(r.bayes.total_bits), fixed(r.bayes.bits_per_event, 1),
                     fixed(100.0 * r.bayes.coverage, 1) + "%", bf});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::size_t pad = width[c] - row[c].size();
      if (c == 0) {
        out << row[c] << std::string(pad, ' ');
      } else {
        out << "  " << std::string(pad, ' ') << row[c];
      }
    }
    out << '\n';
  };
  line(head);
  std::size_t total = 0;
  for (auto w : width) total += w + 2;
  out << std::string(total - 2, '-') << '\n';
  for (const auto& row : cells) line(row);
  return out.str();
}

std::vector<UsageRow> usage_distribution(const UsageStats& stats, const Library& lib) {
  std::vector<UsageRow> rows;
  if (stats.total_instances == 0) return rows;
  for (const auto& t : lib.templates()) {
    const std::size_t n = stats.count(t.name());
    rows.push_back(UsageRow{t.name(), n,
                            100.0 * static_cast<double>(n) / static_cast<double>(stats.total_instances)});
  }
  std::sort(rows.begin(), rows.end(), [](const UsageRow& a, const UsageRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.op < b.op;
  });
  return rows;
}

void write_usage_csv(std::ostream& out, const std::vector<UsageRow>& rows) {
  CsvTable t;
  t.header = {"rank", "operator", "count", "percent"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.rows.push_back({std::to_string(i + 1), rows[i].op, std::to_string(rows[i].count),
                      num(rows[i].percent)});
  }
  write_table(out, t);
}

std::vector<UsageRow> read_usage_csv(std::istream& in) {
  const CsvTable t = read_table(in, ',');
  std::vector<UsageRow> rows;
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw DataError("usage row has wrong width");
    rows.push_back(UsageRow{row[t.column("operator")],
                            parse<std::size_t>(row[t.column("count")], "count"),
                            parse<double>(row[t.column("percent")], "percentage")});
  }
  return rows;
}

double max_usage_shift(const std::vector<UsageRow>& a, const std::vector<UsageRow>& b) {
  std::map<std::string, std::pair<double, double>> shares;
  for (const auto& r : a) shares[r.op].first = r.percent;
  for (const auto& r : b) shares[r.op].second = r.percent;
  double worst = 0;
  for (const auto& [op, p] : shares) worst = std::max(worst, std::fabs(p.first - p.second));
  return worst;
}

SplitReport split_eval(std::span<const Event> events, double ratio, std::uint64_t rng_seed,
                       const Library& seed, const DiscoveryConfig& cfg) {
  auto [train, test] = split_train_test(events, ratio, rng_seed);
  SplitReport r;
  r.train_events = train.size();
  r.test_events = test.size();
  r.library = run_discovery(train, seed, cfg).library;
  auto score = [&](const std::vector<Event>& part, BayesReport& bayes, std::vector<UsageRow>& usage) {
    const WakeResults wake = explain_all(part, r.library, cfg.search);
    bayes = bayes_total(part, wake, r.library, Pools::from_events(part));
    usage = usage_distribution(UsageStats::from_wake(wake, r.library), r.library);
  };
  score(train, r.train, r.train_usage);
  score(test, r.test, r.test_usage);
  return r;
}

void write_split_report(std::ostream& out, const SplitReport& report) {
  const nlohmann::json j = {{"train_events", report.train_events},
                            {"test_events", report.test_events},
                            {"library_ops", report.library.size()},
                            {"train", bayes_json(report.train)},
                            {"test", bayes_json(report.test)},
                            {"gap_bits_per_event", report.gap()},
                            {"max_usage_shift_points",
                             max_usage_shift(report.train_usage, report.test_usage)},
                            {"train_usage", usage_json(report.train_usage)},
                            {"test_usage", usage_json(report.test_usage)}};
  out << j.dump(1) << '\n';
}

}  // namespace eventprim
