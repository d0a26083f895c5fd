#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eventprim/core.hpp"
#include "eventprim/discovery.hpp"
#include "eventprim/dsl.hpp"
#include "eventprim/mdl.hpp"

namespace eventprim {

struct LibraryScore {
  std::string name;
  std::size_t ops = 0;
  MdlReport mdl;
  BayesReport bayes;
  /// Against the first library of the comparison; positive favours this one.
  double log2_bf = 0;
};

struct ComparisonReport {
  std::vector<LibraryScore> rows;
};

/// Wake pass plus both scores. Selection frequencies come from this pass.
LibraryScore score_library(std::string name, std::span<const Event> events, const Library& lib,
                           const SearchConfig& cfg, const Pools& pools);

/// Scores every library on the same events with pools drawn from them.
ComparisonReport compare_libraries(std::span<const Event> events,
                                   const std::vector<std::pair<std::string, Library>>& libraries,
                                   const SearchConfig& cfg);

/// Columns: library, ops, total_mdl, total_bits, bits_per_event, coverage,
/// log2_bf, library_bits, program_bits, unexplained_bits.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
ComparisonReport read_comparison_csv(std::istream& in);
std::string format_comparison_table(const ComparisonReport& report);

struct UsageRow {
  std::string op;
  std::size_t count = 0;
  double percent = 0;  ///< share of all instances, 0..100
};

/// Every library operator with its share of instances, by descending count
/// then name. Empty when there are no instances at all.
std::vector<UsageRow> usage_distribution(const UsageStats& stats, const Library& lib);
void write_usage_csv(std::ostream& out, const std::vector<UsageRow>& rows);
std::vector<UsageRow> read_usage_csv(std::istream& in);

/// Largest absolute difference in percentage points between two
/// distributions; an operator missing on one side counts as 0%.
double max_usage_shift(const std::vector<UsageRow>& a, const std::vector<UsageRow>& b);

struct SplitReport {
  std::size_t train_events = 0;
  std::size_t test_events = 0;
  Library library;
  BayesReport train;
  BayesReport test;
  std::vector<UsageRow> train_usage;
  std::vector<UsageRow> test_usage;

  double gap() const { return test.bits_per_event - train.bits_per_event; }
};

/// Discovers on the train part only, then scores both parts with the
/// result (each part with its own pools).
SplitReport split_eval(std::span<const Event> events, double ratio, std::uint64_t rng_seed,
                       const Library& seed, const DiscoveryConfig& cfg);

void write_split_report(std::ostream& out, const SplitReport& report);

}  // namespace eventprim
