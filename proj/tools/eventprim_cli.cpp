// eventprim: command-line driver for event-primitive discovery.
//
// Exit codes: 0 ok, 1 usage error, 2 data error, 3 internal invariant
// violation.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eventprim/atomic.hpp"
#include "eventprim/discovery.hpp"
#include "eventprim/experiments.hpp"
#include "eventprim/serialize.hpp"
#include "eventprim/synthetic.hpp"

namespace fs = std::filesystem;
using namespace eventprim;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInvariant = 3 };

struct Options {
  std::string events;
  std::vector<std::string> libraries;
  std::string seed_lib = "seed";
  std::size_t k = 10;
  std::size_t beam = 30;
  std::size_t depth = 3;
  std::size_t iterations = 10;
  bool no_prune = false;
  double ratio = 0.8;
  std::uint64_t rng_seed = 42;
  std::string out;
  std::size_t n = 500;
  std::string profile;
  std::string atomic_path;
  std::size_t sample = 0;
  bool rng_seed_given = false;
};

Library builtin_library(const std::string& name) {
  if (name == "seed") return seed_library();
  if (name == "schank") return schank_library();
  if (name == "minimal") return minimal_seed_library();
  throw std::invalid_argument("unknown built-in library '" + name + "'");
}

bool is_builtin(const std::string& name) {
  return name == "seed" || name == "schank" || name == "minimal";
}

DiscoveryConfig discovery_config(const Options& o) {
  DiscoveryConfig cfg;
  cfg.k = o.k;
  cfg.max_iterations = o.iterations;
  cfg.search.beam_width = o.beam;
  cfg.search.max_depth = o.depth;
  cfg.prune = !o.no_prune;
  cfg.rng_seed = o.rng_seed;
  cfg.validate();
  return cfg;
}

SearchConfig search_config(const Options& o) {
  SearchConfig cfg{o.beam, o.depth};
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
  return buf;
}

// -- subcommands -------------------------------------------------------------

int cmd_generate(const Options& o) {
  GeneratorProfile profile = o.profile.empty() ? GeneratorProfile{} : GeneratorProfile::from_file(o.profile);
  if (o.rng_seed_given || o.profile.empty()) profile.rng_seed = o.rng_seed;
  const auto events = generate_synthetic(o.n, profile);
  write_events_file(o.out, events);

  std::map<std::string, std::size_t> by_category;
  for (const auto& e : events) ++by_category[e.meta.at("category")];
  std::cout << "wrote " << events.size() << " events to " << o.out << "\n";
  for (const auto& [cat, n] : by_category) std::cout << "  " << cat << ": " << n << "\n";
  return kOk;
}

int cmd_discover(const Options& o) {
  const DiscoveryConfig cfg = discovery_config(o);
  const auto events = read_events_file(o.events);
  const auto t0 = std::chrono::steady_clock::now();
  const DiscoveryResult r = run_discovery(events, builtin_library(o.seed_lib), cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_library_file((dir / "library.json").string(), r.library);
  {
    auto out = open_out(dir / "trace.csv");
    write_trace(out, r.trace);
  }
  {
    auto out = open_out(dir / "programs.json");
    write_programs(out, events, r.programs);
  }

  const auto& first = r.trace.front();
  const auto& last = r.trace.back();
  std::cout << "events: " << events.size() << "\n"
            << "iterations: " << r.iterations() << (last.prune_row ? " + prune" : "") << "\n"
            << "operators: " << r.library.size() << " (" << r.pre_prune_size << " before pruning)\n"
            << "coverage: " << percent(last.coverage) << "\n"
            << "total MDL: " << first.total_mdl << " -> " << last.total_mdl << "\n"
            << "Bayesian bits: " << first.bayes_bits << " -> " << last.bayes_bits << "\n"
            << "time: " << secs << " s\n"
            << "wrote " << (dir / "library.json").string() << ", trace.csv, programs.json\n";
  return kOk;
}

int cmd_compare(const Options& o) {
  const SearchConfig cfg = search_config(o);
  const auto events = read_events_file(o.events);
  std::vector<std::pair<std::string, Library>> libs;
  for (const auto& l : o.libraries) {
    if (is_builtin(l)) {
      libs.emplace_back(l, builtin_library(l));
    } else {
      libs.emplace_back(fs::path(l).stem().string(), read_library_file(l));
    }
  }
  const ComparisonReport report = compare_libraries(events, libs, cfg);
  const std::string table = format_comparison_table(report);
  std::cout << table;
  if (!o.out.empty()) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    auto csv = open_out(dir / "comparison.csv");
    write_comparison_csv(csv, report);
    auto txt = open_out(dir / "comparison.txt");
    txt << table;
  }
  return kOk;
}

int cmd_usage(const Options& o) {
  const SearchConfig cfg = search_config(o);
  const auto events = read_events_file(o.events);
  const Library lib = is_builtin(o.libraries.front()) ? builtin_library(o.libraries.front())
                                                      : read_library_file(o.libraries.front());
  const WakeResults wake = explain_all(events, lib, cfg);
  const auto rows = usage_distribution(UsageStats::from_wake(wake, lib), lib);
  if (o.out.empty()) {
    write_usage_csv(std::cout, rows);
  } else {
    auto out = open_out(o.out);
    write_usage_csv(out, rows);
    for (const auto& r : rows) {
      std::printf("%-40s %6zu %6.1f%%\n", r.op.c_str(), r.count, r.percent);
    }
  }
  return kOk;
}

int cmd_split_eval(const Options& o) {
  const DiscoveryConfig cfg = discovery_config(o);
  const auto events = read_events_file(o.events);
  if (!(o.ratio > 0.0 && o.ratio < 1.0)) throw std::invalid_argument("--ratio must be in (0, 1)");
  const SplitReport r = split_eval(events, o.ratio, o.rng_seed, builtin_library(o.seed_lib), cfg);

  std::printf("train: %zu events, %.2f bits/event, coverage %s\n", r.train_events,
              r.train.bits_per_event, percent(r.train.coverage).c_str());
  std::printf("test:  %zu events, %.2f bits/event, coverage %s\n", r.test_events,
              r.test.bits_per_event, percent(r.test.coverage).c_str());
  std::printf("gap: %+.2f bits/event; largest usage shift %.1f points\n", r.gap(),
              max_usage_shift(r.train_usage, r.test_usage));
  if (!o.out.empty()) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    auto rep = open_out(dir / "split_report.json");
    write_split_report(rep, r);
    write_library_file((dir / "library.json").string(), r.library);
    auto tr = open_out(dir / "train_usage.csv");
    write_usage_csv(tr, r.train_usage);
    auto te = open_out(dir / "test_usage.csv");
    write_usage_csv(te, r.test_usage);
  }
  return kOk;
}

int cmd_atomic_import(const Options& o) {
  const AtomicParse parsed = parse_atomic_file(o.atomic_path);
  std::vector<AtomicRow> rows = parsed.rows;
  if (o.sample > 0 && o.sample < rows.size()) {
    std::mt19937_64 rng(o.rng_seed);
    std::vector<std::size_t> idx(rows.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < o.sample; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(o.sample);
    std::sort(idx.begin(), idx.end());
    std::vector<AtomicRow> picked;
    for (auto i : idx) picked.push_back(rows[i]);
    rows = std::move(picked);
  }
  const auto events = atomic_to_events(rows);
  write_events_file(o.out, events);

  std::map<std::string, std::size_t> by_type;
  for (const auto& e : events) ++by_type[e.meta.at("change_type")];
  std::cout << "parsed " << parsed.rows.size() << " rows (" << parsed.skipped_none << " none, "
            << parsed.malformed << " malformed); wrote " << events.size() << " events to " << o.out
            << "\n";
  for (const auto& [type, n] : by_type) {
    std::cout << "  " << type << ": " << n << " ("
              << percent(static_cast<double>(n) / static_cast<double>(events.size())) << ")\n";
  }
  return kOk;
}

void add_search_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--beam", o.beam, "Beam width")->capture_default_str();
  cmd->add_option("--depth", o.depth, "Maximum program length")->capture_default_str();
}

void add_discovery_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed-lib", o.seed_lib, "Starting library")
      ->check(CLI::IsMember({"seed", "schank", "minimal"}))
      ->capture_default_str();
  cmd->add_option("--k", o.k, "Minimum proposal frequency")->capture_default_str();
  add_search_flags(cmd, o);
  cmd->add_option("--iterations", o.iterations, "Maximum wake passes")->capture_default_str();
  cmd->add_flag("--no-prune", o.no_prune, "Skip the pruning phase");
  cmd->add_option("--rng-seed", o.rng_seed, "Random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discover event-semantics operators from before/after state pairs"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a synthetic event set");
  gen->add_option("n", o.n, "Number of events")->capture_default_str();
  gen->add_option("--profile", o.profile, "Generator profile JSON")->check(CLI::ExistingFile);
  auto* gen_seed = gen->add_option("--rng-seed", o.rng_seed, "Random seed (overrides the profile)")
                       ->capture_default_str();
  gen->add_option("--out", o.out, "Output event file")->required();

  auto* disc = app.add_subcommand("discover", "Run wake-sleep discovery");
  disc->add_option("--events", o.events, "Event file")->required();
  add_discovery_flags(disc, o);
  disc->add_option("--out", o.out, "Output directory")->required();

  auto* cmp = app.add_subcommand("compare", "Score libraries on one event set");
  cmp->add_option("--events", o.events, "Event file")->required();
  cmp->add_option("--library", o.libraries,
                  "Library JSON or one of seed, schank, minimal; repeat for more rows")
      ->required();
  add_search_flags(cmp, o);
  cmp->add_option("--out", o.out, "Output directory for comparison.csv and comparison.txt");

  auto* use = app.add_subcommand("usage", "Operator usage distribution");
  use->add_option("--events", o.events, "Event file")->required();
  use->add_option("--library", o.libraries, "Library JSON or built-in name")
      ->required()
      ->expected(1);
  add_search_flags(use, o);
  use->add_option("--out", o.out, "Output CSV (stdout if omitted)");

  auto* split = app.add_subcommand("split-eval", "Discover on a train split, score held-out events");
  split->add_option("--events", o.events, "Event file")->required();
  split->add_option("--ratio", o.ratio, "Train fraction")->capture_default_str();
  add_discovery_flags(split, o);
  split->add_option("--out", o.out, "Output directory");

  auto* atom = app.add_subcommand("atomic-import", "Convert ATOMIC rows to events");
  atom->add_option("file", o.atomic_path, "ATOMIC CSV or TSV")->required();
  atom->add_option("--sample", o.sample, "Keep a seeded random sample of this many rows");
  atom->add_option("--rng-seed", o.rng_seed, "Random seed")->capture_default_str();
  atom->add_option("--out", o.out, "Output event file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  o.rng_seed_given = gen_seed->count() > 0;

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (disc->parsed()) return cmd_discover(o);
    if (cmp->parsed()) return cmd_compare(o);
    if (use->parsed()) return cmd_usage(o);
    if (split->parsed()) return cmd_split_eval(o);
    if (atom->parsed()) return cmd_atomic_import(o);
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const DslError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
  return kUsage;
}
