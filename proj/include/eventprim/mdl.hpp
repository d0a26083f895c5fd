#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "eventprim/core.hpp"
#include "eventprim/dsl.hpp"

namespace eventprim {

/// Integer description-length units used by the simplified accounting.
using Units = std::int64_t;

/// One optional program per event, aligned with the event list. An empty
/// optional marks an unexplained event.
using WakeResults = std::vector<std::optional<Program>>;

// ---------------------------------------------------------------------------
// Simplified MDL: counts structural units. Drives search and the sleep phase.

/// |slots| + |remove patterns| + |add patterns|.
Units template_dl(const OperatorTemplate& t);

/// 1 for selecting the operator plus 1 per bound slot. The selection cost is
/// constant, independent of library size.
Units instance_dl(const OperatorTemplate& t);
Units instance_dl(const OperatorInstance& i, const Library& lib);

Units program_dl(const Program& p, const Library& lib);

/// Twice the number of changed triples.
Units unexplained_penalty(const StateDiff& target);

struct MdlReport {
  Units library_cost = 0;
  Units program_cost = 0;
  Units unexplained_penalty = 0;
  Units total = 0;
  std::size_t explained = 0;
  std::vector<Units> per_event;
};

MdlReport total_mdl(std::span<const Event> events, const WakeResults& wake, const Library& lib);

/// n * c_old - (c_lib + n * c_new). Positive means the new operator pays for
/// itself.
Units savings(std::int64_t n, Units c_old, Units c_new, Units c_lib);

// ---------------------------------------------------------------------------
// Bayesian MDL: probabilistic code lengths in bits, used for model comparison.

/// Symbol vocabularies by slot type. A value slot ranges over values and
/// locations.
///
/// from_events: entity and value slots may bind any symbol found in subject
/// or object position, so both get that whole argument vocabulary. Objects of
/// `location` triples form the location pool; relations are properties.
struct Pools {
  std::set<Symbol> entities;
  std::set<Symbol> locations;
  std::set<Symbol> properties;
  std::set<Symbol> values;

  static Pools from_events(std::span<const Event> events);

  /// Number of distinct symbols a slot of this type ranges over.
  std::size_t size(SlotType type) const;
};

/// Usage counts from one complete wake pass.
struct UsageStats {
  std::map<std::string, std::size_t> template_counts;
  /// (template, property slot, bound relation) -> count
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> property_counts;
  /// adjacent (first, second) template pairs -> count
  std::map<std::pair<std::string, std::string>, std::size_t> pair_counts;
  std::size_t total_instances = 0;

  static UsageStats from_wake(const WakeResults& wake, const Library& lib);

  std::size_t count(const std::string& template_name) const;
};

/// Elias-gamma code length: 2 * floor(log2 n) + 1 for n >= 1.
double elias_gamma_bits(std::uint64_t n);

/// Structural prior: gamma-coded slot and pattern counts, two bits per slot
/// type, and per pattern term a ref/literal flag plus the index or symbol.
double bayes_template_bits(const OperatorTemplate& t, const Pools& pools);

/// -log2 of the add-one smoothed usage frequency.
double bayes_selection_bits(const OperatorTemplate& t, const UsageStats& stats,
                            const Library& lib);

/// Sum over slots of log2(pool size). Throws DataError if a bound slot type
/// has an empty pool.
double bayes_binding_bits(const OperatorTemplate& t, const Pools& pools);
double bayes_binding_bits(const OperatorInstance& i, const Library& lib, const Pools& pools);

/// Literal description of an unexplained diff: twice, per changed triple, the
/// bits to spell its subject, relation and object.
double bayes_unexplained_bits(const StateDiff& target, const Pools& pools);

struct BayesReport {
  double library_bits = 0;
  double program_bits = 0;
  double unexplained_bits = 0;
  double total_bits = 0;
  double coverage = 0;
  double bits_per_event = 0;
  std::size_t events = 0;
};

/// Frequencies for selection costs come from `wake` itself.
BayesReport bayes_total(std::span<const Event> events, const WakeResults& wake,
                        const Library& lib, const Pools& pools);

/// b.total_bits - a.total_bits; positive favours `a`. Throws DataError when
/// the reports were computed on different event counts.
double log2_bayes_factor(const BayesReport& a, const BayesReport& b);

}  // namespace eventprim
