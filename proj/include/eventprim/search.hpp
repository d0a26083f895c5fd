#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "eventprim/core.hpp"
#include "eventprim/dsl.hpp"
#include "eventprim/mdl.hpp"

namespace eventprim {

struct SearchConfig {
  std::size_t beam_width = 30;
  std::size_t max_depth = 3;

  /// Throws std::invalid_argument unless both are >= 1.
  void validate() const;
};

/// Bindings of `t` whose instantiated diff shares at least one add with
/// `remaining.adds()` or one remove with `remaining.removes()`.
///
/// Slots are bound by matching the template's patterns against the
/// remaining triples. Slots left open by the match (at most
/// `max_free_slots` of them) range over the symbols of `remaining`:
/// relations for property slots, subjects and objects for everything else.
/// Results are sorted by their values in slot order.
std::vector<Binding> enumerate_bindings(const OperatorTemplate& t, const StateDiff& remaining,
                                        std::size_t max_free_slots = 1);

/// Lowest-cost program (simplified MDL) with at most `cfg.max_depth` steps
/// whose net diff equals `target`, among those reachable by the beam.
///
/// Expansions are ranked by (unexplained triples, cost, arity, template
/// name, binding). Equal-cost solutions prefer fewer steps.
std::optional<Program> beam_search(const StateDiff& target, const Library& lib,
                                   const SearchConfig& cfg);

/// One beam search per event, in input order. Events are distributed over
/// hardware threads; results do not depend on the schedule.
WakeResults explain_all(std::span<const Event> events, const Library& lib,
                        const SearchConfig& cfg);

}  // namespace eventprim
