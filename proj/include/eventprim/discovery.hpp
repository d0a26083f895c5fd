#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eventprim/core.hpp"
#include "eventprim/dsl.hpp"
#include "eventprim/mdl.hpp"
#include "eventprim/search.hpp"

namespace eventprim {

enum class ProposalKind { specialization, composition };

struct Proposal {
  ProposalKind kind;
  OperatorTemplate new_template;
  std::size_t frequency = 0;
  Units c_old = 0;
  Units c_new = 0;
  Units c_lib = 0;
  Units savings = 0;
};

struct DiscoveryConfig {
  std::size_t k = 10;              ///< minimum frequency for a proposal
  std::size_t max_iterations = 10; ///< upper bound on wake passes
  SearchConfig search;
  bool prune = true;
  /// Recorded with results. Discovery itself draws no random numbers.
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// One row of the learning curve: the state after a wake pass.
struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t library_size = 0;
  Units total_mdl = 0;
  double bayes_bits = 0;
  double coverage = 0;
  bool prune_row = false;
  /// Templates added by the sleep phase that followed this wake pass (or,
  /// on the prune row, templates removed).
  std::vector<std::string> changes;
};

struct DiscoveryResult {
  Library library;
  std::vector<IterationRecord> trace;
  WakeResults programs;
  UsageStats usage;
  std::size_t pre_prune_size = 0;

  /// Number of wake-sleep iterations, excluding the prune row.
  std::size_t iterations() const;
};

/// One proposal per (template, property slot, relation) bound at least `k`
/// times whose arity reduction pays for the new template.
std::vector<Proposal> propose_specializations(const WakeResults& wake, const Library& lib,
                                              std::size_t k);

/// One proposal per adjacent (first, second, shared-binding pattern) seen at
/// least `k` times with positive savings. The shared-binding pattern pairs
/// each slot of the second step with the first slot of the first step bound
/// to the same symbol.
std::vector<Proposal> propose_compositions(const WakeResults& wake, const Library& lib,
                                           std::size_t k);

/// Bits per use an operator saves over the cheapest program for its own
/// diff built from the rest of `lib`. Empty if no such program exists.
std::optional<Units> savings_per_use(const OperatorTemplate& t, const Library& lib,
                                     const SearchConfig& cfg);

struct PruneOutcome {
  Library library;
  WakeResults programs;
  std::vector<std::string> removed;
};

/// Removes non-seed templates with usage * savings_per_use < template_dl,
/// then re-explains the events. A removal is only kept if it neither lowers
/// coverage nor raises total simplified MDL.
PruneOutcome prune(const Library& lib, std::span<const Event> events, const WakeResults& wake,
                   const SearchConfig& cfg);

/// The full wake-sleep loop followed by pruning.
DiscoveryResult run_discovery(std::span<const Event> events, const Library& seed,
                              const DiscoveryConfig& cfg);

}  // namespace eventprim
