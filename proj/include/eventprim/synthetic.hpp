#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eventprim/core.hpp"

namespace eventprim {

/// Sizes of the role-filler vocabularies.
struct EntityPools {
  std::size_t people = 24;
  std::size_t objects = 20;
  std::size_t locations = 16;
  std::size_t info = 16;
};

/// A triple over role names (A, B, O, O2, L1, L2, I, E1, E2) and a literal
/// relation.
struct RoleTriple {
  std::string subject;
  std::string relation;
  std::string object;
};

/// One event template: which triples change and which stay as context.
struct TemplateSpec {
  std::string name;
  std::string category;
  std::vector<std::string> verbs;
  bool compound = false;
  std::vector<RoleTriple> removes;
  std::vector<RoleTriple> adds;
  std::vector<RoleTriple> context;
  std::string text;  ///< "{A} {verb} {B} the {O}" style
};

/// The 14 synthetic event templates.
const std::vector<TemplateSpec>& synthetic_templates();

struct GeneratorProfile {
  EntityPools pools;
  /// Template name -> relative weight; templates not listed get weight 1,
  /// weight 0 disables a template.
  std::map<std::string, double> weights;
  std::uint64_t rng_seed = 42;

  /// Reads {"people", "objects", "locations", "info", "weights", "rng_seed"}
  /// from a JSON file; absent keys keep their defaults.
  static GeneratorProfile from_file(const std::string& path);
};

/// `n` events drawn over the enabled templates with uniformly sampled,
/// pairwise distinct role fillers. Deterministic in `profile.rng_seed` on
/// every platform.
std::vector<Event> generate_synthetic(std::size_t n, const GeneratorProfile& profile);

/// Disjoint partition: the first part holds floor(ratio * n) events chosen by
/// a seeded shuffle. Both parts keep input order.
std::pair<std::vector<Event>, std::vector<Event>> split_train_test(std::span<const Event> events,
                                                                   double ratio,
                                                                   std::uint64_t rng_seed);

}  // namespace eventprim
