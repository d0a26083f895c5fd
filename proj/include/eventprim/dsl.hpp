#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "eventprim/core.hpp"

namespace eventprim {

/// Misuse of the operator DSL: unbound slots, unknown templates or slots,
/// ill-typed specializations and unifications.
class DslError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SlotType { entity, location, property, value };

std::string_view to_string(SlotType type);
SlotType slot_type_from_string(std::string_view text);

/// Property slots only unify with property slots. Entity, location and value
/// slots all denote things and may be unified with each other.
bool slot_types_unifiable(SlotType a, SlotType b);

struct Slot {
  std::string name;
  SlotType type;

  friend bool operator==(const Slot&, const Slot&) = default;
};

struct SlotRef {
  std::string name;

  friend auto operator<=>(const SlotRef&, const SlotRef&) = default;
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

using PatternTerm = std::variant<SlotRef, Symbol>;

struct PatternTriple {
  PatternTerm subject;
  PatternTerm relation;
  PatternTerm object;

  friend auto operator<=>(const PatternTriple&, const PatternTriple&) = default;
  friend bool operator==(const PatternTriple&, const PatternTriple&) = default;
};

PatternTerm slot_ref(std::string name);
PatternTerm lit(std::string symbol);
std::string to_string(const PatternTerm& term);
std::string to_string(const PatternTriple& pattern);

struct SeedOrigin {
  friend bool operator==(const SeedOrigin&, const SeedOrigin&) = default;
};

struct Specialized {
  std::string parent;
  std::string slot;
  Symbol literal;

  friend bool operator==(const Specialized&, const Specialized&) = default;
};

/// (slot of the first operator, slot of the second operator) bound together.
using Unification = std::pair<std::string, std::string>;

struct Compound {
  std::string first;
  std::string second;
  std::vector<Unification> unifications;

  friend bool operator==(const Compound&, const Compound&) = default;
};

using Provenance = std::variant<SeedOrigin, Specialized, Compound>;

/// A named schema of remove/add triple patterns over typed slots.
class OperatorTemplate {
 public:
  /// Throws DslError on duplicate slot names or dangling slot references.
  OperatorTemplate(std::string name, std::vector<Slot> slots,
                   std::vector<PatternTriple> removes, std::vector<PatternTriple> adds,
                   Provenance provenance = SeedOrigin{});

  const std::string& name() const noexcept { return name_; }
  const std::vector<Slot>& slots() const noexcept { return slots_; }
  const std::vector<PatternTriple>& removes() const noexcept { return removes_; }
  const std::vector<PatternTriple>& adds() const noexcept { return adds_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  std::size_t arity() const noexcept { return slots_.size(); }
  std::size_t pattern_count() const noexcept { return removes_.size() + adds_.size(); }
  const Slot* find_slot(std::string_view slot_name) const;

  friend bool operator==(const OperatorTemplate&, const OperatorTemplate&) = default;

 private:
  std::string name_;
  std::vector<Slot> slots_;
  std::vector<PatternTriple> removes_;
  std::vector<PatternTriple> adds_;
  Provenance provenance_;
};

using Binding = std::map<std::string, Symbol>;

struct OperatorInstance {
  std::string template_name;
  Binding binding;

  friend bool operator==(const OperatorInstance&, const OperatorInstance&) = default;
  friend auto operator<=>(const OperatorInstance&, const OperatorInstance&) = default;
};

struct Program {
  std::vector<OperatorInstance> steps;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Ordered collection of uniquely named templates. Seed templates are marked
/// and cannot be removed.
class Library {
 public:
  Library() = default;
  Library(std::vector<OperatorTemplate> templates, std::vector<std::string> seed_names);

  /// Returns false (and leaves the library unchanged) if the name is taken.
  bool add(OperatorTemplate t);
  /// Throws DslError for seeds and unknown names.
  void remove(std::string_view name);

  const OperatorTemplate* find(std::string_view name) const;
  /// Throws DslError if absent.
  const OperatorTemplate& at(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  bool is_seed(std::string_view name) const;

  const std::vector<OperatorTemplate>& templates() const noexcept { return templates_; }
  const std::vector<std::string>& seed_names() const noexcept { return seed_names_; }
  std::size_t size() const noexcept { return templates_.size(); }

  friend bool operator==(const Library&, const Library&) = default;

 private:
  std::vector<OperatorTemplate> templates_;
  std::vector<std::string> seed_names_;
};

/// Substitutes the binding into the template's patterns. Throws DslError if
/// any referenced slot is unbound.
StateDiff instantiate(const OperatorTemplate& t, const Binding& b);

/// Left-to-right net composition of every step's instantiated diff.
StateDiff program_diff(const Program& p, const Library& lib);

/// SET, UNSET, MOVE_PROP and CHANGE.
Library seed_library();
/// SET and UNSET only.
Library minimal_seed_library();
/// Hand-coded baseline: ATRANS, PTRANS, MTRANS, MBUILD, PROPEL, INGEST,
/// PTRANS_FULL.
Library schank_library();

/// Hardcodes a property slot to `literal`. The result is named
/// "<parent>_<literal>" and has one slot fewer.
OperatorTemplate specialize(const OperatorTemplate& t, std::string_view slot,
                            const Symbol& literal);

/// Single template equivalent to running `a` then `b` with the given slot
/// pairs bound together. Named "<a>_THEN_<b>".
OperatorTemplate compose(const OperatorTemplate& a, const OperatorTemplate& b,
                         const std::vector<Unification>& unifications);

/// Same behaviour up to slot renaming: there is a type-preserving slot
/// bijection mapping the remove and add pattern sets onto each other.
bool structurally_equal(const OperatorTemplate& a, const OperatorTemplate& b);

}  // namespace eventprim
