#include "eventprim/dsl.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace eventprim {

namespace {

const std::string* ref_name(const PatternTerm& term) {
  const auto* ref = std::get_if<SlotRef>(&term);
  return ref ? &ref->name : nullptr;
}

template <typename Fn>
PatternTerm map_term(const PatternTerm& term, Fn&& fn) {
  if (const auto* name = ref_name(term)) return fn(*name);
  return term;
}

template <typename Fn>
PatternTriple map_pattern(const PatternTriple& p, Fn&& fn) {
  return PatternTriple{map_term(p.subject, fn), map_term(p.relation, fn), map_term(p.object, fn)};
}

template <typename Fn>
std::vector<PatternTriple> map_patterns(const std::vector<PatternTriple>& ps, Fn&& fn) {
  std::vector<PatternTriple> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(map_pattern(p, fn));
  return out;
}

Symbol resolve(const PatternTerm& term, const Binding& b) {
  if (const auto* name = ref_name(term)) {
    auto it = b.find(*name);
    if (it == b.end()) throw DslError("unbound slot '" + *name + "'");
    return it->second;
  }
  return std::get<Symbol>(term);
}

bool contains_pattern(const std::vector<PatternTriple>& ps, const PatternTriple& p) {
  return std::find(ps.begin(), ps.end(), p) != ps.end();
}

// a \ b, order of a kept, duplicates dropped
std::vector<PatternTriple> pattern_difference(const std::vector<PatternTriple>& a,
                                              const std::vector<PatternTriple>& b) {
  std::vector<PatternTriple> out;
  for (const auto& p : a) {
    if (!contains_pattern(b, p) && !contains_pattern(out, p)) out.push_back(p);
  }
  return out;
}

std::vector<PatternTriple> pattern_union(std::vector<PatternTriple> a,
                                         const std::vector<PatternTriple>& b) {
  for (const auto& p : b) {
    if (!contains_pattern(a, p)) a.push_back(p);
  }
  return a;
}

Slot slot(std::string name, SlotType type) { return Slot{std::move(name), type}; }

PatternTriple pat(PatternTerm s, PatternTerm r, PatternTerm o) {
  return PatternTriple{std::move(s), std::move(r), std::move(o)};
}

OperatorTemplate make_set() {
  return OperatorTemplate(
      "SET",
      {slot("e", SlotType::entity), slot("p", SlotType::property), slot("v", SlotType::value)}, {},
      {pat(slot_ref("e"), slot_ref("p"), slot_ref("v"))});
}

OperatorTemplate make_unset() {
  return OperatorTemplate(
      "UNSET",
      {slot("e", SlotType::entity), slot("p", SlotType::property), slot("v", SlotType::value)},
      {pat(slot_ref("e"), slot_ref("p"), slot_ref("v"))}, {});
}

OperatorTemplate make_move_prop() {
  return OperatorTemplate("MOVE_PROP",
                          {slot("s", SlotType::entity), slot("d", SlotType::entity),
                           slot("p", SlotType::property), slot("v", SlotType::value)},
                          {pat(slot_ref("s"), slot_ref("p"), slot_ref("v"))},
                          {pat(slot_ref("d"), slot_ref("p"), slot_ref("v"))});
}

OperatorTemplate make_change() {
  return OperatorTemplate("CHANGE",
                          {slot("e", SlotType::entity), slot("p", SlotType::property),
                           slot("v_old", SlotType::value), slot("v_new", SlotType::value)},
                          {pat(slot_ref("e"), slot_ref("p"), slot_ref("v_old"))},
                          {pat(slot_ref("e"), slot_ref("p"), slot_ref("v_new"))});
}

OperatorTemplate renamed(const OperatorTemplate& t, std::string name) {
  return OperatorTemplate(std::move(name), t.slots(), t.removes(), t.adds(), SeedOrigin{});
}

}  // namespace

std::string_view to_string(SlotType type) {
  switch (type) {
    case SlotType::entity: return "entity";
    case SlotType::location: return "location";
    case SlotType::property: return "property";
    case SlotType::value: return "value";
  }
  return "?";
}

SlotType slot_type_from_string(std::string_view text) {
  if (text == "entity") return SlotType::entity;
  if (text == "location") return SlotType::location;
  if (text == "property") return SlotType::property;
  if (text == "value") return SlotType::value;
  throw DslError("unknown slot type '" + std::string(text) + "'");
}

bool slot_types_unifiable(SlotType a, SlotType b) {
  return (a == SlotType::property) == (b == SlotType::property);
}

PatternTerm slot_ref(std::string name) { return SlotRef{std::move(name)}; }
PatternTerm lit(std::string symbol) { return Symbol(std::move(symbol)); }

std::string to_string(const PatternTerm& term) {
  if (const auto* name = ref_name(term)) return "$" + *name;
  return std::get<Symbol>(term).str();
}

std::string to_string(const PatternTriple& p) {
  return "(" + to_string(p.subject) + "," + to_string(p.relation) + "," + to_string(p.object) + ")";
}

OperatorTemplate::OperatorTemplate(std::string name, std::vector<Slot> slots,
                                   std::vector<PatternTriple> removes,
                                   std::vector<PatternTriple> adds, Provenance provenance)
    : name_(std::move(name)),
      slots_(std::move(slots)),
      removes_(std::move(removes)),
      adds_(std::move(adds)),
      provenance_(std::move(provenance)) {
  if (name_.empty()) throw DslError("template name must be non-empty");
  std::set<std::string_view> seen;
  for (const auto& s : slots_) {
    if (s.name.empty()) throw DslError(name_ + ": empty slot name");
    if (!seen.insert(s.name).second) throw DslError(name_ + ": duplicate slot '" + s.name + "'");
  }
  auto check = [&](const PatternTerm& term) {
    if (const auto* ref = ref_name(term); ref && !seen.contains(*ref)) {
      throw DslError(name_ + ": pattern references undeclared slot '" + *ref + "'");
    }
  };
  for (const auto* list : {&removes_, &adds_}) {
    for (const auto& p : *list) {
      check(p.subject);
      check(p.relation);
      check(p.object);
    }
  }
}

const Slot* OperatorTemplate::find_slot(std::string_view slot_name) const {
  for (const auto& s : slots_) {
    if (s.name == slot_name) return &s;
  }
  return nullptr;
}

Library::Library(std::vector<OperatorTemplate> templates, std::vector<std::string> seed_names)
    : seed_names_(std::move(seed_names)) {
  for (auto& t : templates) {
    std::string name = t.name();
    if (!add(std::move(t))) throw DslError("duplicate template name '" + name + "'");
  }
  for (const auto& s : seed_names_) {
    if (!contains(s)) throw DslError("seed '" + s + "' is not in the library");
  }
}

bool Library::add(OperatorTemplate t) {
  if (contains(t.name())) return false;
  templates_.push_back(std::move(t));
  return true;
}

void Library::remove(std::string_view name) {
  if (is_seed(name)) throw DslError("cannot remove seed template '" + std::string(name) + "'");
  auto it = std::find_if(templates_.begin(), templates_.end(),
                         [&](const OperatorTemplate& t) { return t.name() == name; });
  if (it == templates_.end()) throw DslError("unknown template '" + std::string(name) + "'");
  templates_.erase(it);
}

const OperatorTemplate* Library::find(std::string_view name) const {
  for (const auto& t : templates_) {
    if (t.name() == name) return &t;
  }
  return nullptr;
}

const OperatorTemplate& Library::at(std::string_view name) const {
  const auto* t = find(name);
  if (!t) throw DslError("unknown template '" + std::string(name) + "'");
  return *t;
}

bool Library::is_seed(std::string_view name) const {
  return std::find(seed_names_.begin(), seed_names_.end(), name) != seed_names_.end();
}

StateDiff instantiate(const OperatorTemplate& t, const Binding& b) {
  for (const auto& s : t.slots()) {
    if (!b.contains(s.name)) throw DslError(t.name() + ": unbound slot '" + s.name + "'");
  }
  auto ground = [&](const std::vector<PatternTriple>& ps) {
    std::vector<Triple> out;
    out.reserve(ps.size());
    for (const auto& p : ps) {
      out.push_back(Triple{resolve(p.subject, b), resolve(p.relation, b), resolve(p.object, b)});
    }
    return TripleSet(std::move(out));
  };
  return StateDiff(ground(t.adds()), ground(t.removes()));
}

StateDiff program_diff(const Program& p, const Library& lib) {
  StateDiff net;
  for (const auto& step : p.steps) {
    net = merge_diffs(net, instantiate(lib.at(step.template_name), step.binding));
  }
  return net;
}

Library seed_library() {
  return Library({make_set(), make_unset(), make_move_prop(), make_change()},
                 {"SET", "UNSET", "MOVE_PROP", "CHANGE"});
}

Library minimal_seed_library() { return Library({make_set(), make_unset()}, {"SET", "UNSET"}); }

Library schank_library() {
  const Symbol has("has");
  auto atrans = renamed(specialize(make_move_prop(), "p", has), "ATRANS");
  auto ptrans = renamed(specialize(make_change(), "p", Symbol("location")), "PTRANS");
  auto mtrans = renamed(specialize(make_set(), "p", Symbol("knows")), "MTRANS");
  auto mbuild = renamed(mtrans, "MBUILD");
  auto propel = renamed(specialize(make_change(), "p", Symbol("position")), "PROPEL");
  OperatorTemplate ingest(
      "INGEST",
      {slot("e", SlotType::entity), slot("v", SlotType::value), slot("src", SlotType::entity)},
      {pat(slot_ref("src"), lit("has"), slot_ref("v"))},
      {pat(slot_ref("e"), lit("consumed"), slot_ref("v"))});
  OperatorTemplate ptrans_full(
      "PTRANS_FULL",
      {slot("e", SlotType::entity), slot("o", SlotType::entity), slot("v_old", SlotType::value),
       slot("v_new", SlotType::value)},
      {pat(slot_ref("e"), lit("location"), slot_ref("v_old")),
       pat(slot_ref("o"), lit("location"), slot_ref("v_old"))},
      {pat(slot_ref("e"), lit("location"), slot_ref("v_new")),
       pat(slot_ref("o"), lit("location"), slot_ref("v_new"))});
  std::vector<OperatorTemplate> ts{atrans, ptrans, mtrans, mbuild, propel, ingest, ptrans_full};
  std::vector<std::string> names;
  for (const auto& t : ts) names.push_back(t.name());
  return Library(std::move(ts), std::move(names));
}

OperatorTemplate specialize(const OperatorTemplate& t, std::string_view slot_name,
                            const Symbol& literal) {
  const Slot* target = t.find_slot(slot_name);
  if (!target) {
    throw DslError(t.name() + ": cannot specialize unknown slot '" + std::string(slot_name) + "'");
  }
  if (target->type != SlotType::property) {
    throw DslError(t.name() + ": only property slots can be specialized, '" +
                   std::string(slot_name) + "' is " + std::string(to_string(target->type)));
  }
  std::vector<Slot> slots;
  for (const auto& s : t.slots()) {
    if (s.name != slot_name) slots.push_back(s);
  }
  auto fix = [&](const std::string& name) -> PatternTerm {
    if (name == slot_name) return literal;
    return SlotRef{name};
  };
  return OperatorTemplate(t.name() + "_" + literal.str(), std::move(slots),
                          map_patterns(t.removes(), fix), map_patterns(t.adds(), fix),
                          Specialized{t.name(), std::string(slot_name), literal});
}

OperatorTemplate compose(const OperatorTemplate& a, const OperatorTemplate& b,
                         const std::vector<Unification>& unifications) {
  std::map<std::string, std::string> rename;  // b slot -> compound slot
  for (const auto& [a_slot, b_slot] : unifications) {
    const Slot* sa = a.find_slot(a_slot);
    const Slot* sb = b.find_slot(b_slot);
    if (!sa) throw DslError("compose: '" + a.name() + "' has no slot '" + a_slot + "'");
    if (!sb) throw DslError("compose: '" + b.name() + "' has no slot '" + b_slot + "'");
    if (!slot_types_unifiable(sa->type, sb->type)) {
      throw DslError("compose: cannot unify " + std::string(to_string(sa->type)) + " slot '" +
                     a_slot + "' with " + std::string(to_string(sb->type)) + " slot '" + b_slot +
                     "'");
    }
    if (!rename.emplace(b_slot, a_slot).second) {
      throw DslError("compose: slot '" + b_slot + "' of '" + b.name() + "' unified twice");
    }
  }

  std::vector<Slot> slots = a.slots();
  auto taken = [&](const std::string& n) {
    return std::any_of(slots.begin(), slots.end(), [&](const Slot& s) { return s.name == n; });
  };
  for (const auto& s : b.slots()) {
    if (rename.contains(s.name)) continue;
    std::string n = s.name;
    while (taken(n)) n = "b_" + n;
    rename.emplace(s.name, n);
    slots.push_back(Slot{n, s.type});
  }

  auto to_compound = [&](const std::string& name) -> PatternTerm { return SlotRef{rename.at(name)}; };
  auto b_removes = map_patterns(b.removes(), to_compound);
  auto b_adds = map_patterns(b.adds(), to_compound);

  // Same net-composition rule as merge_diffs, at the pattern level.
  auto removes = pattern_union(pattern_difference(a.removes(), b_adds),
                               pattern_difference(b_removes, a.adds()));
  auto adds = pattern_union(pattern_difference(a.adds(), b_removes),
                            pattern_difference(b_adds, a.removes()));

  return OperatorTemplate(a.name() + "_THEN_" + b.name(), std::move(slots), std::move(removes),
                          std::move(adds), Compound{a.name(), b.name(), unifications});
}

bool structurally_equal(const OperatorTemplate& a, const OperatorTemplate& b) {
  if (a.arity() != b.arity() || a.removes().size() != b.removes().size() ||
      a.adds().size() != b.adds().size()) {
    return false;
  }
  auto type_counts = [](const OperatorTemplate& t) {
    std::map<SlotType, int> c;
    for (const auto& s : t.slots()) ++c[s.type];
    return c;
  };
  if (type_counts(a) != type_counts(b)) return false;

  auto sorted = [](std::vector<PatternTriple> ps) {
    std::sort(ps.begin(), ps.end());
    return ps;
  };
  const auto b_removes = sorted(b.removes());
  const auto b_adds = sorted(b.adds());

  const auto& as = a.slots();
  const auto& bs = b.slots();
  std::map<std::string, std::string> mapping;
  std::vector<bool> used(bs.size(), false);

  std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
    if (i == as.size()) {
      auto to_b = [&](const std::string& n) -> PatternTerm { return SlotRef{mapping.at(n)}; };
      return sorted(map_patterns(a.removes(), to_b)) == b_removes &&
             sorted(map_patterns(a.adds(), to_b)) == b_adds;
    }
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (used[j] || bs[j].type != as[i].type) continue;
      used[j] = true;
      mapping[as[i].name] = bs[j].name;
      if (assign(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return assign(0);
}

}  // namespace eventprim
