#include <random>

#include "doctest.h"
#include "eventprim/dsl.hpp"

using namespace eventprim;

namespace {

Triple tr(const char* s, const char* r, const char* o) { return make_triple(s, r, o); }

Binding bind(std::initializer_list<std::pair<const char*, const char*>> kv) {
  Binding b;
  for (const auto& [k, v] : kv) b.emplace(k, Symbol(v));
  return b;
}

OperatorTemplate mail_compound() {
  const Library seed = seed_library();
  return compose(specialize(seed.at("MOVE_PROP"), "p", Symbol("has")),
                 specialize(seed.at("CHANGE"), "p", Symbol("location")), {{"v", "e"}});
}

}  // namespace

TEST_CASE("slot types round-trip through text") {
  for (auto t : {SlotType::entity, SlotType::location, SlotType::property, SlotType::value}) {
    CHECK(slot_type_from_string(to_string(t)) == t);
  }
  CHECK_THROWS_AS(slot_type_from_string("person"), DslError);
  CHECK(slot_types_unifiable(SlotType::entity, SlotType::value));
  CHECK(slot_types_unifiable(SlotType::property, SlotType::property));
  CHECK_FALSE(slot_types_unifiable(SlotType::property, SlotType::entity));
}

TEST_CASE("template construction is validated") {
  const Slot e{"e", SlotType::entity};
  CHECK_THROWS_AS(OperatorTemplate("", {e}, {}, {}), DslError);
  CHECK_THROWS_AS(OperatorTemplate("T", {e, e}, {}, {}), DslError);
  CHECK_THROWS_AS(OperatorTemplate("T", {e}, {}, {PatternTriple{slot_ref("x"), lit("r"), slot_ref("e")}}),
                  DslError);
  CHECK_NOTHROW(OperatorTemplate("T", {e}, {}, {PatternTriple{slot_ref("e"), lit("r"), lit("c")}}));
}

TEST_CASE("seed library") {
  const Library lib = seed_library();
  REQUIRE(lib.size() == 4);
  CHECK(lib.at("SET").arity() == 3);
  CHECK(lib.at("UNSET").arity() == 3);
  CHECK(lib.at("MOVE_PROP").arity() == 4);
  CHECK(lib.at("CHANGE").arity() == 4);
  for (const auto& t : lib.templates()) CHECK(lib.is_seed(t.name()));
  CHECK(minimal_seed_library().size() == 2);
}

TEST_CASE("schank library") {
  const Library lib = schank_library();
  REQUIRE(lib.size() == 7);
  CHECK(lib.at("ATRANS").arity() == 3);
  CHECK(lib.at("PTRANS").arity() == 3);
  CHECK(lib.at("MTRANS").arity() == 2);
  CHECK(lib.at("MBUILD").arity() == 2);
  CHECK(lib.at("PROPEL").arity() == 3);
  CHECK(lib.at("INGEST").arity() == 3);
  CHECK(lib.at("INGEST").pattern_count() == 2);
  CHECK(lib.at("PTRANS_FULL").arity() == 4);
  CHECK(lib.at("PTRANS_FULL").removes().size() == 2);
  CHECK(lib.at("PTRANS_FULL").adds().size() == 2);
  CHECK(structurally_equal(lib.at("ATRANS"),
                           specialize(seed_library().at("MOVE_PROP"), "p", Symbol("has"))));
  CHECK(structurally_equal(lib.at("MTRANS"), lib.at("MBUILD")));
}

TEST_CASE("instantiate MOVE_PROP on the give example") {
  const Library lib = seed_library();
  StateDiff d = instantiate(lib.at("MOVE_PROP"),
                            bind({{"s", "John"}, {"d", "Mary"}, {"p", "has"}, {"v", "book"}}));
  CHECK(d.removes() == TripleSet{tr("John", "has", "book")});
  CHECK(d.adds() == TripleSet{tr("Mary", "has", "book")});
  CHECK_THROWS_AS(instantiate(lib.at("MOVE_PROP"), bind({{"s", "John"}})), DslError);
}

TEST_CASE("program_diff composes steps") {
  const Library lib = seed_library();
  Program p{{OperatorInstance{"SET", bind({{"e", "a"}, {"p", "r"}, {"v", "x"}})},
             OperatorInstance{"UNSET", bind({{"e", "a"}, {"p", "r"}, {"v", "x"}})}}};
  CHECK(program_diff(p, lib).empty());
  CHECK(program_diff(Program{}, lib).empty());
  Program bad{{OperatorInstance{"NOPE", {}}}};
  CHECK_THROWS_AS(program_diff(bad, lib), DslError);
}

TEST_CASE("specialize") {
  const Library lib = seed_library();
  const auto has = specialize(lib.at("MOVE_PROP"), "p", Symbol("has"));
  CHECK(has.name() == "MOVE_PROP_has");
  CHECK(has.arity() == 3);
  CHECK(std::holds_alternative<Specialized>(has.provenance()));
  CHECK(std::get<Specialized>(has.provenance()).parent == "MOVE_PROP");

  CHECK(specialize(lib.at("CHANGE"), "p", Symbol("feels")).name() == "CHANGE_feels");
  CHECK(specialize(lib.at("CHANGE"), "p", Symbol("feels")).arity() == 3);
  CHECK(specialize(lib.at("SET"), "p", Symbol("knows")).arity() == 2);

  CHECK_THROWS_AS(specialize(lib.at("SET"), "q", Symbol("knows")), DslError);
  CHECK_THROWS_AS(specialize(lib.at("SET"), "e", Symbol("John")), DslError);
}

TEST_CASE("compose mail, trade and consume") {
  const Library lib = seed_library();
  const auto mail = mail_compound();
  CHECK(mail.name() == "MOVE_PROP_has_THEN_CHANGE_location");
  CHECK(mail.arity() == 5);
  CHECK(mail.removes().size() == 2);
  CHECK(mail.adds().size() == 2);

  const auto atrans = specialize(lib.at("MOVE_PROP"), "p", Symbol("has"));
  const auto trade = compose(atrans, atrans, {{"s", "d"}, {"d", "s"}});
  CHECK(trade.arity() == 4);
  CHECK(trade.pattern_count() == 4);

  const auto consume = compose(lib.at("SET"), lib.at("UNSET"), {{"e", "e"}, {"p", "p"}});
  CHECK(consume.arity() == 4);

  // Same triple added then removed cancels at the pattern level.
  const auto noop = compose(lib.at("SET"), lib.at("UNSET"), {{"e", "e"}, {"p", "p"}, {"v", "v"}});
  CHECK(noop.arity() == 3);
  CHECK(noop.pattern_count() == 0);

  CHECK_THROWS_AS(compose(lib.at("SET"), lib.at("UNSET"), {{"p", "e"}}), DslError);
  CHECK_THROWS_AS(compose(lib.at("SET"), lib.at("UNSET"), {{"zz", "e"}}), DslError);
}

TEST_CASE("compose renames colliding slots of the second operator") {
  const Library lib = seed_library();
  const auto c = compose(lib.at("SET"), lib.at("SET"), {});
  CHECK(c.arity() == 6);
  CHECK(c.find_slot("b_e") != nullptr);
  CHECK(c.find_slot("b_p") != nullptr);
}

TEST_CASE("property: specialization agrees with the parent") {
  const Library lib = seed_library();
  std::mt19937_64 rng(3);
  const char* syms[] = {"a", "b", "c", "d"};
  const char* rels[] = {"has", "location", "knows"};
  for (const auto& parent : lib.templates()) {
    for (int trial = 0; trial < 50; ++trial) {
      const Symbol rel(rels[rng() % 3]);
      const auto child = specialize(parent, "p", rel);
      CHECK(child.arity() + 1 == parent.arity());
      Binding b;
      for (const auto& s : child.slots()) b.emplace(s.name, Symbol(syms[rng() % 4]));
      Binding full = b;
      full.emplace("p", rel);
      CHECK(instantiate(child, b) == instantiate(parent, full));
    }
  }
}

TEST_CASE("property: composition agrees with merging the parts") {
  const Library lib = seed_library();
  std::mt19937_64 rng(5);
  const char* syms[] = {"a", "b", "c"};
  const char* rels[] = {"has", "location"};
  const auto& ts = lib.templates();
  for (int trial = 0; trial < 400; ++trial) {
    const auto& a = ts[rng() % ts.size()];
    const auto& b = ts[rng() % ts.size()];
    // Unify b's first slot with a same-typed slot of a, if any.
    std::vector<Unification> u;
    for (const auto& sa : a.slots()) {
      if (sa.type == b.slots()[0].type && rng() % 2) {
        u.emplace_back(sa.name, b.slots()[0].name);
        break;
      }
    }
    const auto c = compose(a, b, u);
    CHECK(c.arity() == a.arity() + b.arity() - u.size());

    auto draw = [&](const Slot& s) {
      return Symbol(s.type == SlotType::property ? rels[rng() % 2] : syms[rng() % 3]);
    };
    Binding ba;
    for (const auto& s : a.slots()) ba.emplace(s.name, draw(s));
    Binding bb;
    for (const auto& s : b.slots()) bb.emplace(s.name, draw(s));
    for (const auto& [sa, sb] : u) bb.at(sb) = ba.at(sa);

    // The compound's own slots: a's names, then b's remaining slots in order.
    Binding bc = ba;
    std::size_t next = a.arity();
    for (const auto& s : b.slots()) {
      bool unified = false;
      for (const auto& pair : u) unified = unified || pair.second == s.name;
      if (unified) continue;
      bc.emplace(c.slots()[next++].name, bb.at(s.name));
    }
    const StateDiff da = instantiate(a, ba);
    const StateDiff db = instantiate(b, bb);
    // Compatible bindings only: neither step cancels itself, and the steps
    // do not collide beyond what the patterns already cancel.
    if (diff_complexity(da) != a.pattern_count() || diff_complexity(db) != b.pattern_count()) continue;
    if (intersects(da.adds(), db.adds()) || intersects(da.removes(), db.removes())) continue;
    CHECK(instantiate(c, bc) == merge_diffs(da, db));
  }
}

TEST_CASE("structural equality ignores slot names") {
  const Library lib = seed_library();
  const OperatorTemplate renamed_set(
      "OTHER", {{"x", SlotType::entity}, {"y", SlotType::property}, {"z", SlotType::value}}, {},
      {PatternTriple{slot_ref("x"), slot_ref("y"), slot_ref("z")}});
  CHECK(structurally_equal(lib.at("SET"), renamed_set));
  CHECK_FALSE(structurally_equal(lib.at("SET"), lib.at("UNSET")));
  CHECK_FALSE(structurally_equal(lib.at("MOVE_PROP"), lib.at("CHANGE")));
}

TEST_CASE("library add and remove") {
  Library lib = seed_library();
  const auto has = specialize(lib.at("MOVE_PROP"), "p", Symbol("has"));
  CHECK(lib.add(has));
  CHECK_FALSE(lib.add(has));
  CHECK(lib.size() == 5);
  CHECK_FALSE(lib.is_seed("MOVE_PROP_has"));
  CHECK_THROWS_AS(lib.remove("SET"), DslError);
  CHECK_THROWS_AS(lib.remove("NOPE"), DslError);
  lib.remove("MOVE_PROP_has");
  CHECK(lib == seed_library());
  CHECK_THROWS_AS(lib.at("MOVE_PROP_has"), DslError);
}
