#include <random>

#include "doctest.h"
#include "eventprim/core.hpp"

using namespace eventprim;

namespace {

Triple tr(const char* s, const char* r, const char* o) { return make_triple(s, r, o); }

// Random diff that is applicable to `state`: removes come from the state,
// adds from outside it.
StateDiff random_applicable(const WorldState& state, std::mt19937_64& rng) {
  static const char* subjects[] = {"a", "b", "c"};
  static const char* relations[] = {"has", "at"};
  static const char* objects[] = {"x", "y", "z"};
  std::vector<Triple> adds;
  std::vector<Triple> removes;
  for (const auto& t : state) {
    if (rng() % 3 == 0) removes.push_back(t);
  }
  for (int i = 0; i < 3; ++i) {
    Triple t = make_triple(subjects[rng() % 3], relations[rng() % 2], objects[rng() % 3]);
    if (!state.contains(t)) adds.push_back(t);
  }
  return StateDiff(TripleSet(adds), TripleSet(removes));
}

WorldState random_state(std::mt19937_64& rng) {
  static const char* subjects[] = {"a", "b", "c"};
  static const char* relations[] = {"has", "at"};
  static const char* objects[] = {"x", "y", "z"};
  WorldState s;
  for (int i = 0; i < 5; ++i) {
    s.insert(make_triple(subjects[rng() % 3], relations[rng() % 2], objects[rng() % 3]));
  }
  return s;
}

}  // namespace

TEST_CASE("symbols reject empty and padded text") {
  CHECK_THROWS_AS(Symbol(""), DataError);
  CHECK_THROWS_AS(Symbol(" John"), DataError);
  CHECK_THROWS_AS(Symbol("John\t"), DataError);
  CHECK(Symbol("John").str() == "John");
  CHECK(Symbol("a") < Symbol("b"));
}

TEST_CASE("triple sets stay sorted and unique") {
  TripleSet s{tr("b", "has", "x"), tr("a", "has", "x"), tr("b", "has", "x")};
  REQUIRE(s.size() == 2);
  CHECK(s.items()[0] == tr("a", "has", "x"));
  CHECK_FALSE(s.insert(tr("a", "has", "x")));
  CHECK(s.insert(tr("c", "has", "x")));
  CHECK(s.erase(tr("c", "has", "x")));
  CHECK_FALSE(s.erase(tr("c", "has", "x")));
  CHECK(s.contains(tr("b", "has", "x")));
}

TEST_CASE("set algebra") {
  TripleSet a{tr("a", "r", "1"), tr("b", "r", "1")};
  TripleSet b{tr("b", "r", "1"), tr("c", "r", "1")};
  CHECK(set_union(a, b).size() == 3);
  CHECK(set_difference(a, b) == TripleSet{tr("a", "r", "1")});
  CHECK(set_intersection(a, b) == TripleSet{tr("b", "r", "1")});
  CHECK(intersects(a, b));
  CHECK_FALSE(intersects(a, TripleSet{tr("z", "r", "1")}));
}

TEST_CASE("state diffs cancel overlap at construction") {
  StateDiff d(TripleSet{tr("a", "r", "1"), tr("b", "r", "1")}, TripleSet{tr("b", "r", "1")});
  CHECK(d.adds() == TripleSet{tr("a", "r", "1")});
  CHECK(d.removes().empty());
  CHECK(diff_complexity(d) == 1);
}

TEST_CASE("compute_diff on the give example") {
  WorldState before{tr("John", "has", "book"), tr("John", "location", "home")};
  WorldState after{tr("Mary", "has", "book"), tr("John", "location", "home")};
  StateDiff d = compute_diff(before, after);
  CHECK(d.adds() == TripleSet{tr("Mary", "has", "book")});
  CHECK(d.removes() == TripleSet{tr("John", "has", "book")});
  CHECK(apply_diff(before, d) == after);
}

TEST_CASE("compute_diff of identical states is empty") {
  WorldState s{tr("a", "r", "1")};
  CHECK(compute_diff(s, s).empty());
  CHECK(compute_diff({}, {}).empty());
}

TEST_CASE("merge_diffs cancels add-then-remove") {
  StateDiff add(TripleSet{tr("a", "r", "1")}, {});
  StateDiff remove({}, TripleSet{tr("a", "r", "1")});
  CHECK(merge_diffs(add, remove).empty());
  CHECK(merge_diffs(remove, add).empty());
  CHECK(merge_diffs(add, StateDiff{}) == add);
  CHECK(merge_diffs(StateDiff{}, add) == add);
}

TEST_CASE("diff_remainder and invert") {
  StateDiff target(TripleSet{tr("a", "r", "1"), tr("b", "r", "1")}, TripleSet{tr("c", "r", "1")});
  StateDiff part(TripleSet{tr("a", "r", "1")}, {});
  StateDiff rest = diff_remainder(target, part);
  CHECK(rest.adds() == TripleSet{tr("b", "r", "1")});
  CHECK(rest.removes() == TripleSet{tr("c", "r", "1")});
  CHECK(invert(invert(target)) == target);
  CHECK(merge_diffs(target, invert(target)).empty());
}

TEST_CASE("property: applying a merged chain equals applying each step") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    WorldState s0 = random_state(rng);
    StateDiff d1 = random_applicable(s0, rng);
    WorldState s1 = apply_diff(s0, d1);
    StateDiff d2 = random_applicable(s1, rng);
    WorldState s2 = apply_diff(s1, d2);
    StateDiff d3 = random_applicable(s2, rng);
    WorldState s3 = apply_diff(s2, d3);

    CHECK(apply_diff(s0, merge_diffs(d1, d2)) == s2);
    // Associative on applicable chains.
    CHECK(merge_diffs(merge_diffs(d1, d2), d3) == merge_diffs(d1, merge_diffs(d2, d3)));
    CHECK(merge_diffs(merge_diffs(d1, d2), d3) == compute_diff(s0, s3));
  }
}

TEST_CASE("property: compute_diff then apply_diff restores the after state") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    WorldState a = random_state(rng);
    WorldState b = random_state(rng);
    StateDiff d = compute_diff(a, b);
    CHECK(apply_diff(a, d) == b);
    CHECK(apply_diff(b, invert(d)) == a);
    CHECK_FALSE(intersects(d.adds(), d.removes()));
  }
}

TEST_CASE("duplicate event ids are rejected") {
  std::vector<Event> events(2);
  events[0].id = "e1";
  events[1].id = "e2";
  CHECK_NOTHROW(check_unique_ids(events));
  events[1].id = "e1";
  CHECK_THROWS_AS(check_unique_ids(events), DataError);
}
