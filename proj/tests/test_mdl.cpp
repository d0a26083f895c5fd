#include <cmath>
#include <random>

#include "doctest.h"
#include "eventprim/mdl.hpp"
#include "eventprim/search.hpp"
#include "eventprim/synthetic.hpp"

using namespace eventprim;

namespace {

Pools table_pools(std::size_t people, std::size_t objects, std::size_t properties) {
  Pools p;
  for (std::size_t i = 0; i < people; ++i) p.entities.insert(Symbol("p" + std::to_string(i)));
  for (std::size_t i = 0; i < objects; ++i) p.values.insert(Symbol("o" + std::to_string(i)));
  for (std::size_t i = 0; i < properties; ++i) p.properties.insert(Symbol("r" + std::to_string(i)));
  return p;
}

OperatorTemplate atrans() { return specialize(seed_library().at("MOVE_PROP"), "p", Symbol("has")); }

OperatorTemplate mail() {
  const Library seed = seed_library();
  return compose(atrans(), specialize(seed.at("CHANGE"), "p", Symbol("location")), {{"v", "e"}});
}

}  // namespace

TEST_CASE("worked example: template and instance costs") {
  const Library seed = seed_library();
  CHECK(template_dl(seed.at("MOVE_PROP")) == 6);
  CHECK(template_dl(atrans()) == 5);
  CHECK(template_dl(seed.at("SET")) == 4);
  CHECK(instance_dl(seed.at("MOVE_PROP")) == 5);
  CHECK(instance_dl(atrans()) == 4);
  CHECK(instance_dl(seed.at("MOVE_PROP")) - instance_dl(atrans()) == 1);
}

TEST_CASE("worked example: mail two steps versus one compound") {
  const Library seed = seed_library();
  CHECK(instance_dl(seed.at("MOVE_PROP")) + instance_dl(seed.at("CHANGE")) == 10);
  CHECK(mail().arity() == 5);
  CHECK(instance_dl(mail()) == 6);
}

TEST_CASE("savings") {
  CHECK(savings(110, 5, 4, 5) == 105);
  CHECK(savings(0, 5, 4, 7) == -7);
  CHECK(savings(40, 6, 6, 9) == -9);
}

TEST_CASE("total_mdl") {
  const Library seed = seed_library();
  Event e;
  e.id = "e";
  e.before = {make_triple("John", "has", "book")};
  e.after = {make_triple("Mary", "has", "book")};
  std::vector<Event> events{e};

  const MdlReport miss = total_mdl(events, WakeResults{std::nullopt}, seed);
  CHECK(miss.unexplained_penalty == 4);
  CHECK(miss.library_cost == 4 + 4 + 6 + 6);
  CHECK(miss.total == 24);
  CHECK(miss.explained == 0);

  const MdlReport none = total_mdl({}, {}, seed);
  CHECK(none.total == none.library_cost);

  CHECK_THROWS_AS(total_mdl(events, {}, seed), InvariantError);
}

TEST_CASE("elias gamma") {
  CHECK(elias_gamma_bits(1) == 1);
  CHECK(elias_gamma_bits(2) == 3);
  CHECK(elias_gamma_bits(3) == 3);
  CHECK(elias_gamma_bits(4) == 5);
  CHECK(elias_gamma_bits(1024) == 21);
  CHECK_THROWS(elias_gamma_bits(0));
}

TEST_CASE("selection bits") {
  Library lib;
  for (int i = 0; i < 14; ++i) {
    lib.add(OperatorTemplate("T" + std::to_string(i), {}, {}, {}));
  }
  UsageStats stats;
  stats.template_counts["T0"] = 499;
  stats.total_instances = 1000;
  CHECK(bayes_selection_bits(lib.at("T0"), stats, lib) == doctest::Approx(1.020).epsilon(1e-3));
  CHECK(bayes_selection_bits(lib.at("T0"), stats, lib) ==
        doctest::Approx(-std::log2(500.0 / 1014.0)).epsilon(1e-12));

  const Library seed = seed_library();
  CHECK(bayes_selection_bits(seed.at("SET"), UsageStats{}, seed) == 2.0);

  Library one;
  one.add(OperatorTemplate("ONLY", {}, {}, {}));
  UsageStats all;
  all.template_counts["ONLY"] = 1000000;
  all.total_instances = 1000000;
  CHECK(bayes_selection_bits(one.at("ONLY"), all, one) < 1e-5);
}

TEST_CASE("binding bits") {
  const Pools pools = table_pools(24, 20, 5);
  // Entity slots range over people, value slots over objects.
  CHECK(bayes_binding_bits(atrans(), pools) ==
        doctest::Approx(2 * std::log2(24.0) + std::log2(20.0)));
  CHECK(bayes_binding_bits(atrans(), pools) == doctest::Approx(13.49).epsilon(1e-3));

  const OperatorTemplate one("ONE", {{"e", SlotType::entity}}, {}, {});
  CHECK(bayes_binding_bits(one, pools) == doctest::Approx(4.585).epsilon(1e-3));
  CHECK(bayes_binding_bits(OperatorTemplate("ZERO", {}, {}, {}), pools) == 0.0);

  const OperatorTemplate loc("LOC", {{"l", SlotType::location}}, {}, {});
  CHECK_THROWS_AS(bayes_binding_bits(loc, pools), DataError);
}

TEST_CASE("template bits golden values") {
  const Pools pools = table_pools(24, 20, 5);
  // gamma(4) + gamma(2) + 4 * 2 + 6 refs * (1 + log2 4)
  CHECK(bayes_template_bits(seed_library().at("MOVE_PROP"), pools) == doctest::Approx(34.0));
  // gamma(3) + gamma(2) + 3 * 2 + 4 refs * (1 + log2 3) + 2 literals * (1 + log2 5)
  const double expected = 3 + 3 + 6 + 4 * (1 + std::log2(3.0)) + 2 * (1 + std::log2(5.0));
  CHECK(bayes_template_bits(atrans(), pools) == doctest::Approx(expected));
}

TEST_CASE("pools from events") {
  Event e;
  e.id = "e";
  e.before = {make_triple("John", "location", "park"), make_triple("John", "has", "book")};
  e.after = {make_triple("John", "location", "home"), make_triple("Mary", "has", "book")};
  const std::vector<Event> events{e};
  const Pools p = Pools::from_events(events);
  CHECK(p.properties.size() == 2);
  CHECK(p.locations.size() == 2);
  CHECK(p.entities.size() == 5);
  CHECK(p.size(SlotType::value) == p.values.size() + p.locations.size());
}

TEST_CASE("unexplained bits") {
  const Pools pools = table_pools(24, 20, 5);
  StateDiff d(TripleSet{make_triple("a", "r", "b")}, TripleSet{make_triple("a", "r", "c")});
  const double per = std::log2(24.0) + std::log2(5.0) + std::log2(20.0);
  CHECK(bayes_unexplained_bits(d, pools) == doctest::Approx(2 * 2 * per));
  CHECK(bayes_unexplained_bits(StateDiff{}, pools) == 0.0);
}

TEST_CASE("bayes factor") {
  BayesReport a;
  a.events = 10;
  a.total_bits = 100;
  BayesReport b = a;
  CHECK(log2_bayes_factor(a, b) == 0.0);
  b.total_bits = 130;
  CHECK(log2_bayes_factor(a, b) == 30.0);
  b.events = 11;
  CHECK_THROWS_AS(log2_bayes_factor(a, b), DataError);
}

TEST_CASE("property: bayes factor is antisymmetric") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> bits(0, 1e5);
  for (int i = 0; i < 1000; ++i) {
    BayesReport a;
    BayesReport b;
    a.events = b.events = 500;
    a.total_bits = bits(rng);
    b.total_bits = bits(rng);
    CHECK(log2_bayes_factor(a, b) == -log2_bayes_factor(b, a));
  }
}

TEST_CASE("an unused operator adds exactly its library cost") {
  GeneratorProfile profile;
  profile.rng_seed = 5;
  const auto events = generate_synthetic(80, profile);
  const Pools pools = Pools::from_events(events);
  const Library base = seed_library();
  const SearchConfig cfg;

  // A relation that never occurs, so the operator can never be used.
  Library wider = base;
  REQUIRE(wider.add(specialize(base.at("CHANGE"), "p", Symbol("never_seen"))));
  const auto& unused = wider.at("CHANGE_never_seen");

  const WakeResults wake = explain_all(events, base, cfg);
  const WakeResults wake_wider = explain_all(events, wider, cfg);
  REQUIRE(wake == wake_wider);

  const MdlReport m0 = total_mdl(events, wake, base);
  const MdlReport m1 = total_mdl(events, wake_wider, wider);
  CHECK(m1.total - m0.total == template_dl(unused));
  CHECK(m1.program_cost == m0.program_cost);

  const BayesReport b0 = bayes_total(events, wake, base, pools);
  const BayesReport b1 = bayes_total(events, wake_wider, wider, pools);
  CHECK(b1.library_bits - b0.library_bits == doctest::Approx(bayes_template_bits(unused, pools)));
  CHECK(b1.unexplained_bits == b0.unexplained_bits);
  // Add-one smoothing spreads one more pseudo-count over the instances, so
  // each selection costs log2((T + L + 1) / (T + L)) bits more.
  const auto stats = UsageStats::from_wake(wake, base);
  const double t = static_cast<double>(stats.total_instances);
  const double l = static_cast<double>(base.size());
  CHECK(b1.program_bits - b0.program_bits == doctest::Approx(t * std::log2((t + l + 1) / (t + l))));
}

TEST_CASE("bayes_total is deterministic and consistent") {
  GeneratorProfile profile;
  profile.rng_seed = 9;
  const auto events = generate_synthetic(60, profile);
  const Pools pools = Pools::from_events(events);
  const Library lib = seed_library();
  const WakeResults wake = explain_all(events, lib, SearchConfig{});
  const BayesReport a = bayes_total(events, wake, lib, pools);
  const BayesReport b = bayes_total(events, wake, lib, pools);
  CHECK(a.total_bits == b.total_bits);
  CHECK(a.total_bits == doctest::Approx(a.library_bits + a.program_bits + a.unexplained_bits));
  CHECK(a.coverage == 1.0);
  CHECK(a.bits_per_event == doctest::Approx(a.total_bits / 60));
  CHECK(a.library_bits >= 0);
  CHECK(a.program_bits >= 0);
}
