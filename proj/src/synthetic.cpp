#include "eventprim/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace eventprim {

namespace {

// std::uniform_int_distribution is implementation-defined; these helpers keep
// generated data identical across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

const std::vector<std::string> kPeople = {
    "John", "Mary",  "Alice", "Bob",    "Carol", "David", "Emma", "Frank",
    "Grace", "Henry", "Irene", "Jack",  "Kate",  "Liam",  "Mia",  "Noah",
    "Olivia", "Paul", "Quinn", "Rose",  "Sam",   "Tina",  "Uma",  "Victor"};
const std::vector<std::string> kObjects = {
    "book", "ball", "apple", "bread", "coffee", "key",  "phone", "letter", "watch", "ring",
    "lamp", "bike", "camera", "guitar", "hat",  "cake", "wallet", "laptop", "cup", "umbrella"};
const std::vector<std::string> kLocations = {
    "home", "office", "park", "school", "store",  "library", "station", "cafe",
    "beach", "museum", "hospital", "market", "garden", "bank", "airport", "gym"};
const std::vector<std::string> kInfo = {
    "secret", "news", "recipe", "password", "answer", "rumor",   "plan",  "address",
    "story",  "joke", "fact",   "formula",  "lesson", "schedule", "price", "result"};
const std::vector<std::string> kEmotions = {"neutral", "happy", "sad", "angry", "calm", "excited"};

std::vector<std::string> pool_names(const std::vector<std::string>& base, std::size_t n,
                                    const std::string& stem) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i < base.size() ? base[i] : stem + std::to_string(i + 1));
  }
  return out;
}

RoleTriple rt(std::string s, std::string r, std::string o) {
  return RoleTriple{std::move(s), std::move(r), std::move(o)};
}

std::vector<TemplateSpec> build_templates() {
  std::vector<TemplateSpec> t;
  t.push_back({"give", "Transfer", {"give", "sell", "donate"}, false,
               {rt("A", "has", "O")}, {rt("B", "has", "O")},
               {rt("A", "location", "L1"), rt("B", "location", "L1")}, "{A} {verb} {B} the {O}"});
  t.push_back({"steal", "Transfer", {"steal"}, false,
               {rt("B", "has", "O")}, {rt("A", "has", "O")},
               {rt("A", "location", "L1"), rt("B", "location", "L1")}, "{A} {verb} the {O} from {B}"});
  t.push_back({"walk", "Movement", {"walk"}, false,
               {rt("A", "location", "L1")}, {rt("A", "location", "L2")}, {},
               "{A} {verb} from the {L1} to the {L2}"});
  t.push_back({"travel", "Movement", {"drive", "fly"}, false,
               {rt("A", "location", "L1")}, {rt("A", "location", "L2")}, {},
               "{A} {verb} from the {L1} to the {L2}"});
  t.push_back({"tell", "Information", {"tell", "teach", "inform"}, false, {},
               {rt("B", "knows", "I")}, {rt("A", "knows", "I")}, "{A} {verb} {B} the {I}"});
  t.push_back({"learn", "Learning", {"learn", "discover", "realize"}, false, {},
               {rt("A", "knows", "I")}, {}, "{A} {verb} the {I}"});
  t.push_back({"emote", "Emotion", {"become"}, false,
               {rt("A", "feels", "E1")}, {rt("A", "feels", "E2")}, {},
               "{A} {verb} {E2} instead of {E1}"});
  t.push_back({"eat", "Consumption", {"eat", "drink"}, false,
               {rt("A", "has", "O")}, {rt("A", "consumed", "O")}, {}, "{A} {verb} the {O}"});
  t.push_back({"build", "Creation/Destruction", {"build"}, false, {},
               {rt("A", "has", "O")}, {}, "{A} {verb} a {O}"});
  t.push_back({"destroy", "Creation/Destruction", {"destroy"}, false,
               {rt("A", "has", "O")}, {}, {}, "{A} {verb} the {O}"});
  t.push_back({"mail", "Mail", {"ship", "deliver"}, true,
               {rt("A", "has", "O"), rt("O", "location", "L1")},
               {rt("B", "has", "O"), rt("O", "location", "L2")},
               {rt("A", "location", "L1"), rt("B", "location", "L2")},
               "{A} {verb} {B} the {O} from the {L1} to the {L2}"});
  t.push_back({"trade", "Trade", {"trade", "exchange"}, true,
               {rt("A", "has", "O"), rt("B", "has", "O2")},
               {rt("B", "has", "O"), rt("A", "has", "O2")}, {},
               "{A} and {B} {verb} the {O} for the {O2}"});
  t.push_back({"fetch", "Fetch", {"retrieve", "collect"}, true,
               {rt("A", "location", "L1"), rt("B", "has", "O")},
               {rt("A", "location", "L2"), rt("A", "has", "O")}, {rt("B", "location", "L2")},
               "{A} goes to the {L2} and {verb}s the {O} from {B}"});
  t.push_back({"visit_teach", "Visit-to-teach", {"visit and teach"}, true,
               {rt("B", "location", "L1")}, {rt("B", "location", "L2"), rt("B", "knows", "I")},
               {rt("A", "location", "L2"), rt("A", "knows", "I")},
               "{B} visits {A} at the {L2} and {A} teaches {B} the {I}"});
  return t;
}

std::string render(std::string text, const std::map<std::string, std::string>& fill) {
  for (const auto& [key, value] : fill) {
    const std::string token = "{" + key + "}";
    for (auto pos = text.find(token); pos != std::string::npos; pos = text.find(token, pos)) {
      text.replace(pos, token.size(), value);
      pos += value.size();
    }
  }
  return text;
}

}  // namespace

const std::vector<TemplateSpec>& synthetic_templates() {
  static const std::vector<TemplateSpec> templates = build_templates();
  return templates;
}

GeneratorProfile GeneratorProfile::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read generator profile: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid generator profile " + path + ": " + e.what());
  }
  GeneratorProfile p;
  try {
    p.pools.people = j.value("people", p.pools.people);
    p.pools.objects = j.value("objects", p.pools.objects);
    p.pools.locations = j.value("locations", p.pools.locations);
    p.pools.info = j.value("info", p.pools.info);
    p.rng_seed = j.value("rng_seed", p.rng_seed);
    if (j.contains("weights")) {
      for (const auto& [name, w] : j.at("weights").items()) p.weights[name] = w.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid generator profile " + path + ": " + e.what());
  }
  for (const auto& [name, w] : p.weights) {
    const auto& ts = synthetic_templates();
    if (std::none_of(ts.begin(), ts.end(), [&](const TemplateSpec& t) { return t.name == name; })) {
      throw DataError("generator profile names unknown template '" + name + "'");
    }
    if (w < 0) throw DataError("negative weight for template '" + name + "'");
  }
  return p;
}

std::vector<Event> generate_synthetic(std::size_t n, const GeneratorProfile& profile) {
  if (n < 1) throw std::invalid_argument("generate_synthetic needs n >= 1");
  const auto& templates = synthetic_templates();
  std::vector<double> cumulative;
  double total = 0;
  for (const auto& t : templates) {
    auto it = profile.weights.find(t.name);
    total += it == profile.weights.end() ? 1.0 : it->second;
    cumulative.push_back(total);
  }
  if (total <= 0) throw DataError("generator profile disables every template");

  const auto people = pool_names(kPeople, profile.pools.people, "person");
  const auto objects = pool_names(kObjects, profile.pools.objects, "object");
  const auto locations = pool_names(kLocations, profile.pools.locations, "place");
  const auto info = pool_names(kInfo, profile.pools.info, "fact");
  auto pool_for = [&](const std::string& role) -> const std::vector<std::string>& {
    switch (role.front()) {
      case 'A': case 'B': return people;
      case 'O': return objects;
      case 'L': return locations;
      case 'I': return info;
      default: return kEmotions;
    }
  };

  std::mt19937_64 rng(profile.rng_seed);
  std::vector<Event> events;
  events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform01(rng) * total;
    const std::size_t ti = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    const TemplateSpec& spec = templates[std::min(ti, templates.size() - 1)];

    // Roles in fixed order; fillers distinct within each pool.
    std::map<std::string, std::string> fill;
    std::map<const std::vector<std::string>*, std::vector<std::string>> used;
    for (const char* role : {"A", "B", "O", "O2", "L1", "L2", "I", "E1", "E2"}) {
      const auto& pool = pool_for(role);
      auto& taken = used[&pool];
      if (taken.size() >= pool.size()) throw DataError("pool too small for template " + spec.name);
      std::string pick;
      do {
        pick = pool[uniform_below(rng, pool.size())];
      } while (std::find(taken.begin(), taken.end(), pick) != taken.end());
      taken.push_back(pick);
      fill[role] = pick;
    }
    fill["verb"] = spec.verbs[uniform_below(rng, spec.verbs.size())];

    auto ground = [&](const RoleTriple& r) {
      return make_triple(fill.at(r.subject), r.relation, fill.at(r.object));
    };
    Event e;
    char id[32];
    std::snprintf(id, sizeof id, "syn_%05zu", i + 1);
    e.id = id;
    e.text = render(spec.text, fill);
    for (const auto& r : spec.context) {
      e.before.insert(ground(r));
      e.after.insert(ground(r));
    }
    for (const auto& r : spec.removes) e.before.insert(ground(r));
    for (const auto& r : spec.adds) e.after.insert(ground(r));
    e.meta = {{"template", spec.name},
              {"category", spec.category},
              {"verb", fill["verb"]},
              {"source", "synthetic"},
              {"compound", spec.compound ? "true" : "false"}};
    events.push_back(std::move(e));
  }
  return events;
}

std::pair<std::vector<Event>, std::vector<Event>> split_train_test(std::span<const Event> events,
                                                                   double ratio,
                                                                   std::uint64_t rng_seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split ratio must be in (0, 1)");
  const std::size_t n = events.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(rng_seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);

  const auto n_train = static_cast<std::size_t>(ratio * static_cast<double>(n));
  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  std::pair<std::vector<Event>, std::vector<Event>> out;
  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? out.first : out.second).push_back(events[i]);
  return out;
}

}  // namespace eventprim
