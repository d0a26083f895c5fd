#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "eventprim/dsl.hpp"

namespace eventprim::testing {

// Brute-force reference for programs of at most two seed operators. Triples
// over 4 arguments and 2 relations are encoded as bits of a 64-bit mask.
namespace oracle {

constexpr std::array<const char*, 4> kArgs = {"a", "b", "c", "d"};
constexpr std::array<const char*, 2> kRels = {"has", "at"};

inline int bit(int s, int r, int o) { return (s * 2 + r) * 4 + o; }

struct Diff {
  std::uint64_t adds = 0;
  std::uint64_t removes = 0;
  bool operator==(const Diff&) const = default;
};

// Overlap cancels, as for StateDiff.
inline Diff normalized(std::uint64_t adds, std::uint64_t removes) {
  return Diff{adds & ~removes, removes & ~adds};
}

inline Diff merge(const Diff& x, const Diff& y) {
  return normalized((x.adds & ~y.removes) | (y.adds & ~x.removes),
                    (x.removes & ~y.adds) | (y.removes & ~x.adds));
}

struct Instance {
  Diff diff;
  int cost;
};

inline Diff encode(const StateDiff& d) {
  auto index = [](const Symbol& s, const auto& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (s.str() == names[i]) return static_cast<int>(i);
    }
    return -1;
  };
  Diff out;
  for (const auto* half : {&d.adds(), &d.removes()}) {
    for (const auto& t : *half) {
      const std::uint64_t m = std::uint64_t{1}
                              << bit(index(t.subject, kArgs), index(t.relation, kRels),
                                     index(t.object, kArgs));
      (half == &d.adds() ? out.adds : out.removes) |= m;
    }
  }
  return out;
}

// Every SET, UNSET, MOVE_PROP and CHANGE instance whose symbols come from
// the target: arguments from its subjects and objects, properties from its
// relations. Cost is 1 + arity.
inline std::vector<Instance> instances(const StateDiff& target) {
  std::set<int> args;
  std::set<int> rels;
  for (const auto* half : {&target.adds(), &target.removes()}) {
    for (const auto& t : *half) {
      for (int i = 0; i < 4; ++i) {
        if (t.subject.str() == kArgs[i] || t.object.str() == kArgs[i]) args.insert(i);
      }
      for (int i = 0; i < 2; ++i) {
        if (t.relation.str() == kRels[i]) rels.insert(i);
      }
    }
  }
  std::vector<Instance> out;
  for (int e : args) {
    for (int p : rels) {
      for (int v : args) {
        const std::uint64_t m = std::uint64_t{1} << bit(e, p, v);
        out.push_back({normalized(m, 0), 4});  // SET
        out.push_back({normalized(0, m), 4});  // UNSET
        for (int w : args) {
          // MOVE_PROP(s=e, d=w, p, v) and CHANGE(e, p, v_old=v, v_new=w)
          out.push_back({normalized(std::uint64_t{1} << bit(w, p, v), m), 5});
          out.push_back({normalized(std::uint64_t{1} << bit(e, p, w), m), 5});
        }
      }
    }
  }
  return out;
}

// Minimum cost of a program with at most two steps whose net diff is the
// target, or -1.
inline int min_cost(const StateDiff& target) {
  const Diff goal = encode(target);
  if (goal == Diff{}) return 0;
  const auto inst = instances(target);
  int best = std::numeric_limits<int>::max();
  for (const auto& x : inst) {
    if (x.diff == goal) best = std::min(best, x.cost);
  }
  for (const auto& x : inst) {
    if (x.cost + 4 >= best) continue;
    for (const auto& y : inst) {
      if (x.cost + y.cost < best && merge(x.diff, y.diff) == goal) best = x.cost + y.cost;
    }
  }
  return best == std::numeric_limits<int>::max() ? -1 : best;
}

}  // namespace oracle

// Net diff of 1 to 3 random seed instances over the oracle's symbols.
inline StateDiff random_target(std::mt19937_64& rng, const Library& seed) {
  StateDiff net;
  const std::size_t steps = 1 + rng() % 3;
  for (std::size_t i = 0; i < steps; ++i) {
    const auto& t = seed.templates()[rng() % seed.size()];
    Binding b;
    for (const auto& s : t.slots()) {
      b.emplace(s.name, Symbol(s.type == SlotType::property ? oracle::kRels[rng() % 2]
                                                            : oracle::kArgs[rng() % 4]));
    }
    net = merge_diffs(net, instantiate(t, b));
  }
  return net;
}

}  // namespace eventprim::testing
