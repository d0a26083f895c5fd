#include "eventprim/mdl.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace eventprim {

namespace {

double log2_size(std::size_t n) { return n <= 1 ? 0.0 : std::log2(static_cast<double>(n)); }

std::size_t literal_pool(const Pools& pools, int position) {
  switch (position) {
    case 0: return pools.entities.size();
    case 1: return pools.properties.size();
    default: return pools.values.size() + pools.locations.size();
  }
}

}  // namespace

Units template_dl(const OperatorTemplate& t) {
  return static_cast<Units>(t.arity() + t.pattern_count());
}

Units instance_dl(const OperatorTemplate& t) { return 1 + static_cast<Units>(t.arity()); }

Units instance_dl(const OperatorInstance& i, const Library& lib) {
  return instance_dl(lib.at(i.template_name));
}

Units program_dl(const Program& p, const Library& lib) {
  Units total = 0;
  for (const auto& step : p.steps) total += instance_dl(step, lib);
  return total;
}

Units unexplained_penalty(const StateDiff& target) {
  return 2 * static_cast<Units>(diff_complexity(target));
}

MdlReport total_mdl(std::span<const Event> events, const WakeResults& wake, const Library& lib) {
  if (events.size() != wake.size()) {
    throw InvariantError("total_mdl: wake results not aligned with events");
  }
  MdlReport r;
  for (const auto& t : lib.templates()) r.library_cost += template_dl(t);
  r.per_event.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    Units cost;
    if (wake[i]) {
      cost = program_dl(*wake[i], lib);
      r.program_cost += cost;
      ++r.explained;
    } else {
      cost = unexplained_penalty(events[i].diff());
      r.unexplained_penalty += cost;
    }
    r.per_event.push_back(cost);
  }
  r.total = r.library_cost + r.program_cost + r.unexplained_penalty;
  return r;
}

Units savings(std::int64_t n, Units c_old, Units c_new, Units c_lib) {
  return n * c_old - (c_lib + n * c_new);
}

Pools Pools::from_events(std::span<const Event> events) {
  Pools p;
  auto add = [&p](const Triple& t) {
    p.properties.insert(t.relation);
    for (const auto& arg : {t.subject, t.object}) {
      p.entities.insert(arg);
      p.values.insert(arg);
    }
    if (t.relation.str() == "location") p.locations.insert(t.object);
  };
  for (const auto& e : events) {
    for (const auto& t : e.before) add(t);
    for (const auto& t : e.after) add(t);
  }
  return p;
}

std::size_t Pools::size(SlotType type) const {
  switch (type) {
    case SlotType::entity: return entities.size();
    case SlotType::location: return locations.size();
    case SlotType::property: return properties.size();
    case SlotType::value: return values.size() + locations.size();
  }
  return 0;
}

UsageStats UsageStats::from_wake(const WakeResults& wake, const Library& lib) {
  UsageStats s;
  for (const auto& program : wake) {
    if (!program) continue;
    const auto& steps = program->steps;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const auto& step = steps[i];
      ++s.template_counts[step.template_name];
      ++s.total_instances;
      const auto& t = lib.at(step.template_name);
      for (const auto& slot : t.slots()) {
        if (slot.type != SlotType::property) continue;
        auto it = step.binding.find(slot.name);
        if (it == step.binding.end()) continue;
        ++s.property_counts[{t.name(), slot.name, it->second.str()}];
      }
      if (i + 1 < steps.size()) ++s.pair_counts[{step.template_name, steps[i + 1].template_name}];
    }
  }
  return s;
}

std::size_t UsageStats::count(const std::string& template_name) const {
  auto it = template_counts.find(template_name);
  return it == template_counts.end() ? 0 : it->second;
}

double elias_gamma_bits(std::uint64_t n) {
  if (n == 0) throw std::domain_error("elias gamma is defined for n >= 1");
  return 2.0 * static_cast<double>(std::bit_width(n) - 1) + 1.0;
}

double bayes_template_bits(const OperatorTemplate& t, const Pools& pools) {
  // A template without slots still needs its (zero) count coded; gamma
  // starts at 1, so counts are shifted for that case only.
  double bits = elias_gamma_bits(std::max<std::size_t>(t.arity(), 1)) +
                elias_gamma_bits(std::max<std::size_t>(t.pattern_count(), 1)) +
                static_cast<double>(t.arity()) * 2.0;
  const double ref_bits = log2_size(t.arity());
  auto term_bits = [&](const PatternTerm& term, int position) {
    if (std::holds_alternative<SlotRef>(term)) return 1.0 + ref_bits;
    return 1.0 + log2_size(literal_pool(pools, position));
  };
  for (const auto* list : {&t.removes(), &t.adds()}) {
    for (const auto& p : *list) {
      bits += term_bits(p.subject, 0) + term_bits(p.relation, 1) + term_bits(p.object, 2);
    }
  }
  return bits;
}

double bayes_selection_bits(const OperatorTemplate& t, const UsageStats& stats,
                            const Library& lib) {
  const double numerator = static_cast<double>(stats.count(t.name()) + 1);
  const double denominator = static_cast<double>(stats.total_instances + lib.size());
  return -std::log2(numerator / denominator);
}

double bayes_binding_bits(const OperatorTemplate& t, const Pools& pools) {
  double bits = 0;
  for (const auto& s : t.slots()) {
    const std::size_t n = pools.size(s.type);
    if (n == 0) {
      throw DataError("no " + std::string(to_string(s.type)) + " pool for slot '" + s.name +
                      "' of " + t.name());
    }
    bits += log2_size(n);
  }
  return bits;
}

double bayes_binding_bits(const OperatorInstance& i, const Library& lib, const Pools& pools) {
  return bayes_binding_bits(lib.at(i.template_name), pools);
}

double bayes_unexplained_bits(const StateDiff& target, const Pools& pools) {
  const double per_triple = log2_size(pools.entities.size() + pools.locations.size()) +
                            log2_size(pools.properties.size()) +
                            log2_size(pools.values.size() + pools.locations.size());
  return 2.0 * per_triple * static_cast<double>(diff_complexity(target));
}

BayesReport bayes_total(std::span<const Event> events, const WakeResults& wake,
                        const Library& lib, const Pools& pools) {
  if (events.size() != wake.size()) {
    throw InvariantError("bayes_total: wake results not aligned with events");
  }
  const UsageStats stats = UsageStats::from_wake(wake, lib);
  BayesReport r;
  r.events = events.size();
  for (const auto& t : lib.templates()) r.library_bits += bayes_template_bits(t, pools);

  // Per-template instance costs are constant, so cache them.
  std::map<std::string, double, std::less<>> instance_bits;
  for (const auto& t : lib.templates()) {
    instance_bits[t.name()] = bayes_selection_bits(t, stats, lib);
  }
  std::size_t explained = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (wake[i]) {
      ++explained;
      for (const auto& step : wake[i]->steps) {
        auto it = instance_bits.find(step.template_name);
        if (it == instance_bits.end()) lib.at(step.template_name);  // throws
        r.program_bits += it->second + bayes_binding_bits(step, lib, pools);
      }
    } else {
      r.unexplained_bits += bayes_unexplained_bits(events[i].diff(), pools);
    }
  }
  r.total_bits = r.library_bits + r.program_bits + r.unexplained_bits;
  r.coverage = events.empty() ? 1.0 : static_cast<double>(explained) / events.size();
  r.bits_per_event = events.empty() ? 0.0 : r.total_bits / static_cast<double>(events.size());
  return r;
}

double log2_bayes_factor(const BayesReport& a, const BayesReport& b) {
  if (a.events != b.events) {
    throw DataError("Bayes factor needs reports over the same events");
  }
  return b.total_bits - a.total_bits;
}

}  // namespace eventprim
