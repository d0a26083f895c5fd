#include "eventprim/discovery.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace eventprim {

namespace {

struct Scored {
  WakeResults wake;
  MdlReport mdl;
  double bayes_bits = 0;
};

Scored score(std::span<const Event> events, const Library& lib, const SearchConfig& cfg,
             const Pools& pools) {
  Scored s;
  s.wake = explain_all(events, lib, cfg);
  s.mdl = total_mdl(events, s.wake, lib);
  s.bayes_bits = bayes_total(events, s.wake, lib, pools).total_bits;
  return s;
}

bool improves(const Scored& next, const Scored& current) {
  return next.mdl.total < current.mdl.total;
}

bool proposal_before(const Proposal& a, const Proposal& b) {
  if (a.savings != b.savings) return a.savings > b.savings;
  if (a.kind != b.kind) return a.kind == ProposalKind::specialization;
  return a.new_template.name() < b.new_template.name();
}

std::vector<Unification> shared_bindings(const OperatorTemplate& a, const OperatorInstance& ia,
                                         const OperatorTemplate& b, const OperatorInstance& ib) {
  std::vector<Unification> out;
  for (const auto& sb : b.slots()) {
    const auto vb = ib.binding.find(sb.name);
    if (vb == ib.binding.end()) continue;
    for (const auto& sa : a.slots()) {
      const auto va = ia.binding.find(sa.name);
      if (va == ia.binding.end() || !(va->second == vb->second)) continue;
      if (!slot_types_unifiable(sa.type, sb.type)) continue;
      out.emplace_back(sa.name, sb.name);
      break;
    }
  }
  return out;
}

std::string fresh_name(const Library& lib, const std::string& base) {
  if (!lib.contains(base)) return base;
  for (int i = 2;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!lib.contains(candidate)) return candidate;
  }
}

OperatorTemplate with_name(const OperatorTemplate& t, std::string name) {
  return OperatorTemplate(std::move(name), t.slots(), t.removes(), t.adds(), t.provenance());
}

// Adds proposals in order, skipping any whose behaviour the library already
// has. Returns the names actually added.
std::vector<std::string> add_proposals(Library& lib, const std::vector<Proposal>& proposals) {
  std::vector<std::string> added;
  for (const auto& p : proposals) {
    const auto& t = p.new_template;
    const bool duplicate =
        std::any_of(lib.templates().begin(), lib.templates().end(),
                    [&](const OperatorTemplate& existing) { return structurally_equal(existing, t); });
    if (duplicate) continue;
    std::string name = fresh_name(lib, t.name());
    lib.add(name == t.name() ? t : with_name(t, name));
    added.push_back(name);
  }
  return added;
}

IterationRecord record(std::size_t iteration, std::span<const Event> events, const Library& lib,
                       const Scored& s, const Pools& pools) {
  IterationRecord r;
  r.iteration = iteration;
  r.library_size = lib.size();
  r.total_mdl = s.mdl.total;
  const BayesReport bayes = bayes_total(events, s.wake, lib, pools);
  r.bayes_bits = bayes.total_bits;
  r.coverage = bayes.coverage;
  return r;
}

}  // namespace

void DiscoveryConfig::validate() const {
  if (k < 1) throw std::invalid_argument("frequency threshold k must be >= 1");
  if (max_iterations < 1) throw std::invalid_argument("max iterations must be >= 1");
  search.validate();
}

std::size_t DiscoveryResult::iterations() const {
  return static_cast<std::size_t>(
      std::count_if(trace.begin(), trace.end(), [](const IterationRecord& r) { return !r.prune_row; }));
}

std::vector<Proposal> propose_specializations(const WakeResults& wake, const Library& lib,
                                              std::size_t k) {
  const UsageStats stats = UsageStats::from_wake(wake, lib);
  std::vector<Proposal> out;
  for (const auto& [key, n] : stats.property_counts) {
    if (n < k) continue;
    const auto& [name, slot, relation] = key;
    const OperatorTemplate& parent = lib.at(name);
    OperatorTemplate special = specialize(parent, slot, Symbol(relation));
    Proposal p{ProposalKind::specialization, special, n, instance_dl(parent),
               instance_dl(special), template_dl(special), 0};
    p.savings = savings(static_cast<std::int64_t>(n), p.c_old, p.c_new, p.c_lib);
    if (p.savings > 0) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), proposal_before);
  return out;
}

std::vector<Proposal> propose_compositions(const WakeResults& wake, const Library& lib,
                                           std::size_t k) {
  using Key = std::tuple<std::string, std::string, std::vector<Unification>>;
  std::map<Key, std::size_t> counts;
  for (const auto& program : wake) {
    if (!program) continue;
    const auto& steps = program->steps;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
      const auto& a = lib.at(steps[i].template_name);
      const auto& b = lib.at(steps[i + 1].template_name);
      ++counts[{a.name(), b.name(), shared_bindings(a, steps[i], b, steps[i + 1])}];
    }
  }
  std::vector<Proposal> out;
  for (const auto& [key, n] : counts) {
    if (n < k) continue;
    const auto& [first, second, unifications] = key;
    const auto& a = lib.at(first);
    const auto& b = lib.at(second);
    OperatorTemplate merged = compose(a, b, unifications);
    Proposal p{ProposalKind::composition, merged, n, instance_dl(a) + instance_dl(b),
               instance_dl(merged), template_dl(merged), 0};
    p.savings = savings(static_cast<std::int64_t>(n), p.c_old, p.c_new, p.c_lib);
    if (p.savings > 0) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), proposal_before);
  return out;
}

std::optional<Units> savings_per_use(const OperatorTemplate& t, const Library& lib,
                                     const SearchConfig& cfg) {
  // Ground the template with one distinct placeholder per slot.
  Binding b;
  for (const auto& s : t.slots()) b.emplace(s.name, Symbol("?" + s.name));
  const StateDiff own = instantiate(t, b);
  Library rest;
  for (const auto& other : lib.templates()) {
    if (other.name() != t.name()) rest.add(other);
  }
  const auto alternative = beam_search(own, rest, cfg);
  if (!alternative) return std::nullopt;
  return program_dl(*alternative, rest) - instance_dl(t);
}

PruneOutcome prune(const Library& lib, std::span<const Event> events, const WakeResults& wake,
                   const SearchConfig& cfg) {
  const Pools pools = Pools::from_events(events);
  PruneOutcome out{lib, wake, {}};
  MdlReport current = total_mdl(events, out.programs, out.library);

  auto try_remove = [&](const std::vector<std::string>& names) {
    Library smaller = out.library;
    for (const auto& n : names) smaller.remove(n);
    Scored s = score(events, smaller, cfg, pools);
    if (s.mdl.explained < current.explained || s.mdl.total > current.total) return false;
    out.library = std::move(smaller);
    out.programs = std::move(s.wake);
    current = s.mdl;
    out.removed.insert(out.removed.end(), names.begin(), names.end());
    return true;
  };

  for (bool changed = true; changed;) {
    changed = false;
    const UsageStats stats = UsageStats::from_wake(out.programs, out.library);
    std::vector<std::string> unused;
    std::vector<std::pair<double, std::string>> weak;  // (margin, name)
    for (const auto& t : out.library.templates()) {
      if (out.library.is_seed(t.name())) continue;
      const auto usage = static_cast<Units>(stats.count(t.name()));
      if (usage == 0) {
        unused.push_back(t.name());
        continue;
      }
      const auto per_use = savings_per_use(t, out.library, cfg);
      if (!per_use) continue;  // nothing else can express it
      const Units margin = usage * *per_use - template_dl(t);
      if (margin < 0) weak.emplace_back(static_cast<double>(margin), t.name());
    }
    if (!unused.empty()) {
      if (try_remove(unused)) {
        changed = true;
        continue;
      }
      for (const auto& n : unused) changed |= try_remove({n});
      if (changed) continue;
    }
    std::sort(weak.begin(), weak.end());
    for (const auto& [margin, name] : weak) {
      if (try_remove({name})) {
        changed = true;
        break;
      }
    }
  }
  return out;
}

DiscoveryResult run_discovery(std::span<const Event> events, const Library& seed,
                              const DiscoveryConfig& cfg) {
  cfg.validate();
  const Pools pools = Pools::from_events(events);
  DiscoveryResult result;
  Library lib = seed;
  Scored current = score(events, lib, cfg.search, pools);

  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    result.trace.push_back(record(t, events, lib, current, pools));
    if (t == cfg.max_iterations) break;

    std::vector<Proposal> proposals = propose_specializations(current.wake, lib, cfg.k);
    auto compositions = propose_compositions(current.wake, lib, cfg.k);
    proposals.insert(proposals.end(), compositions.begin(), compositions.end());
    std::sort(proposals.begin(), proposals.end(), proposal_before);

    Library candidate = lib;
    std::vector<std::string> added = add_proposals(candidate, proposals);
    if (added.empty()) break;
    Scored next = score(events, candidate, cfg.search, pools);

    if (!improves(next, current)) {
      // The batch did not pay off as a whole; keep only proposals that do
      // on their own, in savings order.
      candidate = lib;
      next = current;
      added.clear();
      for (const auto& p : proposals) {
        Library trial = candidate;
        auto names = add_proposals(trial, {p});
        if (names.empty()) continue;
        Scored s = score(events, trial, cfg.search, pools);
        if (improves(s, next)) {
          candidate = std::move(trial);
          next = std::move(s);
          added.insert(added.end(), names.begin(), names.end());
        }
      }
      if (added.empty()) break;
    }
    if (!improves(next, current)) {
      throw InvariantError("accepted proposals did not reduce total MDL");
    }
    result.trace.back().changes = added;
    lib = std::move(candidate);
    current = std::move(next);
  }

  result.pre_prune_size = lib.size();
  if (cfg.prune && lib.size() > seed.size()) {
    PruneOutcome pruned = prune(lib, events, current.wake, cfg.search);
    lib = std::move(pruned.library);
    current.wake = std::move(pruned.programs);
    current.mdl = total_mdl(events, current.wake, lib);
    IterationRecord row = record(result.trace.back().iteration, events, lib, current, pools);
    row.prune_row = true;
    row.changes = std::move(pruned.removed);
    result.trace.push_back(std::move(row));
  }

  result.library = std::move(lib);
  result.usage = UsageStats::from_wake(current.wake, result.library);
  result.programs = std::move(current.wake);
  return result;
}

}  // namespace eventprim
