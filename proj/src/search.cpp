#include "eventprim/search.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

namespace eventprim {

namespace {

struct Term {
  int slot = -1;  // -1 for literals
  std::optional<Symbol> literal;
};

struct CompiledPattern {
  std::array<Term, 3> terms;
  bool add = false;
};

struct CompiledTemplate {
  const OperatorTemplate* source = nullptr;
  std::vector<CompiledPattern> patterns;
  std::vector<SlotType> types;
  std::vector<bool> referenced;
  Units cost = 0;
};

using Values = std::vector<Symbol>;

CompiledTemplate compile(const OperatorTemplate& t) {
  CompiledTemplate ct;
  ct.source = &t;
  ct.cost = instance_dl(t);
  std::map<std::string, int> index;
  for (const auto& s : t.slots()) {
    index.emplace(s.name, static_cast<int>(ct.types.size()));
    ct.types.push_back(s.type);
  }
  ct.referenced.assign(ct.types.size(), false);
  auto term = [&](const PatternTerm& pt) {
    Term out;
    if (const auto* ref = std::get_if<SlotRef>(&pt)) {
      out.slot = index.at(ref->name);
      ct.referenced[out.slot] = true;
    } else {
      out.literal = std::get<Symbol>(pt);
    }
    return out;
  };
  for (bool add : {false, true}) {
    for (const auto& p : add ? t.adds() : t.removes()) {
      ct.patterns.push_back(CompiledPattern{{term(p.subject), term(p.relation), term(p.object)}, add});
    }
  }
  return ct;
}

const Symbol& component(const Triple& t, int k) {
  return k == 0 ? t.subject : (k == 1 ? t.relation : t.object);
}

StateDiff ground(const CompiledTemplate& ct, const Values& values) {
  std::vector<Triple> adds;
  std::vector<Triple> removes;
  auto sym = [&](const Term& term) -> const Symbol& {
    return term.slot >= 0 ? values[term.slot] : *term.literal;
  };
  for (const auto& p : ct.patterns) {
    (p.add ? adds : removes).push_back(Triple{sym(p.terms[0]), sym(p.terms[1]), sym(p.terms[2])});
  }
  return StateDiff(TripleSet(std::move(adds)), TripleSet(std::move(removes)));
}

Binding to_binding(const CompiledTemplate& ct, const Values& values) {
  Binding b;
  const auto& slots = ct.source->slots();
  for (std::size_t i = 0; i < slots.size(); ++i) b.emplace(slots[i].name, values[i]);
  return b;
}

struct Candidates {
  std::vector<Symbol> things;
  std::vector<Symbol> relations;

  explicit Candidates(const StateDiff& d) {
    std::set<Symbol> th;
    std::set<Symbol> rel;
    for (const auto* side : {&d.adds(), &d.removes()}) {
      for (const auto& t : *side) {
        th.insert(t.subject);
        th.insert(t.object);
        rel.insert(t.relation);
      }
    }
    things.assign(th.begin(), th.end());
    relations.assign(rel.begin(), rel.end());
  }

  const std::vector<Symbol>& for_type(SlotType type) const {
    return type == SlotType::property ? relations : things;
  }
};

bool overlaps(const StateDiff& inst, const StateDiff& todo) {
  return intersects(inst.adds(), todo.adds()) || intersects(inst.removes(), todo.removes());
}

class BindingEnumerator {
 public:
  BindingEnumerator(const CompiledTemplate& ct, const StateDiff& todo, const Candidates& cand,
                    std::size_t max_free)
      : ct_(ct), todo_(todo), cand_(cand), max_free_(max_free), assign_(ct.types.size()) {}

  std::vector<Values> run() {
    match(0);
    return {found_.begin(), found_.end()};
  }

 private:
  void match(std::size_t i) {
    if (i == ct_.patterns.size()) {
      if (matched_ > 0) fill_free();
      return;
    }
    match(i + 1);  // leave this pattern unmatched
    const auto& p = ct_.patterns[i];
    for (const auto& t : p.add ? todo_.adds() : todo_.removes()) {
      std::array<int, 3> newly{-1, -1, -1};
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        const Term& term = p.terms[k];
        const Symbol& value = component(t, k);
        if (term.slot < 0) {
          ok = *term.literal == value;
        } else if (assign_[term.slot]) {
          ok = *assign_[term.slot] == value;
        } else {
          assign_[term.slot] = value;
          newly[k] = term.slot;
        }
      }
      if (ok) {
        ++matched_;
        match(i + 1);
        --matched_;
      }
      for (int s : newly) {
        if (s >= 0) assign_[s].reset();
      }
    }
  }

  void fill_free() {
    std::vector<std::size_t> free;
    std::vector<std::optional<Symbol>> filled = assign_;
    for (std::size_t s = 0; s < filled.size(); ++s) {
      if (filled[s]) continue;
      const auto& pool = cand_.for_type(ct_.types[s]);
      if (!ct_.referenced[s]) {
        // Unreferenced slots do not affect the diff; pin them.
        if (pool.empty()) return;
        filled[s] = pool.front();
      } else {
        free.push_back(s);
      }
    }
    if (free.size() > max_free_) return;
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (j == free.size()) {
        Values v;
        v.reserve(filled.size());
        for (const auto& f : filled) v.push_back(*f);
        if (found_.contains(v)) return;
        if (overlaps(ground(ct_, v), todo_)) found_.insert(std::move(v));
        return;
      }
      for (const auto& sym : cand_.for_type(ct_.types[free[j]])) {
        filled[free[j]] = sym;
        rec(j + 1);
      }
      filled[free[j]].reset();
    };
    rec(0);
  }

  const CompiledTemplate& ct_;
  const StateDiff& todo_;
  const Candidates& cand_;
  std::size_t max_free_;
  std::vector<std::optional<Symbol>> assign_;
  std::size_t matched_ = 0;
  std::set<Values> found_;
};

struct Step {
  const CompiledTemplate* tmpl;
  Values values;
};

struct Node {
  std::vector<Step> steps;
  StateDiff net;
  StateDiff todo;
  Units cost = 0;
};

// What the rest of the program still has to do so that net becomes target:
// uncovered target triples plus undoing anything net did that target did not.
StateDiff todo_of(const StateDiff& target, const StateDiff& net) {
  return StateDiff(set_union(set_difference(target.adds(), net.adds()),
                             set_difference(net.removes(), target.removes())),
                   set_union(set_difference(target.removes(), net.removes()),
                             set_difference(net.adds(), target.adds())));
}

int compare_steps(const Step& a, const Step& b) {
  if (a.tmpl->types.size() != b.tmpl->types.size()) {
    return a.tmpl->types.size() < b.tmpl->types.size() ? -1 : 1;
  }
  if (int c = a.tmpl->source->name().compare(b.tmpl->source->name()); c != 0) return c < 0 ? -1 : 1;
  if (a.values != b.values) return a.values < b.values ? -1 : 1;
  return 0;
}

bool ranks_before(const Node& a, const Node& b) {
  const auto ta = diff_complexity(a.todo);
  const auto tb = diff_complexity(b.todo);
  if (ta != tb) return ta < tb;
  if (a.cost != b.cost) return a.cost < b.cost;
  const std::size_t n = std::min(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_steps(a.steps[i], b.steps[i]); c != 0) return c < 0;
  }
  return a.steps.size() < b.steps.size();
}

class Searcher {
 public:
  explicit Searcher(const Library& lib) {
    for (const auto& t : lib.templates()) compiled_.push_back(compile(t));
    std::sort(compiled_.begin(), compiled_.end(),
              [](const CompiledTemplate& a, const CompiledTemplate& b) {
                if (a.types.size() != b.types.size()) return a.types.size() < b.types.size();
                return a.source->name() < b.source->name();
              });
    for (const auto& ct : compiled_) min_step_cost_ = std::min(min_step_cost_, ct.cost);
  }

  std::optional<Program> search(const StateDiff& target, const SearchConfig& cfg) const {
    if (target.empty()) return Program{};
    if (compiled_.empty()) return std::nullopt;

    std::vector<Node> beam{Node{{}, StateDiff{}, target, 0}};
    std::optional<Node> best;
    std::map<StateDiff, Units> seen{{StateDiff{}, 0}};

    for (std::size_t depth = 1; depth <= cfg.max_depth && !beam.empty(); ++depth) {
      const bool last = depth == cfg.max_depth;
      std::vector<Node> children;
      for (const auto& node : beam) {
        const Candidates cand(node.todo);
        for (const auto& ct : compiled_) {
          const Units cost = node.cost + ct.cost;
          if (best && cost >= best->cost) continue;
          for (auto& values : BindingEnumerator(ct, node.todo, cand, 1).run()) {
            StateDiff net = merge_diffs(node.net, ground(ct, values));
            const bool terminal = net == target;
            if (!terminal && (last || (best && cost + min_step_cost_ >= best->cost))) continue;
            Node child{node.steps, std::move(net), StateDiff{}, cost};
            child.steps.push_back(Step{&ct, std::move(values)});
            child.todo = terminal ? StateDiff{} : todo_of(target, child.net);
            children.push_back(std::move(child));
          }
        }
      }
      std::sort(children.begin(), children.end(), ranks_before);

      std::vector<Node> next;
      std::set<StateDiff> taken;
      for (auto& child : children) {
        if (!taken.insert(child.net).second) continue;
        auto it = seen.find(child.net);
        if (it != seen.end() && it->second <= child.cost) continue;
        seen[child.net] = child.cost;
        if (child.todo.empty()) {
          // Sorted order puts the cheapest, best-ranked solution first.
          if (!best || child.cost < best->cost) best = child;
          continue;
        }
        if (next.size() < cfg.beam_width) next.push_back(std::move(child));
      }
      beam = std::move(next);
    }

    if (!best) return std::nullopt;
    Program p;
    for (const auto& step : best->steps) {
      p.steps.push_back(OperatorInstance{step.tmpl->source->name(), to_binding(*step.tmpl, step.values)});
    }
    return p;
  }

 private:
  std::vector<CompiledTemplate> compiled_;
  Units min_step_cost_ = std::numeric_limits<Units>::max();
};

}  // namespace

void SearchConfig::validate() const {
  if (beam_width < 1) throw std::invalid_argument("beam width must be >= 1");
  if (max_depth < 1) throw std::invalid_argument("max depth must be >= 1");
}

std::vector<Binding> enumerate_bindings(const OperatorTemplate& t, const StateDiff& remaining,
                                        std::size_t max_free_slots) {
  if (remaining.empty()) return {};
  const CompiledTemplate ct = compile(t);
  const Candidates cand(remaining);
  std::vector<Binding> out;
  for (const auto& v : BindingEnumerator(ct, remaining, cand, max_free_slots).run()) {
    out.push_back(to_binding(ct, v));
  }
  return out;
}

std::optional<Program> beam_search(const StateDiff& target, const Library& lib,
                                   const SearchConfig& cfg) {
  cfg.validate();
  return Searcher(lib).search(target, cfg);
}

WakeResults explain_all(std::span<const Event> events, const Library& lib,
                        const SearchConfig& cfg) {
  cfg.validate();
  const Searcher searcher(lib);
  WakeResults out(events.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                                                     events.size() / 16));
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < events.size(); i += stride) {
      out[i] = searcher.search(events[i].diff(), cfg);
    }
  };
  if (workers <= 1) {
    work(0, 1);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  return out;
}

}  // namespace eventprim
