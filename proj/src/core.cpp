#include "eventprim/core.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <set>
#include <utility>

namespace eventprim {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

Symbol::Symbol(std::string text) : text_(std::move(text)) {
  if (text_.empty()) throw DataError("symbol must be non-empty");
  if (is_space(text_.front()) || is_space(text_.back())) {
    throw DataError("symbol has leading/trailing whitespace: '" + text_ + "'");
  }
}

Triple make_triple(std::string_view subject, std::string_view relation,
                   std::string_view object) {
  return Triple{Symbol(std::string(subject)), Symbol(std::string(relation)),
                Symbol(std::string(object))};
}

std::string to_string(const Triple& t) {
  return "(" + t.subject.str() + "," + t.relation.str() + "," + t.object.str() + ")";
}

TripleSet::TripleSet(std::initializer_list<Triple> triples)
    : TripleSet(std::vector<Triple>(triples)) {}

TripleSet::TripleSet(std::vector<Triple> triples) : items_(std::move(triples)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool TripleSet::contains(const Triple& t) const {
  return std::binary_search(items_.begin(), items_.end(), t);
}

bool TripleSet::insert(Triple t) {
  auto it = std::lower_bound(items_.begin(), items_.end(), t);
  if (it != items_.end() && *it == t) return false;
  items_.insert(it, std::move(t));
  return true;
}

bool TripleSet::erase(const Triple& t) {
  auto it = std::lower_bound(items_.begin(), items_.end(), t);
  if (it == items_.end() || !(*it == t)) return false;
  items_.erase(it);
  return true;
}

TripleSet set_union(const TripleSet& a, const TripleSet& b) {
  std::vector<Triple> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return TripleSet(std::move(out));
}

TripleSet set_difference(const TripleSet& a, const TripleSet& b) {
  std::vector<Triple> out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return TripleSet(std::move(out));
}

TripleSet set_intersection(const TripleSet& a, const TripleSet& b) {
  std::vector<Triple> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return TripleSet(std::move(out));
}

bool intersects(const TripleSet& a, const TripleSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

StateDiff::StateDiff(TripleSet adds, TripleSet removes) {
  if (intersects(adds, removes)) {
    adds_ = set_difference(adds, removes);
    removes_ = set_difference(removes, adds);
  } else {
    adds_ = std::move(adds);
    removes_ = std::move(removes);
  }
}

StateDiff Event::diff() const { return compute_diff(before, after); }

StateDiff compute_diff(const WorldState& before, const WorldState& after) {
  return StateDiff(set_difference(after, before), set_difference(before, after));
}

std::size_t diff_complexity(const StateDiff& d) { return d.adds().size() + d.removes().size(); }

StateDiff merge_diffs(const StateDiff& first, const StateDiff& second) {
  if (second.empty()) return first;
  if (first.empty()) return second;
  TripleSet adds = set_union(set_difference(first.adds(), second.removes()),
                             set_difference(second.adds(), first.removes()));
  TripleSet removes = set_union(set_difference(first.removes(), second.adds()),
                                set_difference(second.removes(), first.adds()));
  return StateDiff(std::move(adds), std::move(removes));
}

StateDiff diff_remainder(const StateDiff& target, const StateDiff& explained) {
  return StateDiff(set_difference(target.adds(), explained.adds()),
                   set_difference(target.removes(), explained.removes()));
}

StateDiff invert(const StateDiff& d) { return StateDiff(d.removes(), d.adds()); }

WorldState apply_diff(const WorldState& state, const StateDiff& d) {
  return set_union(set_difference(state, d.removes()), d.adds());
}

void check_unique_ids(const std::vector<Event>& events) {
  std::set<std::string_view> seen;
  for (const auto& e : events) {
    if (!seen.insert(e.id).second) throw DataError("duplicate event id: " + e.id);
  }
}

}  // namespace eventprim
