#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eventprim {

/// Malformed input data: bad symbols, unreadable files, schema violations.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Always a bug, never bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A non-empty token naming an entity, relation or value. Compared by exact
/// string equality; no normalization happens here.
class Symbol {
 public:
  explicit Symbol(std::string text);

  const std::string& str() const noexcept { return text_; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;

 private:
  std::string text_;
};

struct Triple {
  Symbol subject;
  Symbol relation;
  Symbol object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

Triple make_triple(std::string_view subject, std::string_view relation,
                   std::string_view object);

std::string to_string(const Triple& t);

/// Sorted, duplicate-free set of triples. Iteration order is lexicographic
/// by (subject, relation, object).
class TripleSet {
 public:
  using const_iterator = std::vector<Triple>::const_iterator;

  TripleSet() = default;
  TripleSet(std::initializer_list<Triple> triples);
  explicit TripleSet(std::vector<Triple> triples);

  bool contains(const Triple& t) const;
  bool insert(Triple t);
  bool erase(const Triple& t);

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const_iterator begin() const noexcept { return items_.begin(); }
  const_iterator end() const noexcept { return items_.end(); }
  const std::vector<Triple>& items() const noexcept { return items_; }

  friend bool operator==(const TripleSet&, const TripleSet&) = default;
  friend auto operator<=>(const TripleSet&, const TripleSet&) = default;

 private:
  std::vector<Triple> items_;
};

TripleSet set_union(const TripleSet& a, const TripleSet& b);
TripleSet set_difference(const TripleSet& a, const TripleSet& b);
TripleSet set_intersection(const TripleSet& a, const TripleSet& b);
bool intersects(const TripleSet& a, const TripleSet& b);

using WorldState = TripleSet;

/// What an event changes. A triple present in both halves at construction
/// cancels out, so adds and removes are always disjoint.
class StateDiff {
 public:
  StateDiff() = default;
  StateDiff(TripleSet adds, TripleSet removes);

  const TripleSet& adds() const noexcept { return adds_; }
  const TripleSet& removes() const noexcept { return removes_; }
  bool empty() const noexcept { return adds_.empty() && removes_.empty(); }

  friend bool operator==(const StateDiff&, const StateDiff&) = default;
  friend auto operator<=>(const StateDiff&, const StateDiff&) = default;

 private:
  TripleSet adds_;
  TripleSet removes_;
};

struct Event {
  std::string id;
  std::string text;
  WorldState before;
  WorldState after;
  std::map<std::string, std::string> meta;

  StateDiff diff() const;
};

StateDiff compute_diff(const WorldState& before, const WorldState& after);

/// Number of changed triples, |adds| + |removes|.
std::size_t diff_complexity(const StateDiff& d);

/// Net effect of applying `first` then `second`; add-then-remove (and
/// remove-then-add) of the same triple cancels.
StateDiff merge_diffs(const StateDiff& first, const StateDiff& second);

/// Component-wise set difference: the part of `target` not covered by
/// `explained`.
StateDiff diff_remainder(const StateDiff& target, const StateDiff& explained);

/// The diff that undoes `d`.
StateDiff invert(const StateDiff& d);

WorldState apply_diff(const WorldState& state, const StateDiff& d);

/// Throws DataError on duplicate ids.
void check_unique_ids(const std::vector<Event>& events);

}  // namespace eventprim
