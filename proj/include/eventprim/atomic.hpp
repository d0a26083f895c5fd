#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eventprim/core.hpp"

namespace eventprim {

enum class AtomicRelation { xEffect, oEffect, xReact, oReact, xWant, oWant, xIntent, xNeed, xAttr };

std::string_view to_string(AtomicRelation r);
std::optional<AtomicRelation> atomic_relation_from_string(std::string_view text);

/// True for the o-relations, whose subject is PersonY.
bool about_other(AtomicRelation r);

struct AtomicRow {
  std::string event;
  AtomicRelation relation;
  std::string target;
};

struct AtomicParse {
  std::vector<AtomicRow> rows;
  std::size_t skipped_none = 0;  ///< targets that were "none" or empty
  std::size_t malformed = 0;     ///< unknown relation, missing fields, bad cells
};

/// Reads ATOMIC in either layout:
///  - long: columns event, relation, target (one edge per line);
///  - wide: an event column plus one column per relation whose cells hold a
///    JSON list of targets (the original release format).
/// The delimiter (comma or tab) is taken from the header. Extra columns are
/// ignored. Throws DataError if the file cannot be read or the header fits
/// neither layout.
AtomicParse parse_atomic(std::istream& in);
AtomicParse parse_atomic_file(const std::string& path);

enum class ChangeType {
  location_change,
  possession_change,
  knowledge_change,
  emotion,
  state_change,
  generic,
};

std::string_view to_string(ChangeType t);

/// Lowercase, punctuation dropped, whitespace collapsed, "personx"/"persony"
/// replaced by X/Y.
std::string normalize_text(std::string_view text);

/// Which kind of state change an effect phrase describes. Checked in order:
/// movement, possession, knowledge, emotion, state verbs; anything else is
/// generic.
ChangeType classify_effect(std::string_view target);

/// Builds before/after states for one row:
///   x/oReact  (who, feels, neutral)     -> (who, feels, emotion)
///   x/oWant   (who, wants, nothing)     -> (who, wants, goal)
///   xIntent   (X, intends, nothing)     -> (X, intends, goal)
///   xNeed     (X, needs, nothing)       -> (X, needs, item)
///   xAttr     (X, is, unspecified)      -> (X, is, property)
///   x/oEffect by classify_effect; who is X for x-relations, Y otherwise.
/// meta holds relation, change_type, event and source.
Event atomic_to_event(const AtomicRow& row, std::string id);

/// Ids "atomic_00001", ... in row order.
std::vector<Event> atomic_to_events(const std::vector<AtomicRow>& rows);

}  // namespace eventprim
