#include "eventprim/atomic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "eventprim/serialize.hpp"
#include "json.hpp"

namespace eventprim {

namespace {

constexpr std::array<std::pair<AtomicRelation, std::string_view>, 9> kRelations{{
    {AtomicRelation::xEffect, "xEffect"},
    {AtomicRelation::oEffect, "oEffect"},
    {AtomicRelation::xReact, "xReact"},
    {AtomicRelation::oReact, "oReact"},
    {AtomicRelation::xWant, "xWant"},
    {AtomicRelation::oWant, "oWant"},
    {AtomicRelation::xIntent, "xIntent"},
    {AtomicRelation::xNeed, "xNeed"},
    {AtomicRelation::xAttr, "xAttr"},
}};

using Words = std::vector<std::string>;

const std::set<std::string> kMovementVerbs = {
    "go",    "goes",    "went",  "walk",  "walks",   "run",    "runs",  "drive",
    "drives", "travel", "travels", "move", "moves",  "leave",  "leaves", "arrive",
    "arrives", "return", "returns", "come", "comes", "fly",    "flies", "head",
    "heads", "enter",   "enters", "visit", "visits", "rush",   "rushes"};
// Acquiring verbs that take an object directly.
const std::set<std::string> kAcquireVerbs = {
    "receive", "receives", "buy",   "buys",    "obtain", "obtains", "win",      "wins",
    "earn",    "earns",    "acquire", "acquires", "inherit", "inherits", "borrow", "borrows"};
// Acquiring verbs that need a determiner to read as possession ("gets a car"
// but not "gets tired").
const std::set<std::string> kAcquireIfObject = {"get", "gets", "take", "takes", "find",
                                                "finds", "grab", "grabs", "pick", "picks"};
const std::set<std::string> kLoseVerbs = {"lose",  "loses", "give",  "gives", "sell",
                                          "sells", "drop",  "drops", "spend", "spends",
                                          "pay",   "pays",  "donate", "donates", "lend", "lends"};
const std::set<std::string> kDeterminers = {"a",   "an",    "the",  "some", "his",  "her",
                                            "their", "its", "new",  "x's",  "y's",  "xs",
                                            "ys",  "my",    "your", "another", "more"};
const std::set<std::string> kKnowledgeVerbs = {
    "learn", "learns", "discover", "discovers", "realize", "realizes", "know",  "knows",
    "understand", "understands", "remember", "remembers", "hear", "hears", "read", "reads",
    "notice", "notices", "study", "studies", "figure", "figures", "find_out", "finds_out"};
const std::set<std::string> kEmotions = {
    "happy",    "happier",   "sad",       "angry",      "upset",       "scared",
    "afraid",   "excited",   "nervous",   "proud",      "embarrassed", "ashamed",
    "relieved", "grateful",  "thankful",  "jealous",    "lonely",      "anxious",
    "worried",  "frustrated", "annoyed",  "glad",       "joyful",      "satisfied",
    "disappointed", "guilty", "calm",     "content",    "pleased",     "hurt",
    "loved",    "surprised", "bored",     "cheerful",   "mad",         "fearful",
    "depressed", "delighted", "thrilled", "furious",    "terrified",   "confident",
    "insecure", "hopeful",   "stressed",  "shocked",    "amused",      "irritated"};
const std::set<std::string> kStateVerbs = {"get",  "gets",  "become", "becomes", "turn",
                                           "turns", "grow", "grows",  "fall",    "falls",
                                           "feel", "feels", "is",     "are",     "be",
                                           "stay", "stays", "seem",   "seems"};
const std::set<std::string> kLeadingFillers = {"to",   "the",  "a",   "an",  "into",
                                               "at",   "toward", "towards", "about", "that",
                                               "for",  "some", "his", "her", "their"};

Words split_words(const std::string& text) {
  Words w;
  std::istringstream in(text);
  for (std::string s; in >> s;) w.push_back(s);
  return w;
}

std::string join(Words::const_iterator begin, Words::const_iterator end) {
  std::string out;
  for (auto it = begin; it != end; ++it) out += (out.empty() ? "" : "_") + *it;
  return out;
}

// Words after the verb with leading prepositions and articles removed.
std::string object_phrase(const Words& w, std::size_t from, const std::string& fallback) {
  while (from < w.size() && kLeadingFillers.contains(w[from])) ++from;
  const std::string s = join(w.begin() + static_cast<std::ptrdiff_t>(from), w.end());
  return s.empty() ? fallback : s;
}

// Drops a leading subject ("X gets ..." -> "gets ...").
Words effect_words(std::string_view target) {
  Words w = split_words(normalize_text(target));
  if (!w.empty() && (w.front() == "X" || w.front() == "Y")) w.erase(w.begin());
  // Treat "finds out" as one verb.
  if (w.size() >= 2 && (w[0] == "finds" || w[0] == "find") && w[1] == "out") {
    w[0] += "_out";
    w.erase(w.begin() + 1);
  }
  return w;
}

std::string phrase_symbol(std::string_view text, const std::string& fallback) {
  const Words w = split_words(normalize_text(text));
  const std::string s = join(w.begin(), w.end());
  return s.empty() ? fallback : s;
}

// Goals, intents and needs are usually phrased "to ...".
std::string goal_symbol(std::string_view text, const std::string& fallback) {
  Words w = split_words(normalize_text(text));
  if (!w.empty() && w.front() == "to") w.erase(w.begin());
  const std::string s = join(w.begin(), w.end());
  return s.empty() ? fallback : s;
}

}  // namespace

std::string_view to_string(AtomicRelation r) {
  for (const auto& [rel, name] : kRelations) {
    if (rel == r) return name;
  }
  return "?";
}

std::optional<AtomicRelation> atomic_relation_from_string(std::string_view text) {
  for (const auto& [rel, name] : kRelations) {
    if (name == text) return rel;
  }
  return std::nullopt;
}

bool about_other(AtomicRelation r) {
  return r == AtomicRelation::oEffect || r == AtomicRelation::oReact || r == AtomicRelation::oWant;
}

std::string_view to_string(ChangeType t) {
  switch (t) {
    case ChangeType::location_change: return "location_change";
    case ChangeType::possession_change: return "possession_change";
    case ChangeType::knowledge_change: return "knowledge_change";
    case ChangeType::emotion: return "emotion";
    case ChangeType::state_change: return "state_change";
    case ChangeType::generic: return "generic";
  }
  return "generic";
}

std::string normalize_text(std::string_view text) {
  std::string cleaned;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cleaned.push_back(static_cast<char>(std::tolower(u)));
    } else if (c == '\'') {
      continue;
    } else {
      cleaned.push_back(' ');
    }
  }
  std::string out;
  for (auto& w : split_words(cleaned)) {
    if (w == "personx" || w == "personxs") w = "X";
    if (w == "persony" || w == "personys") w = "Y";
    out += (out.empty() ? "" : " ") + w;
  }
  return out;
}

ChangeType classify_effect(std::string_view target) {
  const Words w = effect_words(target);
  if (w.empty()) return ChangeType::generic;
  const std::string& verb = w.front();
  if (kMovementVerbs.contains(verb)) return ChangeType::location_change;
  if (kAcquireVerbs.contains(verb) || kLoseVerbs.contains(verb)) return ChangeType::possession_change;
  if (kAcquireIfObject.contains(verb) && w.size() > 1 && kDeterminers.contains(w[1])) {
    return ChangeType::possession_change;
  }
  if (kKnowledgeVerbs.contains(verb)) return ChangeType::knowledge_change;
  if (std::any_of(w.begin(), w.end(), [](const std::string& s) { return kEmotions.contains(s); })) {
    return ChangeType::emotion;
  }
  if (kStateVerbs.contains(verb) && w.size() > 1) return ChangeType::state_change;
  return ChangeType::generic;
}

Event atomic_to_event(const AtomicRow& row, std::string id) {
  const std::string who = about_other(row.relation) ? "Y" : "X";
  Event e;
  e.id = std::move(id);
  e.text = row.event;
  e.meta = {{"relation", std::string(to_string(row.relation))},
            {"event", row.event},
            {"target", row.target},
            {"source", "atomic"}};

  auto change = [&](const std::string& subject, const std::string& relation,
                    const std::string& from, const std::string& to) {
    e.before.insert(make_triple(subject, relation, from));
    e.after.insert(make_triple(subject, relation, to));
  };

  ChangeType type = ChangeType::generic;
  switch (row.relation) {
    case AtomicRelation::xReact:
    case AtomicRelation::oReact:
      type = ChangeType::emotion;
      change(who, "feels", "neutral", phrase_symbol(row.target, "neutral"));
      break;
    case AtomicRelation::xWant:
    case AtomicRelation::oWant:
      type = ChangeType::state_change;
      change(who, "wants", "nothing", goal_symbol(row.target, "nothing"));
      break;
    case AtomicRelation::xIntent:
      type = ChangeType::state_change;
      change(who, "intends", "nothing", goal_symbol(row.target, "nothing"));
      break;
    case AtomicRelation::xNeed:
      type = ChangeType::state_change;
      change(who, "needs", "nothing", goal_symbol(row.target, "nothing"));
      break;
    case AtomicRelation::xAttr:
      type = ChangeType::state_change;
      change(who, "is", "unspecified", phrase_symbol(row.target, "unspecified"));
      break;
    case AtomicRelation::xEffect:
    case AtomicRelation::oEffect: {
      type = classify_effect(row.target);
      const Words w = effect_words(row.target);
      switch (type) {
        case ChangeType::location_change:
          change(who, "location", "here", object_phrase(w, 1, "away"));
          break;
        case ChangeType::possession_change: {
          const std::string item = object_phrase(w, 1, "something");
          if (kLoseVerbs.contains(w.front())) {
            e.before.insert(make_triple(who, "has", item));
            e.after.insert(make_triple("someone", "has", item));
          } else {
            e.before.insert(make_triple("someone", "has", item));
            e.after.insert(make_triple(who, "has", item));
          }
          break;
        }
        case ChangeType::knowledge_change:
          e.after.insert(make_triple(who, "knows", object_phrase(w, 1, "something")));
          break;
        case ChangeType::emotion: {
          auto it = std::find_if(w.begin(), w.end(),
                                 [](const std::string& s) { return kEmotions.contains(s); });
          change(who, "feels", "neutral", *it);
          break;
        }
        case ChangeType::state_change:
          change(who, "status", "normal", object_phrase(w, 1, "changed"));
          break;
        case ChangeType::generic:
          change(who, "state", "normal", phrase_symbol(row.target, "changed"));
          break;
      }
      break;
    }
  }
  e.meta["change_type"] = std::string(to_string(type));
  return e;
}

std::vector<Event> atomic_to_events(const std::vector<AtomicRow>& rows) {
  std::vector<Event> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "atomic_%05zu", i + 1);
    out.push_back(atomic_to_event(rows[i], id));
  }
  return out;
}

AtomicParse parse_atomic(std::istream& in) {
  std::string first;
  while (std::getline(in, first)) {
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (first.find_first_not_of(" \t") != std::string::npos) break;
  }
  if (first.empty()) throw DataError("ATOMIC file is empty");
  const char delim = detect_delimiter(first);
  const std::vector<std::string> header = split_record(first, delim);

  AtomicParse out;
  auto add = [&](const std::string& event, AtomicRelation rel, const std::string& target) {
    const std::string t = normalize_text(target);
    if (t.empty() || t == "none") {
      ++out.skipped_none;
      return;
    }
    if (normalize_text(event).empty()) {
      ++out.malformed;
      return;
    }
    out.rows.push_back(AtomicRow{event, rel, target});
  };
  auto next_row = [&](std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      try {
        fields = split_record(line, delim);
      } catch (const DataError&) {
        ++out.malformed;
        continue;
      }
      return true;
    }
    return false;
  };

  auto find_col = [&](std::initializer_list<std::string_view> names) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      for (auto n : names) {
        if (header[i] == n) return i;
      }
    }
    return std::nullopt;
  };

  const auto c_event = find_col({"event", "head"});
  const auto c_relation = find_col({"relation"});
  const auto c_target = find_col({"target", "tail"});
  std::vector<std::pair<std::size_t, AtomicRelation>> wide;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (auto r = atomic_relation_from_string(header[i])) wide.emplace_back(i, *r);
  }

  std::vector<std::string> fields;
  if (c_event && c_relation && c_target) {
    const std::size_t need = std::max({*c_event, *c_relation, *c_target}) + 1;
    while (next_row(fields)) {
      if (fields.size() < need) {
        ++out.malformed;
        continue;
      }
      auto rel = atomic_relation_from_string(fields[*c_relation]);
      if (!rel) {
        ++out.malformed;
        continue;
      }
      add(fields[*c_event], *rel, fields[*c_target]);
    }
  } else if (c_event && !wide.empty()) {
    while (next_row(fields)) {
      if (fields.size() < header.size()) {
        ++out.malformed;
        continue;
      }
      for (const auto& [col, rel] : wide) {
        nlohmann::json cell;
        try {
          cell = nlohmann::json::parse(fields[col]);
        } catch (const nlohmann::json::exception&) {
          ++out.malformed;
          continue;
        }
        if (!cell.is_array()) {
          ++out.malformed;
          continue;
        }
        for (const auto& t : cell) {
          if (t.is_string()) {
            add(fields[*c_event], rel, t.get<std::string>());
          } else {
            ++out.malformed;
          }
        }
      }
    }
  } else if (header.size() >= 3 && atomic_relation_from_string(header[1])) {
    // Headerless head<TAB>relation<TAB>tail.
    fields = header;
    do {
      if (fields.size() < 3) {
        ++out.malformed;
        continue;
      }
      auto rel = atomic_relation_from_string(fields[1]);
      if (!rel) {
        ++out.malformed;
        continue;
      }
      add(fields[0], *rel, fields[2]);
    } while (next_row(fields));
  } else {
    throw DataError("unrecognised ATOMIC header: " + first);
  }
  return out;
}

AtomicParse parse_atomic_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse_atomic(in);
}

}  // namespace eventprim
