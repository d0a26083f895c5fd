#include "eventprim/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace eventprim {

using nlohmann::json;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

json parse_json(std::istream& in, const char* what) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid ") + what + " JSON: " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw DataError(std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

// -- events ----------------------------------------------------------------

json triples_to_json(const TripleSet& ts) {
  json arr = json::array();
  for (const auto& t : ts) arr.push_back({t.subject.str(), t.relation.str(), t.object.str()});
  return arr;
}

TripleSet triples_from_json(const json& j) {
  TripleSet out;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) throw DataError("triple must be a 3-element array");
    out.insert(make_triple(t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()));
  }
  return out;
}

// -- library ---------------------------------------------------------------

json term_to_json(const PatternTerm& t) {
  if (const auto* ref = std::get_if<SlotRef>(&t)) return {{"slot", ref->name}};
  return {{"lit", std::get<Symbol>(t).str()}};
}

PatternTerm term_from_json(const json& j) {
  if (j.contains("slot")) return slot_ref(j.at("slot").get<std::string>());
  if (j.contains("lit")) return lit(j.at("lit").get<std::string>());
  throw DataError("pattern term needs 'slot' or 'lit'");
}

json patterns_to_json(const std::vector<PatternTriple>& ps) {
  json arr = json::array();
  for (const auto& p : ps) {
    arr.push_back({term_to_json(p.subject), term_to_json(p.relation), term_to_json(p.object)});
  }
  return arr;
}

std::vector<PatternTriple> patterns_from_json(const json& j) {
  std::vector<PatternTriple> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 3) throw DataError("pattern must be a 3-element array");
    out.push_back(PatternTriple{term_from_json(p[0]), term_from_json(p[1]), term_from_json(p[2])});
  }
  return out;
}

json provenance_to_json(const Provenance& p) {
  if (const auto* s = std::get_if<Specialized>(&p)) {
    return {{"kind", "specialized"}, {"parent", s->parent}, {"slot", s->slot},
            {"literal", s->literal.str()}};
  }
  if (const auto* c = std::get_if<Compound>(&p)) {
    json u = json::array();
    for (const auto& [a, b] : c->unifications) u.push_back({a, b});
    return {{"kind", "compound"}, {"first", c->first}, {"second", c->second}, {"unifications", u}};
  }
  return {{"kind", "seed"}};
}

Provenance provenance_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "seed") return SeedOrigin{};
  if (kind == "specialized") {
    return Specialized{j.at("parent").get<std::string>(), j.at("slot").get<std::string>(),
                       Symbol(j.at("literal").get<std::string>())};
  }
  if (kind == "compound") {
    Compound c{j.at("first").get<std::string>(), j.at("second").get<std::string>(), {}};
    for (const auto& u : j.at("unifications")) {
      c.unifications.emplace_back(u.at(0).get<std::string>(), u.at(1).get<std::string>());
    }
    return c;
  }
  throw DataError("unknown provenance kind '" + kind + "'");
}

json template_to_json(const OperatorTemplate& t) {
  json slots = json::array();
  for (const auto& s : t.slots()) slots.push_back({{"name", s.name}, {"type", to_string(s.type)}});
  return {{"name", t.name()},
          {"slots", slots},
          {"removes", patterns_to_json(t.removes())},
          {"adds", patterns_to_json(t.adds())},
          {"provenance", provenance_to_json(t.provenance())}};
}

OperatorTemplate template_from_json(const json& j) {
  std::vector<Slot> slots;
  for (const auto& s : j.at("slots")) {
    slots.push_back(Slot{s.at("name").get<std::string>(),
                         slot_type_from_string(s.at("type").get<std::string>())});
  }
  return OperatorTemplate(j.at("name").get<std::string>(), std::move(slots),
                          patterns_from_json(j.at("removes")), patterns_from_json(j.at("adds")),
                          j.contains("provenance") ? provenance_from_json(j.at("provenance"))
                                                   : Provenance{SeedOrigin{}});
}

json program_to_json(const Program& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    json b = json::object();
    for (const auto& [slot, sym] : s.binding) b[slot] = sym.str();
    steps.push_back({{"template", s.template_name}, {"binding", b}});
  }
  return steps;
}

Program program_from_json(const json& j) {
  Program p;
  for (const auto& s : j) {
    OperatorInstance inst{s.at("template").get<std::string>(), {}};
    for (const auto& [slot, sym] : s.at("binding").items()) {
      inst.binding.emplace(slot, Symbol(sym.get<std::string>()));
    }
    p.steps.push_back(std::move(inst));
  }
  return p;
}

// Library construction and symbol validation report through DslError and
// DataError; json access errors are folded into DataError.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed ") + what + ": " + e.what());
  } catch (const DslError& e) {
    throw DataError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DataError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

char detect_delimiter(const std::string& header_line) {
  const auto tabs = std::count(header_line.begin(), header_line.end(), '\t');
  const auto commas = std::count(header_line.begin(), header_line.end(), ',');
  return tabs > commas ? '\t' : ',';
}

std::vector<std::string> split_record(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty() && !quoted) {
      in_quotes = quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
      quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (in_quotes) throw DataError("unterminated quote in: " + line);
  fields.push_back(std::move(cur));
  return fields;
}

CsvTable read_table(std::istream& in, char delim) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!have_header) {
      t.header = split_record(line, delim);
      have_header = true;
    } else {
      t.rows.push_back(split_record(line, delim));
    }
  }
  if (!have_header) throw DataError("empty table: no header line");
  return t;
}

CsvTable read_table_file(const std::string& path) {
  auto in = open_in(path);
  std::string first;
  std::getline(in, first);
  const char delim = detect_delimiter(first);
  in.clear();
  in.seekg(0);
  return read_table(in, delim);
}

std::string quote_field(const std::string& field, char delim) {
  if (field.find_first_of(std::string("\"\n\r") + delim) == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_table(std::ostream& out, const CsvTable& table, char delim) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << delim;
      out << quote_field(fields[i], delim);
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

// ---------------------------------------------------------------------------

std::vector<Event> read_events(std::istream& in) {
  const json j = parse_json(in, "event");
  return guarded("event file", [&] {
    if (!j.is_array()) throw DataError("event file must hold a JSON array");
    std::vector<Event> events;
    for (const auto& e : j) {
      Event ev;
      ev.id = e.at("id").get<std::string>();
      ev.text = e.value("text", "");
      ev.before = triples_from_json(e.at("before"));
      ev.after = triples_from_json(e.at("after"));
      if (e.contains("meta")) ev.meta = e.at("meta").get<std::map<std::string, std::string>>();
      events.push_back(std::move(ev));
    }
    check_unique_ids(events);
    return events;
  });
}

std::vector<Event> read_events_file(const std::string& path) {
  auto in = open_in(path);
  return read_events(in);
}

void write_events(std::ostream& out, const std::vector<Event>& events) {
  json arr = json::array();
  for (const auto& e : events) {
    arr.push_back({{"id", e.id},
                   {"text", e.text},
                   {"before", triples_to_json(e.before)},
                   {"after", triples_to_json(e.after)},
                   {"meta", e.meta}});
  }
  out << arr.dump(1) << '\n';
}

void write_events_file(const std::string& path, const std::vector<Event>& events) {
  auto out = open_out(path);
  write_events(out, events);
}

Library read_library(std::istream& in) {
  const json j = parse_json(in, "library");
  return guarded("library file", [&] {
    std::vector<OperatorTemplate> templates;
    for (const auto& t : j.at("templates")) templates.push_back(template_from_json(t));
    return Library(std::move(templates), j.value("seed", std::vector<std::string>{}));
  });
}

Library read_library_file(const std::string& path) {
  auto in = open_in(path);
  return read_library(in);
}

void write_library(std::ostream& out, const Library& lib) {
  json templates = json::array();
  for (const auto& t : lib.templates()) templates.push_back(template_to_json(t));
  out << json{{"templates", templates}, {"seed", lib.seed_names()}}.dump(1) << '\n';
}

void write_library_file(const std::string& path, const Library& lib) {
  auto out = open_out(path);
  write_library(out, lib);
}

ProgramMap read_programs(std::istream& in) {
  const json j = parse_json(in, "program");
  return guarded("program file", [&] {
    ProgramMap out;
    for (const auto& [id, p] : j.items()) {
      out.emplace(id, p.is_null() ? std::nullopt : std::optional<Program>(program_from_json(p)));
    }
    return out;
  });
}

void write_programs(std::ostream& out, const std::vector<Event>& events, const WakeResults& wake) {
  if (events.size() != wake.size()) throw InvariantError("programs not aligned with events");
  json j = json::object();
  for (std::size_t i = 0; i < events.size(); ++i) {
    j[events[i].id] = wake[i] ? program_to_json(*wake[i]) : json(nullptr);
  }
  out << j.dump(1) << '\n';
}

void write_trace(std::ostream& out, const std::vector<IterationRecord>& trace) {
  CsvTable t;
  t.header = {"iteration", "library_size", "total_mdl", "bayes_bits", "coverage", "phase", "changes"};
  for (const auto& r : trace) {
    std::string changes;
    for (const auto& c : r.changes) changes += (changes.empty() ? "" : ";") + c;
    t.rows.push_back({std::to_string(r.iteration), std::to_string(r.library_size),
                      std::to_string(r.total_mdl), format_double(r.bayes_bits),
                      format_double(r.coverage), r.prune_row ? "prune" : "wake", changes});
  }
  write_table(out, t);
}

std::vector<IterationRecord> read_trace(std::istream& in) {
  const CsvTable t = read_table(in, ',');
  const std::size_t c_iter = t.column("iteration");
  const std::size_t c_size = t.column("library_size");
  const std::size_t c_mdl = t.column("total_mdl");
  const std::size_t c_bits = t.column("bayes_bits");
  const std::size_t c_cov = t.column("coverage");
  const std::size_t c_phase = t.column("phase");
  const std::size_t c_changes = t.column("changes");
  std::vector<IterationRecord> out;
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw DataError("trace row has wrong width");
    IterationRecord r;
    r.iteration = parse_number<std::size_t>(row[c_iter], "iteration");
    r.library_size = parse_number<std::size_t>(row[c_size], "library size");
    r.total_mdl = parse_number<Units>(row[c_mdl], "total MDL");
    r.bayes_bits = parse_number<double>(row[c_bits], "bit count");
    r.coverage = parse_number<double>(row[c_cov], "coverage");
    if (row[c_phase] != "wake" && row[c_phase] != "prune") {
      throw DataError("bad phase '" + row[c_phase] + "'");
    }
    r.prune_row = row[c_phase] == "prune";
    std::stringstream ss(row[c_changes]);
    for (std::string name; std::getline(ss, name, ';');) {
      if (!name.empty()) r.changes.push_back(name);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace eventprim
