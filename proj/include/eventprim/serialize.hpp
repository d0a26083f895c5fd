#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eventprim/core.hpp"
#include "eventprim/discovery.hpp"
#include "eventprim/dsl.hpp"
#include "eventprim/mdl.hpp"

namespace eventprim {

// ---------------------------------------------------------------------------
// Delimited text

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws DataError if absent.
  std::size_t column(const std::string& name) const;
};

/// ',' unless the line has more tabs than commas.
char detect_delimiter(const std::string& header_line);

/// Splits one record. Double-quoted fields may contain the delimiter and
/// escaped quotes (""); a quoted field may not span lines. Throws DataError
/// on an unterminated quote.
std::vector<std::string> split_record(const std::string& line, char delim);

/// Reads a table whose first line is the header. Blank lines are skipped.
/// Rows are returned as read; width is not checked.
CsvTable read_table(std::istream& in, char delim);
CsvTable read_table_file(const std::string& path);

std::string quote_field(const std::string& field, char delim = ',');
void write_table(std::ostream& out, const CsvTable& table, char delim = ',');

// ---------------------------------------------------------------------------
// Events

/// [{"id", "text", "before": [[s, r, o], ...], "after": [...], "meta": {}}]
std::vector<Event> read_events(std::istream& in);
std::vector<Event> read_events_file(const std::string& path);
void write_events(std::ostream& out, const std::vector<Event>& events);
void write_events_file(const std::string& path, const std::vector<Event>& events);

// ---------------------------------------------------------------------------
// Libraries and programs

/// {"templates": [...], "seed": [names]}. Pattern terms are {"slot": name}
/// or {"lit": symbol}.
Library read_library(std::istream& in);
Library read_library_file(const std::string& path);
void write_library(std::ostream& out, const Library& lib);
void write_library_file(const std::string& path, const Library& lib);

/// Event id -> program, or null for unexplained events.
using ProgramMap = std::map<std::string, std::optional<Program>>;

ProgramMap read_programs(std::istream& in);
void write_programs(std::ostream& out, const std::vector<Event>& events, const WakeResults& wake);

// ---------------------------------------------------------------------------
// Learning curve

/// Columns: iteration, library_size, total_mdl, bayes_bits, coverage, phase,
/// changes. phase is "wake" or "prune"; changes is ';'-separated.
void write_trace(std::ostream& out, const std::vector<IterationRecord>& trace);
std::vector<IterationRecord> read_trace(std::istream& in);

}  // namespace eventprim
