#pragma once

// JSON Lines gesture logs: one GestureLogRecord per line.

#include "dusk/log_record.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dusk {

/// Blank lines are skipped. Throws ParseError carrying the 1-based line.
std::vector<GestureLogRecord> read_session_log(std::istream& in);
std::vector<GestureLogRecord> read_session_log_file(const std::string& path);

void write_session_log(std::ostream& out, std::span<const GestureLogRecord> records);
void write_session_log_file(const std::string& path, std::span<const GestureLogRecord> records);

/// One record as a single JSON line (no trailing newline).
std::string format_log_line(const GestureLogRecord& record);

}  // namespace dusk
