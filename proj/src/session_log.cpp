#include "dusk/session_log.hpp"

#include <fstream>

namespace dusk {

std::vector<GestureLogRecord> read_session_log(std::istream& in) {
  std::vector<GestureLogRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    try {
      out.push_back(record_from_json(j));
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

std::vector<GestureLogRecord> read_session_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open log " + path);
  return read_session_log(in);
}

std::string format_log_line(const GestureLogRecord& record) { return to_json(record).dump(); }

void write_session_log(std::ostream& out, std::span<const GestureLogRecord> records) {
  for (const auto& r : records) out << format_log_line(r) << '\n';
}

void write_session_log_file(const std::string& path, std::span<const GestureLogRecord> records) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write log " + path);
  write_session_log(out, records);
  if (!out) throw Error("failed writing log " + path);
}

}  // namespace dusk
