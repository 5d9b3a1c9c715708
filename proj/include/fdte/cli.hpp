#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fdte::cli {

/// Batch front-end: configuration in, one CSV table out. Tables carry a
/// '#'-prefixed metadata header echoing the resolved configuration; numbers
/// are serialized with 17 significant digits so re-reading and re-emitting
/// is byte-identical.
struct RunOptions {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
};

// Exit codes: 0 success, 2 config parse error, 3 precondition violation,
// 4 numerical failure.
int run(const RunOptions& options, std::ostream& err);

// Core entry used by run() and by tests: executes `command` on a JSON
// configuration string and writes the table to `out`. Throws typed errors.
void run_config(const std::string& command, const std::string& config_text,
                std::ostream& out);

struct Table {
  std::vector<std::string> meta;  // '#'-prefixed lines, verbatim
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  double value(std::size_t row, std::size_t col) const;
};

Table read_table(std::istream& in);
void write_table(std::ostream& out, const Table& table);

std::string format_double(double v);

}  // namespace fdte::cli
