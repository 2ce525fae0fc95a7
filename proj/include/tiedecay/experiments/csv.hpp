#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace tiedecay::experiments {

inline constexpr const char* kCsvFormat = "tiedecay-csv/1";

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);  // InputError if the width is wrong
};

// First line of every CSV: '#', one space, then this object as compact JSON
// with keys in the order below.
struct Manifest {
  std::string experiment;
  std::string table = "main";  // which output of the experiment this file is
  std::string toolkit_version;
  std::uint64_t seed = 0;
  std::string config_hash;  // 16 hex digits
  std::size_t realizations = 0;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::string> columns;

  nlohmann::ordered_json to_json() const;
  static Manifest from_json(const nlohmann::ordered_json& j);
};

// Shortest round-trip decimal for doubles ("nan", "inf", "-inf" for the
// specials); strings are quoted only when they contain ',', '"' or a newline.
std::string format_cell(const Cell& cell);

std::string render_csv(const Manifest& manifest, const Table& table);

// Writes to a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvFile {
  Manifest manifest;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // InputError if absent
  std::vector<double> numbers(const std::string& name) const;
};

CsvFile parse_csv(const std::string& text);  // InputError on malformed input
CsvFile read_csv(const std::filesystem::path& path);

}  // namespace tiedecay::experiments
