#include "tiedecay/experiments/csv.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "tiedecay/errors.hpp"

namespace tiedecay::experiments {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw InputError("csv: unterminated quoted field");
  out.push_back(std::move(cur));
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += format_cell(cells[i]);
  }
  return out;
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InputError(fmt::format("table: row has {} cells, expected {}", row.size(), columns.size()));
  }
  rows.push_back(std::move(row));
}

nlohmann::ordered_json Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = kCsvFormat;
  j["experiment"] = experiment;
  j["table"] = table;
  j["toolkit_version"] = toolkit_version;
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  j["realizations"] = realizations;
  j["parameters"] = parameters;
  j["columns"] = columns;
  return j;
}

Manifest Manifest::from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("format").get<std::string>() != kCsvFormat) {
      throw InputError("csv: unsupported format " + j.at("format").dump());
    }
    Manifest m;
    m.experiment = j.at("experiment").get<std::string>();
    m.table = j.at("table").get<std::string>();
    m.toolkit_version = j.at("toolkit_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.realizations = j.at("realizations").get<std::size_t>();
    m.parameters = j.at("parameters");
    m.columns = j.at("columns").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("csv: malformed manifest: ") + e.what());
  }
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    return fmt::format("{}", *d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return fmt::format("{}", *i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string render_csv(const Manifest& manifest, const Table& table) {
  if (manifest.columns != table.columns) throw InputError("csv: manifest columns differ from the table");
  std::string out = "# " + manifest.to_json().dump() + "\n";
  out += join(table.columns) + "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::size_t CsvFile::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InputError("csv: no column named " + name);
}

std::vector<double> CsvFile::numbers(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(std::strtod(row[c].c_str(), nullptr));
  return out;
}

CsvFile parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw InputError("csv: missing '# ' manifest line");
  CsvFile f;
  try {
    f.manifest = Manifest::from_json(nlohmann::ordered_json::parse(line.substr(2)));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("csv: manifest is not JSON: ") + e.what());
  }
  if (!std::getline(in, line)) throw InputError("csv: missing column header");
  f.columns = split_line(line);
  if (f.columns != f.manifest.columns) throw InputError("csv: header differs from manifest columns");
  while (std::getline(in, line)) {
    auto row = split_line(line);
    if (row.size() != f.columns.size()) throw InputError("csv: ragged row");
    f.rows.push_back(std::move(row));
  }
  return f;
}

CsvFile read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("csv: cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv(text.str());
}

}  // namespace tiedecay::experiments
