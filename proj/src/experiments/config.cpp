#include "tiedecay/experiments/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace tiedecay::experiments {

namespace {

const std::vector<std::string> kIds{
    "ahmad-trace",  "ahmad-moments",   "ahmad-gcc",  "b2u-trace",     "b2u-gcc-sweep", "b2u-components",
    "walk-trace",   "walk-stationary", "fd-evolve",  "fd-stationary", "sir-compare",
};

const std::vector<std::string> kTopLevel{"experiment", "seed", "realizations", "output", "workers", "model", "sweep"};

Json scalar_to_json(const YAML::Node& node) {
  const std::string& text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted
  if (text == "true" || text == "True") return true;
  if (text == "false" || text == "False") return false;
  if (text == "~" || text == "null") return nullptr;
  std::int64_t i = 0;
  const char* end = text.data() + text.size();
  if (auto [p, ec] = std::from_chars(text.data(), end, i); ec == std::errc() && p == end) return i;
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(text.data(), end, d); ec == std::errc() && p == end) return d;
  if (text == ".inf" || text == "inf") return std::numeric_limits<double>::infinity();
  return text;
}

Json to_json(const YAML::Node& node, const std::string& path) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar_to_json(node);
    case YAML::NodeType::Sequence: {
      Json out = Json::array();
      for (std::size_t i = 0; i < node.size(); ++i) out.push_back(to_json(node[i], fmt::format("{}[{}]", path, i)));
      return out;
    }
    case YAML::NodeType::Map: {
      Json out = Json::object();
      for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        const std::string sub = path.empty() ? key : path + "." + key;
        if (out.contains(key)) throw ConfigError(sub, "duplicate key");
        out[key] = to_json(kv.second, sub);
      }
      return out;
    }
  }
  return nullptr;
}

std::uint64_t as_count(const Json& v, const std::string& field, std::uint64_t minimum) {
  std::uint64_t out = 0;
  if (v.is_number_unsigned()) {
    out = v.get<std::uint64_t>();
  } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    out = static_cast<std::uint64_t>(v.get<std::int64_t>());
  } else if (v.is_number_float() && v.get<double>() >= 0.0 && v.get<double>() < 1.8e19 &&
             std::floor(v.get<double>()) == v.get<double>()) {
    out = static_cast<std::uint64_t>(v.get<double>());
  } else {
    throw ConfigError(field, "must be a non-negative integer");
  }
  if (out < minimum) throw ConfigError(field, fmt::format("must be at least {}", minimum));
  return out;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) { return fmt::format("{:016x}", value); }

std::string ExperimentConfig::canonical() const {
  Json c;  // std::map backed, so keys are sorted at every level
  c["experiment"] = experiment;
  c["realizations"] = realizations;
  c["model"] = model;
  c["sweep"] = sweep;
  return c.dump();
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(canonical()); }

const std::vector<std::string>& experiment_ids() { return kIds; }

bool known_experiment(const std::string& id) { return std::find(kIds.begin(), kIds.end(), id) != kIds.end(); }

ExperimentConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<file>", fmt::format("YAML syntax error at line {}: {}", e.mark.line + 1, e.msg));
  }
  if (!root.IsMap()) throw ConfigError("<file>", "top level must be a mapping");
  const Json doc = to_json(root, "");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kTopLevel.begin(), kTopLevel.end(), key) == kTopLevel.end()) {
      throw ConfigError(key, "unknown key");
    }
  }

  ExperimentConfig c;
  if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
    throw ConfigError("experiment", "is required and must be an experiment id");
  }
  c.experiment = doc["experiment"].get<std::string>();
  if (!known_experiment(c.experiment)) {
    throw ConfigError("experiment", fmt::format("unknown id '{}' (see list-experiments)", c.experiment));
  }
  if (!doc.contains("seed")) throw ConfigError("seed", "is required");
  c.seed = as_count(doc["seed"], "seed", 0);
  if (doc.contains("realizations")) c.realizations = as_count(doc["realizations"], "realizations", 1);
  if (doc.contains("workers")) c.workers = static_cast<unsigned>(as_count(doc["workers"], "workers", 1));
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("output", "must be a directory path");
    c.output = doc["output"].get<std::string>();
  }
  for (const char* block : {"model", "sweep"}) {
    if (!doc.contains(block) || doc[block].is_null()) continue;
    if (!doc[block].is_object()) throw ConfigError(block, "must be a mapping");
    (block[0] == 'm' ? c.model : c.sweep) = doc[block];
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", fmt::format("cannot read {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

Block::Block(const Json& node, std::string path) : node_(node), path_(std::move(path)) {}

bool Block::has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

const Json& Block::at(const std::string& key) const {
  if (!has(key)) throw ConfigError(field(key), "is required");
  return node_.at(key);
}

double Block::number(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_number()) throw ConfigError(field(key), "must be a number");
  return v.get<double>();
}

double Block::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::uint64_t Block::integer(const std::string& key) const { return as_count(at(key), field(key), 0); }

std::uint64_t Block::integer_or(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string Block::text_or(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_string()) throw ConfigError(field(key), "must be a string");
  return v.get<std::string>();
}

std::vector<double> Block::numbers(const std::string& key) const {
  const Json& v = at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) throw ConfigError(field(key), "must be a number or a non-empty list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(fmt::format("{}[{}]", field(key), i), "must be a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<double> Block::grid(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_object()) return numbers(key);
  const Block g(v, field(key));
  g.only({"start", "stop", "count", "scale"});
  const double start = g.number("start");
  const double stop = g.number("stop");
  const std::uint64_t count = g.integer("count");
  const std::string scale = g.text_or("scale", "linear");
  if (count < 1) throw ConfigError(g.field("count"), "must be at least 1");
  if (scale != "linear" && scale != "log") throw ConfigError(g.field("scale"), "must be 'linear' or 'log'");
  if (scale == "log" && !(start > 0.0 && stop > 0.0)) {
    throw ConfigError(g.field("start"), "log grids need positive start and stop");
  }
  std::vector<double> out(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = scale == "log" ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                            : start + f * (stop - start);
  }
  out.front() = start;
  out.back() = count == 1 ? start : stop;
  return out;
}

void Block::only(const std::vector<std::string>& allowed) const {
  if (!node_.is_object()) return;
  for (const auto& [key, value] : node_.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(field(key), "unknown key");
    }
  }
}

}  // namespace tiedecay::experiments
