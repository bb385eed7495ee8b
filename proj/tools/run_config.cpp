// Copyright 2026 The cassiclass Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "run_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <sstream>

namespace cassi_cli {
namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "paths.cube", "paths.masks", "paths.acquisition", "paths.labels", "paths.roi", "paths.out",
      "input.divisor", "input.dataset_convention",
      "scene.rows", "scene.cols", "scene.bands", "scene.classes", "scene.geometry", "scene.voronoi_seeds",
      "scene.delta", "scene.outlier_rate", "scene.min_class_angle", "scene.seed",
      "sim.acquisitions", "sim.noise_sigma", "sim.snr_db", "sim.open_fraction", "sim.seed",
      "classifier.P", "classifier.T", "classifier.alpha", "classifier.mu", "classifier.refresh_G",
      "classifier.merge_theta", "classifier.gate_alpha",
      "audit.threshold", "audit.sam_bins", "audit.sam_max", "audit.rmse_bins", "audit.rmse_max",
      "audit.vmax"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  double value = 0.0;
  const char* end = raw.data() + raw.size();
  auto [ptr, ec] = std::from_chars(raw.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected a number, got '" + raw + "'");
  return value;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
  std::uint64_t value = 0;
  const char* end = raw.data() + raw.size();
  auto [ptr, ec] = std::from_chars(raw.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + raw + "'");
  }
  return value;
}

}  // namespace

bool is_known_key(const std::string& key) { return known_keys().count(key) != 0; }

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_known_key(key)) throw ConfigError(origin + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    if (config.has(key)) throw ConfigError(origin + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
    config.values_[key] = value;
  }
  return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!is_known_key(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = value;
}

bool RunConfig::has_block(const std::string& block) const {
  const std::string prefix = block + ".";
  return std::any_of(values_.begin(), values_.end(),
                     [&](const auto& kv) { return kv.first.compare(0, prefix.size(), prefix) == 0; });
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

std::optional<double> RunConfig::get_optional_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return parse_double(key, it->second);
}

std::size_t RunConfig::get_size(const std::string& key, std::size_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : static_cast<std::size_t>(parse_u64(key, it->second));
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_u64(key, it->second);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + it->second + "'");
}

std::vector<double> RunConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  std::istringstream in(it->second);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

void RunConfig::resolve(const std::string& key, const std::string& value) { values_.emplace(key, value); }

std::string RunConfig::format() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
  return out;
}

}  // namespace cassi_cli
