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

// Flat key = value run configuration for the command-line tool.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cassi_cli {

/// Raised for malformed or contradictory configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered key -> raw value store. Keys look like `block.name`.
class RunConfig {
 public:
  /// Parses `text`; `origin` names the source in error messages.
  static RunConfig parse(const std::string& text, const std::string& origin);

  /// Applies a single `key=value` override.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  bool has_block(const std::string& block) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> get_optional_double(const std::string& key) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  /// Records a default so the manifest shows every value actually used.
  void resolve(const std::string& key, const std::string& value);

  /// Canonical `key = value` lines, sorted by key.
  std::string format() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// True when `key` is one of the recognised configuration keys.
bool is_known_key(const std::string& key);

/// Formats a double with shortest round-trip representation.
std::string format_number(double value);

}  // namespace cassi_cli
