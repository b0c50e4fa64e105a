#pragma once

// Strict JSON access with path-qualified diagnostics. Private to the library.

#include <filesystem>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "zzkit/errors.hpp"

namespace zzkit::io::detail {

using nlohmann::json;

/// Parses text, reporting syntax errors with line and column.
json parse_json_text(const std::string& text, const std::string& source);
json read_json_file(const std::filesystem::path& path);

/// A JSON object together with its location for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  /// ConfigError unless the node is an object with keys drawn from `allowed`.
  void expect_keys(std::initializer_list<const char*> allowed) const;
  bool has(const std::string& key) const;
  Node child(const std::string& key) const;
  Node at(std::size_t i) const;
  std::size_t size() const;

  double number() const;
  int integer() const;
  bool boolean() const;
  std::string string() const;
  std::vector<double> numbers() const;

  double number(const std::string& key) const { return child(key).number(); }
  double number_or(const std::string& key, double fallback) const;
  int integer_or(const std::string& key, int fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  std::optional<double> optional_number(const std::string& key) const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  const json& j_;
  std::string path_;
};

}  // namespace zzkit::io::detail
