#include "json_util.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace zzkit::io::detail {

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(fmt::format("{}:{}:{}: JSON syntax error", source, line, col));
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

void Node::fail(const std::string& message) const {
  throw ConfigError(fmt::format("{}: {}", path_.empty() ? "/" : path_, message));
}

void Node::expect_keys(std::initializer_list<const char*> allowed) const {
  if (!j_.is_object()) fail("expected an object");
  for (const auto& [key, value] : j_.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) {
      std::vector<std::string> names(allowed.begin(), allowed.end());
      fail(fmt::format("unknown key '{}' (allowed: {})", key, fmt::join(names, ", ")));
    }
  }
}

bool Node::has(const std::string& key) const { return j_.is_object() && j_.contains(key) && !j_.at(key).is_null(); }

Node Node::child(const std::string& key) const {
  if (!j_.is_object()) fail("expected an object");
  if (!j_.contains(key)) fail(fmt::format("missing required key '{}'", key));
  return Node(j_.at(key), path_ + "/" + key);
}

Node Node::at(std::size_t i) const {
  if (!j_.is_array()) fail("expected an array");
  if (i >= j_.size()) fail(fmt::format("index {} out of range", i));
  return Node(j_.at(i), fmt::format("{}/{}", path_, i));
}

std::size_t Node::size() const {
  if (!j_.is_array()) fail("expected an array");
  return j_.size();
}

double Node::number() const {
  if (!j_.is_number()) fail("expected a number");
  const double v = j_.get<double>();
  if (!std::isfinite(v)) fail("expected a finite number");
  return v;
}

int Node::integer() const {
  if (!j_.is_number_integer()) fail("expected an integer");
  return j_.get<int>();
}

bool Node::boolean() const {
  if (!j_.is_boolean()) fail("expected true or false");
  return j_.get<bool>();
}

std::string Node::string() const {
  if (!j_.is_string()) fail("expected a string");
  return j_.get<std::string>();
}

std::vector<double> Node::numbers() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
  return out;
}

double Node::number_or(const std::string& key, double fallback) const {
  return has(key) ? child(key).number() : fallback;
}

int Node::integer_or(const std::string& key, int fallback) const {
  return has(key) ? child(key).integer() : fallback;
}

bool Node::boolean_or(const std::string& key, bool fallback) const {
  return has(key) ? child(key).boolean() : fallback;
}

std::string Node::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? child(key).string() : fallback;
}

std::optional<double> Node::optional_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return child(key).number();
}

}  // namespace zzkit::io::detail
