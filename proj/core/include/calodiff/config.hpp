#pragma once
#include <map>
#include <string>

namespace calodiff {

// Flat "key = value" text with optional [section] headers. Keys are stored
// as "section.key"; keys before any section header have no prefix.
// '#' and ';' start comments. Later assignments win.
class Config {
public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_str(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  // Canonical rendering: sorted keys grouped by section.
  std::string to_text() const;

  const std::map<std::string, std::string>& items() const { return kv_; }

private:
  std::map<std::string, std::string> kv_;
};

}  // namespace calodiff
