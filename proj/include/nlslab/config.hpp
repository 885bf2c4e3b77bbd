#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace nlslab {

// Flat "section.key = value" file; '#' starts a comment.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  // Canonical sorted "key=value" lines; the hash covers this text.
  std::string canonical() const;
  std::string hash() const;
  // Keys never read through a getter.
  std::vector<std::string> unused() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> read_;
};

}  // namespace nlslab
