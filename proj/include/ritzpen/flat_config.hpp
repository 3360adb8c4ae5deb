#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ritzpen {

/// Flat key = value configuration table.  One assignment per line, '#'
/// comments, no sections.  The verbatim text is retained so runs can
/// embed their exact configuration in output sidecars.  Typed getters
/// record which keys were consumed; unknown_keys() exposes the rest so
/// callers can reject typos.
class FlatConfig {
public:
  static FlatConfig parse_file(const std::string& path);
  static FlatConfig parse_text(const std::string& text, const std::string& origin = "<text>");

  const std::string& text() const { return text_; }
  const std::string& origin() const { return origin_; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int_or(const std::string& key, int fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;

  /// Comma-separated lists.
  std::vector<int> get_int_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::uint64_t> get_u64_list(const std::string& key) const;

  /// Keys present in the file that no getter has asked for.
  std::vector<std::string> unknown_keys() const;

private:
  std::string raw(const std::string& key) const;

  std::string text_;
  std::string origin_;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace ritzpen
