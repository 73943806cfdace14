#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace skelet {

struct KeyValueEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// A block of entries; the leading block has an empty name, later blocks are
/// introduced by `[name]` header lines.
struct KeyValueSection {
  std::string name;
  std::size_t line = 0;
  std::vector<KeyValueEntry> entries;

  const KeyValueEntry* find(const std::string& key) const;
};

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// skipped. Malformed lines and duplicate keys within a section raise a
/// parse error naming the line number.
std::vector<KeyValueSection> parse_key_value_text(const std::string& text);

std::map<std::string, std::string> to_map(const KeyValueSection& section);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

double parse_double(const std::string& s, const std::string& what);
/// Shortest text that parses back to exactly x.
std::string format_double(double x);
long long parse_integer(const std::string& s, const std::string& what);

}  // namespace skelet
