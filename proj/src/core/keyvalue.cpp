#include "skelet/keyvalue.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "skelet/error.hpp"

namespace skelet {

const KeyValueEntry* KeyValueSection::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<KeyValueSection> parse_key_value_text(const std::string& text) {
  std::vector<KeyValueSection> sections(1);
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  auto bad = [&](const std::string& msg) {
    fail(ErrorCode::parse, "line " + std::to_string(line) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) bad("malformed section header '" + s + "'");
      sections.push_back({trim(s.substr(1, s.size() - 2)), line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) bad("expected 'key = value', got '" + s + "'");
    KeyValueEntry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty()) bad("empty key");
    if (sections.back().find(e.key)) bad("duplicate key '" + e.key + "'");
    sections.back().entries.push_back(std::move(e));
  }
  return sections;
}

std::map<std::string, std::string> to_map(const KeyValueSection& section) {
  std::map<std::string, std::string> m;
  for (const auto& e : section.entries) m[e.key] = e.value;
  return m;
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
    fail(ErrorCode::parse, what + ": expected a number, got '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
    fail(ErrorCode::parse, what + ": expected an integer, got '" + s + "'");
  return v;
}

}  // namespace skelet
