#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace hsr::cli {

// Ordered `key value` report; values are pre-formatted so the text and JSON
// forms print identical digits.
class Report {
 public:
  void add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
  void add_fixed(std::string key, double value, int decimals) { add(std::move(key), fixed(value, decimals)); }
  void add_int(std::string key, long long value) { add(std::move(key), std::to_string(value)); }
  void add_text(std::string key, const std::string& value) { add(std::move(key), "\"" + value + "\""); }

  void print(std::ostream& out, bool json) const {
    if (!json) {
      for (const auto& [k, v] : entries_) out << k << ' ' << unquote(v) << '\n';
      return;
    }
    out << '{';
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      out << (i ? ", " : "") << '"' << entries_[i].first << "\": " << as_json(entries_[i].second);
    }
    out << "}\n";
  }

  static std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
  }

  static std::string scientific(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, value);
    return buf;
  }

 private:
  static std::string unquote(const std::string& v) {
    return v.size() >= 2 && v.front() == '"' ? v.substr(1, v.size() - 2) : v;
  }
  // Space-separated groups (e.g. rgb triples) become JSON arrays.
  static std::string as_json(const std::string& v) {
    if (v.front() == '"' || v.find(' ') == std::string::npos) return v;
    std::string out = "[";
    for (char c : v) out += c == ' ' ? std::string(", ") : std::string(1, c);
    return out + "]";
  }

  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace hsr::cli
