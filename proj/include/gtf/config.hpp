#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace gtf {

// Minimal TOML subset: [section] headers, `key = value` with string, integer,
// float and boolean values, `#` comments. Keys are reported as
// "section.key" ("key" alone before any section header).
class TomlDoc {
  public:
    static TomlDoc parse(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    int64_t get_int(const std::string& key, int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& raw() const { return values_; }

  private:
    // Stored as (kind, text); kind ∈ {s,i,f,b}.
    std::map<std::string, std::string> values_;
    std::map<std::string, char> kinds_;
};

}  // namespace gtf
