#include "gtf/config.hpp"

#include <cctype>
#include <sstream>

#include "gtf/error.hpp"

namespace gtf {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

}  // namespace

TomlDoc TomlDoc::parse(const std::string& text) {
    TomlDoc doc;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(strip_comment(line));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section");
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        std::string full = section.empty() ? key : section + "." + key;

        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated string");
            std::string content = value.substr(1, value.size() - 2);
            std::string unescaped;
            for (size_t i = 0; i < content.size(); ++i) {
                if (content[i] == '\\' && i + 1 < content.size()) {
                    char c = content[++i];
                    unescaped.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
                } else {
                    unescaped.push_back(content[i]);
                }
            }
            doc.values_[full] = unescaped;
            doc.kinds_[full] = 's';
        } else if (value == "true" || value == "false") {
            doc.values_[full] = value;
            doc.kinds_[full] = 'b';
        } else {
            bool is_float = value.find('.') != std::string::npos ||
                            value.find('e') != std::string::npos ||
                            value.find('E') != std::string::npos;
            try {
                if (is_float) {
                    (void)std::stod(value);
                } else {
                    (void)std::stoll(value);
                }
            } catch (...) {
                throw ConfigError("config line " + std::to_string(lineno) + ": bad value '" +
                                  value + "'");
            }
            doc.values_[full] = value;
            doc.kinds_[full] = is_float ? 'f' : 'i';
        }
    }
    return doc;
}

std::string TomlDoc::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

int64_t TomlDoc::get_int(const std::string& key, int64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (kinds_.at(key) != 'i') throw ConfigError("config key " + key + " is not an integer");
    return std::stoll(it->second);
}

double TomlDoc::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    char k = kinds_.at(key);
    if (k != 'f' && k != 'i') throw ConfigError("config key " + key + " is not a number");
    return std::stod(it->second);
}

bool TomlDoc::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (kinds_.at(key) != 'b') throw ConfigError("config key " + key + " is not a boolean");
    return it->second == "true";
}

}  // namespace gtf
