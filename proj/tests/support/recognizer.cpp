#include "support/recognizer.hpp"

#include <cctype>
#include <cstdint>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace gtf::test {

namespace {

bool is_identifier(const std::string& t) {
    if (t.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(t[0])) && t[0] != '_') return false;
    for (char c : t)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

bool is_integer(const std::string& t) {
    size_t i = t.size() > 1 && t[0] == '-' ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
}

bool is_float(const std::string& t) {
    size_t dot = t.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= t.size()) return false;
    std::string a = t.substr(0, dot), b = t.substr(dot + 1);
    return is_integer(a) && is_integer(b) && b[0] != '-';
}

bool is_quoted_string(const std::string& t) {
    return t.size() >= 2 && t.front() == '\'' && t.back() == '\'';
}

bool terminal_matches(const Symbol& sym, const std::string& token) {
    switch (sym.kind) {
        case SymbolKind::TerminalToken:
        case SymbolKind::Literal: return token == sym.surface;
        case SymbolKind::Placeholder: {
            std::string marker = std::string("<") + placeholder_category_name(sym.category) + ">";
            if (token == marker) return true;
            switch (sym.category) {
                case PlaceholderCategory::IntConst: return is_integer(token);
                case PlaceholderCategory::FloatConst: return is_float(token);
                case PlaceholderCategory::StringConst: return is_quoted_string(token);
                default: return is_identifier(token);
            }
        }
        case SymbolKind::NonTerminal: return false;
    }
    return false;
}

struct Item {
    int alt_id;   // grammar-wide alternative id
    int dot;      // symbol position
    int origin;   // column where this item started

    bool operator==(const Item& o) const {
        return alt_id == o.alt_id && dot == o.dot && origin == o.origin;
    }
};

struct ItemHash {
    size_t operator()(const Item& it) const {
        uint64_t k = (uint64_t(uint32_t(it.alt_id)) << 40) ^ (uint64_t(uint32_t(it.dot)) << 24) ^
                     uint32_t(it.origin);
        k *= 0x9e3779b97f4a7c15ULL;
        return size_t(k ^ (k >> 32));
    }
};

struct Column {
    std::vector<Item> items;
    std::unordered_set<Item, ItemHash> seen;
    // rule -> indices of items whose next symbol is that rule
    std::unordered_map<int, std::vector<size_t>> awaiting;

    bool add(const Item& it) {
        if (!seen.insert(it).second) return false;
        items.push_back(it);
        return true;
    }
};

}  // namespace

std::vector<std::string> whitespace_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string t;
    while (in >> t) out.push_back(std::move(t));
    return out;
}

ChartRecognizer::ChartRecognizer(const Grammar& grammar) : grammar_(grammar) {
    // Nullable fixpoint over rules.
    nullable_.assign(grammar_.rule_count(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < grammar_.rule_count(); ++r) {
            if (nullable_[r]) continue;
            for (const auto& alt : grammar_.rule(r).alternatives) {
                bool all_null = true;
                for (const auto& sym : alt.symbols) {
                    if (sym.kind != SymbolKind::NonTerminal || !nullable_[sym.nonterminal]) {
                        all_null = false;
                        break;
                    }
                }
                if (all_null) {
                    nullable_[r] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
}

bool ChartRecognizer::recognizes(const std::string& text, int start) const {
    return recognizes_tokens(whitespace_tokens(text), start);
}

bool ChartRecognizer::recognizes_tokens(const std::vector<std::string>& tokens, int start) const {
    if (start < 0) start = grammar_.start_rule();
    const size_t n = tokens.size();
    std::vector<Column> chart(n + 1);

    auto alt_of = [&](int alt_id) -> const Alternative& {
        return grammar_.alternative_by_id(alt_id);
    };

    auto predict_rule = [&](Column& col, int rule) {
        for (const auto& alt : grammar_.rule(rule).alternatives)
            col.add(Item{grammar_.alternative_id(rule, alt.index), 0,
                         int(&col - chart.data())});
    };
    (void)predict_rule;

    for (const auto& alt : grammar_.rule(start).alternatives)
        chart[0].add(Item{grammar_.alternative_id(start, alt.index), 0, 0});

    for (size_t col_i = 0; col_i <= n; ++col_i) {
        Column& col = chart[col_i];
        for (size_t w = 0; w < col.items.size(); ++w) {
            Item it = col.items[w];
            const Alternative& alt = alt_of(it.alt_id);
            if (it.dot == int(alt.symbols.size())) {
                // Complete: advance everything in the origin column awaiting
                // this rule.
                int lhs = alt.nonterminal;
                Column& origin = chart[it.origin];
                auto waiting = origin.awaiting.find(lhs);
                if (waiting != origin.awaiting.end()) {
                    // Index vector may grow while iterating; index-based loop.
                    for (size_t k = 0; k < waiting->second.size(); ++k) {
                        Item parent = origin.items[waiting->second[k]];
                        col.add(Item{parent.alt_id, parent.dot + 1, parent.origin});
                    }
                }
                continue;
            }
            const Symbol& next = alt.symbols[it.dot];
            if (next.kind == SymbolKind::NonTerminal) {
                col.awaiting[next.nonterminal].push_back(w);
                for (const auto& sub : grammar_.rule(next.nonterminal).alternatives)
                    col.add(Item{grammar_.alternative_id(next.nonterminal, sub.index), 0,
                                 int(col_i)});
                // Nullable shortcut keeps epsilon completions in this column
                // from being missed.
                if (nullable_[next.nonterminal])
                    col.add(Item{it.alt_id, it.dot + 1, it.origin});
            } else if (col_i < n && terminal_matches(next, tokens[col_i])) {
                chart[col_i + 1].add(Item{it.alt_id, it.dot + 1, it.origin});
            }
        }
    }

    for (const Item& it : chart[n].items) {
        const Alternative& alt = alt_of(it.alt_id);
        if (alt.nonterminal == start && it.origin == 0 && it.dot == int(alt.symbols.size()))
            return true;
    }
    return false;
}

}  // namespace gtf::test
