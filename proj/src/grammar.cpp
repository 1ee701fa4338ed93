#include "gtf/grammar.hpp"

#include <algorithm>

#include "gtf/error.hpp"

namespace gtf {

namespace {

const std::pair<const char*, PlaceholderCategory> kCategoryNames[] = {
    {"NewTable", PlaceholderCategory::NewTable},
    {"ExistingTable", PlaceholderCategory::ExistingTable},
    {"NewColumn", PlaceholderCategory::NewColumn},
    {"ExistingColumn", PlaceholderCategory::ExistingColumn},
    {"NewIndex", PlaceholderCategory::NewIndex},
    {"ExistingIndex", PlaceholderCategory::ExistingIndex},
    {"IntConst", PlaceholderCategory::IntConst},
    {"FloatConst", PlaceholderCategory::FloatConst},
    {"StringConst", PlaceholderCategory::StringConst},
    {"Identifier", PlaceholderCategory::Identifier},
};

}  // namespace

const char* placeholder_category_name(PlaceholderCategory c) {
    for (const auto& [name, cat] : kCategoryNames)
        if (cat == c) return name;
    return "?";
}

std::optional<PlaceholderCategory> placeholder_category_from_name(const std::string& name) {
    for (const auto& [n, cat] : kCategoryNames)
        if (name == n) return cat;
    return std::nullopt;
}

std::string quote_literal(const std::string& text) {
    std::string out = "'";
    for (char c : text) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

const Alternative& Grammar::alternative_by_id(int id) const {
    // alt_base_ is monotone; binary search for the owning rule.
    auto it = std::upper_bound(alt_base_.begin(), alt_base_.end(), id);
    int rule = static_cast<int>(it - alt_base_.begin()) - 1;
    return rules_[rule].alternatives[id - alt_base_[rule]];
}

std::string Grammar::canonical_text() const {
    std::string out;
    for (const auto& rule : rules_) {
        out += rule.name;
        out += " :";
        bool first = true;
        for (const auto& alt : rule.alternatives) {
            if (!first) out += "\n  |";
            first = false;
            for (const auto& sym : alt.symbols) {
                out += ' ';
                out += sym.kind == SymbolKind::Literal ? quote_literal(sym.name) : sym.name;
            }
        }
        out += "\n  ;\n";
    }
    return out;
}

uint64_t Grammar::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : canonical_text()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

int GrammarBuilder::add_rule(const std::string& name) {
    auto it = g_.rule_index_.find(name);
    if (it != g_.rule_index_.end()) return it->second;
    int idx = static_cast<int>(g_.rules_.size());
    g_.rules_.push_back(Rule{name, {}});
    g_.rule_index_[name] = idx;
    if (g_.start_symbol_.empty()) g_.start_symbol_ = name;
    return idx;
}

int GrammarBuilder::add_alternative(int rule, std::vector<Symbol> symbols) {
    auto& alts = g_.rules_[rule].alternatives;
    int ord = static_cast<int>(alts.size());
    Alternative alt;
    alt.nonterminal = rule;
    alt.index = ord;
    alt.symbols = std::move(symbols);
    alts.push_back(std::move(alt));
    return ord;
}

Grammar GrammarBuilder::finish() {
    // Resolve every symbol: rule name wins, then token map, then placeholder
    // declarations. Classification is by declaration only, never by case.
    for (auto& rule : g_.rules_) {
        for (auto& alt : rule.alternatives) {
            for (auto& sym : alt.symbols) {
                if (sym.kind == SymbolKind::Literal) {
                    sym.surface = sym.name;
                    continue;
                }
                int nt = g_.find_rule(sym.name);
                if (nt >= 0) {
                    sym.kind = SymbolKind::NonTerminal;
                    sym.nonterminal = nt;
                    continue;
                }
                auto tok = g_.token_map_.find(sym.name);
                if (tok != g_.token_map_.end()) {
                    sym.kind = SymbolKind::TerminalToken;
                    sym.surface = tok->second;
                    continue;
                }
                auto ph = g_.placeholder_categories_.find(sym.name);
                if (ph != g_.placeholder_categories_.end()) {
                    sym.kind = SymbolKind::Placeholder;
                    sym.category = ph->second;
                    continue;
                }
                throw UnresolvedSymbolError("symbol '" + sym.name + "' in rule '" + rule.name +
                                            "' is not a rule, mapped token, or placeholder");
            }
        }
    }

    if (g_.rules_.empty()) throw ParseError(0, "grammar defines no rules");
    if (!g_.has_rule(g_.start_symbol_))
        throw UnresolvedSymbolError("start symbol '" + g_.start_symbol_ + "' is not a rule");

    // Reject grammars where no rule reachable from the start has a
    // terminal-only or epsilon alternative: generation could never finish.
    {
        std::vector<bool> reachable(g_.rules_.size(), false);
        std::vector<int> stack{g_.start_rule()};
        reachable[g_.start_rule()] = true;
        while (!stack.empty()) {
            int r = stack.back();
            stack.pop_back();
            for (const auto& alt : g_.rules_[r].alternatives)
                for (const auto& sym : alt.symbols)
                    if (sym.kind == SymbolKind::NonTerminal && !reachable[sym.nonterminal]) {
                        reachable[sym.nonterminal] = true;
                        stack.push_back(sym.nonterminal);
                    }
        }
        bool terminating = false;
        for (size_t r = 0; r < g_.rules_.size() && !terminating; ++r) {
            if (!reachable[r]) continue;
            for (const auto& alt : g_.rules_[r].alternatives) {
                bool terminal_only = true;
                for (const auto& sym : alt.symbols)
                    if (sym.kind == SymbolKind::NonTerminal) terminal_only = false;
                if (terminal_only) {
                    terminating = true;
                    break;
                }
            }
        }
        if (!terminating)
            throw NonTerminatingGrammarError(
                "no rule reachable from '" + g_.start_symbol_ +
                "' has a terminal-only or epsilon alternative");
    }

    g_.alt_base_.resize(g_.rules_.size());
    int base = 0;
    for (size_t i = 0; i < g_.rules_.size(); ++i) {
        g_.alt_base_[i] = base;
        base += static_cast<int>(g_.rules_[i].alternatives.size());
    }
    g_.total_alternatives_ = base;
    return std::move(g_);
}

}  // namespace gtf
