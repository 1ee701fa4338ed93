#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace gtf {

enum class SymbolKind { NonTerminal, TerminalToken, Placeholder, Literal };

enum class PlaceholderCategory {
    NewTable,
    ExistingTable,
    NewColumn,
    ExistingColumn,
    NewIndex,
    ExistingIndex,
    IntConst,
    FloatConst,
    StringConst,
    Identifier,
};

const char* placeholder_category_name(PlaceholderCategory c);
std::optional<PlaceholderCategory> placeholder_category_from_name(const std::string& name);

struct Symbol {
    SymbolKind kind;
    std::string name;  // rule name, token name, placeholder name, or literal text
    // Resolved data, filled during load:
    int nonterminal = -1;                 // rule index when kind == NonTerminal
    std::string surface;                  // token surface / literal text
    PlaceholderCategory category = PlaceholderCategory::Identifier;

    bool operator==(const Symbol& o) const {
        return kind == o.kind && name == o.name && surface == o.surface &&
               (kind != SymbolKind::Placeholder || category == o.category);
    }
};

enum class ManualLabel { Simple, Complex };

struct Alternative {
    int nonterminal = -1;  // owning rule index
    int index = -1;        // ordinal within the rule, source order
    std::vector<Symbol> symbols;
    std::optional<ManualLabel> manual_label;
    bool excluded = false;
};

struct Rule {
    std::string name;
    std::vector<Alternative> alternatives;
};

// Immutable after load; safe to share across threads.
class Grammar {
  public:
    const std::vector<Rule>& rules() const { return rules_; }
    const Rule& rule(int idx) const { return rules_[idx]; }
    int rule_count() const { return static_cast<int>(rules_.size()); }

    int find_rule(const std::string& name) const {
        auto it = rule_index_.find(name);
        return it == rule_index_.end() ? -1 : it->second;
    }
    bool has_rule(const std::string& name) const { return rule_index_.count(name) != 0; }

    const std::string& start_symbol() const { return start_symbol_; }
    int start_rule() const { return find_rule(start_symbol_); }

    const std::unordered_map<std::string, std::string>& token_map() const { return token_map_; }
    const std::unordered_map<std::string, PlaceholderCategory>& placeholder_categories() const {
        return placeholder_categories_;
    }

    // Dense id for (rule, alternative); used as bandit arm index.
    int alternative_id(int rule, int alt) const { return alt_base_[rule] + alt; }
    int total_alternatives() const { return total_alternatives_; }
    const Alternative& alternative_by_id(int id) const;

    // Canonical rule text; reloading it with the same token/placeholder maps
    // reproduces the identical rule graph.
    std::string canonical_text() const;

    // FNV-1a over the canonical text, stable across runs. Used in PoC headers.
    uint64_t hash() const;

    void set_manual_label(int rule, int alt, std::optional<ManualLabel> label) {
        rules_[rule].alternatives[alt].manual_label = label;
    }
    void set_excluded(int rule, int alt, bool excluded) {
        rules_[rule].alternatives[alt].excluded = excluded;
    }

  private:
    friend class GrammarBuilder;

    std::vector<Rule> rules_;
    std::unordered_map<std::string, int> rule_index_;
    std::string start_symbol_;
    std::unordered_map<std::string, std::string> token_map_;
    std::unordered_map<std::string, PlaceholderCategory> placeholder_categories_;
    std::vector<int> alt_base_;
    int total_alternatives_ = 0;
};

// Assembles a Grammar; load_grammar drives this, tests use it to hand-build
// small fixtures.
class GrammarBuilder {
  public:
    int add_rule(const std::string& name);
    // Returns the alternative's ordinal within the rule.
    int add_alternative(int rule, std::vector<Symbol> symbols);
    void set_start(const std::string& name) { g_.start_symbol_ = name; }
    void set_token(const std::string& name, const std::string& surface) {
        g_.token_map_[name] = surface;
    }
    void set_placeholder(const std::string& name, PlaceholderCategory cat) {
        g_.placeholder_categories_[name] = cat;
    }

    // Resolves symbol kinds and validates the type invariants; throws
    // UnresolvedSymbolError / NonTerminatingGrammarError.
    Grammar finish();

  private:
    Grammar g_;
};

std::string quote_literal(const std::string& text);

}  // namespace gtf
