#include "gtf/grammar_loader.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "gtf/error.hpp"

namespace gtf {

namespace {

struct Token {
    enum Kind { Name, LiteralText, Colon, Pipe, Semicolon, End } kind;
    std::string text;
    int line;
};

// Tokenizes the grammar subset. Strips comments, brace action blocks and
// %prec annotations here so the rule parser only sees structure.
class GrammarLexer {
  public:
    explicit GrammarLexer(const std::string& src) : src_(src) {}

    Token next() {
        for (;;) {
            skip_ws();
            if (pos_ >= src_.size()) return {Token::End, "", line_};
            char c = src_[pos_];
            if (c == '/' && peek(1) == '*') {
                skip_comment();
                continue;
            }
            if (c == '{') {
                skip_action();
                continue;
            }
            if (c == '%') {
                skip_percent();
                continue;
            }
            if (c == ':') return advance(Token::Colon);
            if (c == '|') return advance(Token::Pipe);
            if (c == ';') return advance(Token::Semicolon);
            if (c == '\'') return literal();
            if (is_name_char(c)) return name();
            throw ParseError(line_, std::string("unexpected character '") + c + "'");
        }
    }

  private:
    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }

    char peek(size_t off) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }

    void bump() {
        if (src_[pos_] == '\n') ++line_;
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
    }

    void skip_comment() {
        int start = line_;
        pos_ += 2;
        while (pos_ < src_.size()) {
            if (src_[pos_] == '*' && peek(1) == '/') {
                pos_ += 2;
                return;
            }
            bump();
        }
        throw ParseError(start, "unterminated /* comment");
    }

    // Balanced braces; quotes and comments inside the action don't count.
    void skip_action() {
        int start = line_;
        int depth = 0;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '{') {
                ++depth;
                bump();
            } else if (c == '}') {
                --depth;
                bump();
                if (depth == 0) return;
            } else if (c == '\'' || c == '"') {
                skip_quoted(c);
            } else if (c == '/' && peek(1) == '*') {
                skip_comment();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else {
                bump();
            }
        }
        throw ParseError(start, "unterminated { action block");
    }

    void skip_quoted(char quote) {
        int start = line_;
        bump();
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\') {
                bump();
                if (pos_ < src_.size()) bump();
                continue;
            }
            bump();
            if (c == quote) return;
        }
        throw ParseError(start, "unterminated quote inside action block");
    }

    void skip_percent() {
        int start = line_;
        size_t word_start = pos_ + 1;
        size_t end = word_start;
        while (end < src_.size() && is_name_char(src_[end])) ++end;
        std::string word = src_.substr(word_start, end - word_start);
        if (word != "prec") throw ParseError(start, "unsupported %" + word + " directive");
        pos_ = end;
        skip_ws();
        // The token following %prec is parser-generator metadata; drop it.
        if (pos_ >= src_.size() || !(is_name_char(src_[pos_]) || src_[pos_] == '\''))
            throw ParseError(start, "%prec requires a token name");
        if (src_[pos_] == '\'') {
            literal();
        } else {
            while (pos_ < src_.size() && is_name_char(src_[pos_])) bump();
        }
    }

    Token advance(Token::Kind kind) {
        Token t{kind, std::string(1, src_[pos_]), line_};
        bump();
        return t;
    }

    Token literal() {
        int start = line_;
        bump();  // opening quote
        std::string text;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') throw ParseError(start, "newline inside quoted literal");
            if (c == '\\') {
                bump();
                if (pos_ >= src_.size()) break;
                text.push_back(src_[pos_]);
                bump();
                continue;
            }
            if (c == '\'') {
                bump();
                if (text.empty()) throw ParseError(start, "empty quoted literal");
                return {Token::LiteralText, text, start};
            }
            text.push_back(c);
            bump();
        }
        throw ParseError(start, "unterminated quoted literal");
    }

    Token name() {
        int start = line_;
        size_t begin = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) bump();
        return {Token::Name, src_.substr(begin, pos_ - begin), start};
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Grammar load_grammar(const std::string& grammar_text, const std::string& token_map_text,
                     const std::string& placeholder_text, const IngestConfig& config) {
    GrammarBuilder builder;

    // Token map: TERMINAL<TAB>surface text, one per line.
    {
        std::istringstream in(token_map_text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty() || trim(line)[0] == '#') continue;
            size_t tab = line.find('\t');
            if (tab == std::string::npos)
                throw ParseError(lineno, "token map line has no tab separator: " + line);
            std::string name = trim(line.substr(0, tab));
            std::string surface = trim(line.substr(tab + 1));
            if (name.empty() || surface.empty())
                throw ParseError(lineno, "token map line is incomplete: " + line);
            builder.set_token(name, surface);
        }
    }

    // Placeholder declarations: TERMINAL category.
    {
        std::istringstream in(placeholder_text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            std::istringstream ls(t);
            std::string name, cat;
            ls >> name >> cat;
            auto category = placeholder_category_from_name(cat);
            if (name.empty() || !category)
                throw ParseError(lineno, "bad placeholder declaration: " + line);
            builder.set_placeholder(name, *category);
        }
    }

    // Rules. Two passes over the token stream would need buffering; instead
    // symbols stay unresolved (kind=TerminalToken placeholder value) until
    // GrammarBuilder::finish resolves them.
    GrammarLexer lexer(grammar_text);
    Token tok = lexer.next();
    bool any_rule = false;
    while (tok.kind != Token::End) {
        if (tok.kind != Token::Name)
            throw ParseError(tok.line, "expected rule name, got '" + tok.text + "'");
        std::string rule_name = tok.text;
        tok = lexer.next();
        if (tok.kind != Token::Colon)
            throw ParseError(tok.line, "expected ':' after rule name '" + rule_name + "'");
        int rule = builder.add_rule(rule_name);
        any_rule = true;

        std::vector<Symbol> symbols;
        tok = lexer.next();
        for (;;) {
            if (tok.kind == Token::Name) {
                Symbol s;
                s.kind = SymbolKind::TerminalToken;  // resolved in finish()
                s.name = tok.text;
                symbols.push_back(std::move(s));
                tok = lexer.next();
            } else if (tok.kind == Token::LiteralText) {
                Symbol s;
                s.kind = SymbolKind::Literal;
                s.name = tok.text;
                symbols.push_back(std::move(s));
                tok = lexer.next();
            } else if (tok.kind == Token::Pipe) {
                builder.add_alternative(rule, std::move(symbols));
                symbols.clear();
                tok = lexer.next();
            } else if (tok.kind == Token::Semicolon) {
                builder.add_alternative(rule, std::move(symbols));
                symbols.clear();
                tok = lexer.next();
                break;
            } else if (tok.kind == Token::Colon) {
                throw ParseError(tok.line, "unexpected ':' inside rule '" + rule_name +
                                               "' (missing ';'?)");
            } else {
                throw ParseError(tok.line, "rule '" + rule_name + "' is not terminated by ';'");
            }
        }
    }
    if (!any_rule) throw ParseError(1, "grammar defines no rules");

    if (!config.start_symbol.empty()) builder.set_start(config.start_symbol);
    return builder.finish();
}

void apply_rule_config(Grammar& grammar, const std::string& rule_config_text) {
    std::istringstream in(rule_config_text);
    std::string line;
    int lineno = 0;

    // Parses `name` or `name[index]`; returns rule index and optional alt.
    auto parse_ref = [&](const std::string& ref) -> std::pair<int, int> {
        std::string name = ref;
        int alt = -1;
        size_t br = ref.find('[');
        if (br != std::string::npos) {
            if (ref.back() != ']')
                throw UnknownRuleReferenceError("line " + std::to_string(lineno) +
                                                ": malformed reference '" + ref + "'");
            name = ref.substr(0, br);
            std::string idx = ref.substr(br + 1, ref.size() - br - 2);
            try {
                alt = std::stoi(idx);
            } catch (...) {
                throw UnknownRuleReferenceError("line " + std::to_string(lineno) +
                                                ": bad index in '" + ref + "'");
            }
        }
        int rule = grammar.find_rule(name);
        if (rule < 0)
            throw UnknownRuleReferenceError("line " + std::to_string(lineno) +
                                            ": unknown rule '" + name + "'");
        int n = static_cast<int>(grammar.rule(rule).alternatives.size());
        if (alt >= n || (br != std::string::npos && alt < 0))
            throw UnknownRuleReferenceError("line " + std::to_string(lineno) + ": rule '" + name +
                                            "' has no alternative " + std::to_string(alt));
        return {rule, alt};
    };

    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string verb;
        if (!(ls >> verb)) continue;

        if (verb == "label") {
            std::string ref, which;
            if (!(ls >> ref >> which) || (which != "simple" && which != "complex"))
                throw UnknownRuleReferenceError("line " + std::to_string(lineno) +
                                                ": expected `label <ref> simple|complex`");
            ManualLabel label = which == "simple" ? ManualLabel::Simple : ManualLabel::Complex;
            auto [rule, alt] = parse_ref(ref);
            if (alt >= 0) {
                grammar.set_manual_label(rule, alt, label);
            } else {
                int n = static_cast<int>(grammar.rule(rule).alternatives.size());
                for (int i = 0; i < n; ++i) grammar.set_manual_label(rule, i, label);
            }
        } else if (verb == "exclude") {
            std::string ref;
            if (!(ls >> ref))
                throw UnknownRuleReferenceError("line " + std::to_string(lineno) +
                                                ": expected `exclude <ref>`");
            auto [rule, alt] = parse_ref(ref);
            if (alt >= 0) {
                grammar.set_excluded(rule, alt, true);
            } else {
                int n = static_cast<int>(grammar.rule(rule).alternatives.size());
                for (int i = 0; i < n; ++i) grammar.set_excluded(rule, i, true);
            }
        } else {
            throw UnknownRuleReferenceError("line " + std::to_string(lineno) +
                                            ": unknown directive '" + verb + "'");
        }
    }

    // A rule left with zero usable alternatives may not be referenced from any
    // alternative that can still be chosen.
    for (int r = 0; r < grammar.rule_count(); ++r) {
        bool any_usable = false;
        for (const auto& alt : grammar.rule(r).alternatives)
            if (!alt.excluded) any_usable = true;
        if (any_usable) continue;
        for (int p = 0; p < grammar.rule_count(); ++p) {
            for (const auto& alt : grammar.rule(p).alternatives) {
                if (alt.excluded) continue;
                for (const auto& sym : alt.symbols)
                    if (sym.kind == SymbolKind::NonTerminal && sym.nonterminal == r)
                        throw AllAlternativesExcludedError(
                            "every alternative of '" + grammar.rule(r).name +
                            "' is excluded but it is still referenced from '" +
                            grammar.rule(p).name + "'");
            }
        }
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

Grammar load_grammar_files(const std::string& grammar_path, const std::string& tokens_path,
                           const std::string& placeholders_path,
                           const std::string& rule_config_path, const IngestConfig& config) {
    std::string placeholders =
        placeholders_path.empty() ? std::string() : read_file(placeholders_path);
    Grammar g = load_grammar(read_file(grammar_path), read_file(tokens_path), placeholders, config);
    if (!rule_config_path.empty()) apply_rule_config(g, read_file(rule_config_path));
    return g;
}

}  // namespace gtf
