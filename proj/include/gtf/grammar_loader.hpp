#pragma once

#include <string>

#include "gtf/grammar.hpp"

namespace gtf {

struct IngestConfig {
    // Empty means "first rule defined in the grammar file".
    std::string start_symbol;
};

// Parses the supported yacc/bison subset: `name : alt | alt ;`, leading-pipe
// and bare epsilon alternatives, quoted character literals, `{...}` action
// blocks (nested, with string/char/comment awareness), `%prec TOKEN`, and
// C-style comments. token_map_text maps TERMINAL<TAB>surface, one per line;
// placeholder_text maps TERMINAL<SPACE>category.
Grammar load_grammar(const std::string& grammar_text, const std::string& token_map_text,
                     const std::string& placeholder_text = "",
                     const IngestConfig& config = {});

// Applies `label nt[i] simple|complex`, `label nt simple|complex`,
// `exclude nt[i]`, `exclude nt` lines. `#` starts a comment.
void apply_rule_config(Grammar& grammar, const std::string& rule_config_text);

// File-reading conveniences for the CLI.
std::string read_file(const std::string& path);
Grammar load_grammar_files(const std::string& grammar_path, const std::string& tokens_path,
                           const std::string& placeholders_path = "",
                           const std::string& rule_config_path = "",
                           const IngestConfig& config = {});

}  // namespace gtf
