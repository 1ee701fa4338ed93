#pragma once

#include <string>
#include <vector>

#include "gtf/grammar.hpp"

namespace gtf::test {

// Independent chart-based (Earley) CFG recognizer built only from the Grammar
// object. Used as the syntactic-soundness oracle for generated and mutated
// statements; deliberately shares no code with the generator/render path.
class ChartRecognizer {
  public:
    explicit ChartRecognizer(const Grammar& grammar);

    // Whitespace-tokenizes and recognizes from the given rule (grammar start
    // symbol when start < 0). Placeholder terminals match their `<Category>`
    // slot marker or a token of the right lexical class (identifier, integer,
    // float, quoted string).
    bool recognizes(const std::string& text, int start = -1) const;
    bool recognizes_tokens(const std::vector<std::string>& tokens, int start = -1) const;

  private:
    const Grammar& grammar_;
    std::vector<bool> nullable_;  // per rule
};

std::vector<std::string> whitespace_tokens(const std::string& text);

}  // namespace gtf::test
