#pragma once

#include <stdexcept>
#include <string>

namespace gtf {

// Base for everything the library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// grammar_ingest
struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& msg)
        : Error("parse error at line " + std::to_string(line_) + ": " + msg), line(line_) {}
};
struct UnresolvedSymbolError : Error {
    explicit UnresolvedSymbolError(const std::string& msg) : Error(msg) {}
};
struct NonTerminatingGrammarError : Error {
    explicit NonTerminatingGrammarError(const std::string& msg) : Error(msg) {}
};
struct UnknownRuleReferenceError : Error {
    explicit UnknownRuleReferenceError(const std::string& msg) : Error(msg) {}
};
struct AllAlternativesExcludedError : Error {
    explicit AllAlternativesExcludedError(const std::string& msg) : Error(msg) {}
};

// rule_analysis
struct UnknownEdgeError : Error {
    explicit UnknownEdgeError(const std::string& msg) : Error(msg) {}
};

// generator / mutator
struct DepthCapExceeded : Error {
    explicit DepthCapExceeded(const std::string& msg) : Error(msg) {}
};
struct GenerationStuck : Error {
    explicit GenerationStuck(const std::string& msg) : Error(msg) {}
};
struct IncompleteTreeError : Error {
    explicit IncompleteTreeError(const std::string& msg) : Error(msg) {}
};

// coverage / target
struct SizeMismatchError : Error {
    explicit SizeMismatchError(const std::string& msg) : Error(msg) {}
};
struct TargetUnresponsiveError : Error {
    explicit TargetUnresponsiveError(const std::string& msg) : Error(msg) {}
};
struct ProtocolError : Error {
    explicit ProtocolError(const std::string& msg) : Error(msg) {}
};

// campaign
struct EmptyCandidatesError : Error {
    explicit EmptyCandidatesError(const std::string& msg) : Error(msg) {}
};
struct MissingStartSymbolError : Error {
    explicit MissingStartSymbolError(const std::string& msg) : Error(msg) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace gtf
