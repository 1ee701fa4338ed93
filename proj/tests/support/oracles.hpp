#pragma once

#include "gtf/grammar.hpp"
#include "gtf/rng.hpp"
#include "gtf/rule_analysis.hpp"

namespace gtf::test {

// Brute-force classification oracle: worst-case termination depth by explicit
// memoized tree expansion capped at `cap` (infinite when the cap is
// exceeded), cycle reachability via a Floyd-Warshall closure. Independent of
// the production classify() implementation.
struct OracleAltInfo {
    int depth;            // capped expansion depth; kInfiniteDepth when cap exceeded or cyclic
    bool cap_exceeded;    // finite but deeper than the cap
    bool reaches_cycle;   // some expansion path enters a reference cycle
    bool recursive;       // directly references a rule that can reach the LHS
    RuleLabel label;
};

std::vector<std::vector<OracleAltInfo>> oracle_classify(const Grammar& grammar, int cap = 10);

// Asserts classify() against the oracle at the cap's resolution. Returns an
// empty string when everything matches, else a description of the first
// mismatch.
std::string compare_with_oracle(const Grammar& grammar, int cap = 10);

// Random grammar with at most max_rules nonterminals and max_alts
// alternatives per rule; always loadable (termination check satisfied).
Grammar random_grammar(Rng& rng, int max_rules = 12, int max_alts = 4);

}  // namespace gtf::test
