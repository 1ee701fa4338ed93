#pragma once

#include <functional>
#include <string>

#include "gtf/bandit.hpp"
#include "gtf/derivation.hpp"
#include "gtf/grammar.hpp"
#include "gtf/rng.hpp"
#include "gtf/rule_analysis.hpp"

namespace gtf {

struct GenPolicy {
    int depth_threshold = 15;
    int hard_depth_cap = 40;
    double epsilon = 0.5;

    void validate() const;
};

// Randomized rule traversal from `start` (rule index). Below depth_threshold
// the bandit picks among all non-excluded alternatives; from the threshold on,
// candidates are narrowed to the best available class (Simple, else Normal,
// else Complex) and the bandit breaks ties inside it. Every traversed
// (parent, child) pair lands in edge_cov. Throws DepthCapExceeded when a
// nonterminal would be expanded at hard_depth_cap.
//
// base_depth shifts the whole expansion deeper; mutation uses it to
// regenerate a subtree with the budget of its original position.
DerivationTree generate(const Grammar& grammar, const RuleClassification& classification,
                        int start, const GenPolicy& policy, BanditTable& bandit,
                        EdgeCoverage& edge_cov, Rng& rng, int base_depth = 0);

// Retries generate with fresh seeds drawn from rng; after 10 consecutive
// DepthCapExceeded failures throws GenerationStuck.
DerivationTree generate_with_retries(const Grammar& grammar,
                                     const RuleClassification& classification, int start,
                                     const GenPolicy& policy, BanditTable& bandit,
                                     EdgeCoverage& edge_cov, Rng& rng, int base_depth = 0);

// Left-to-right leaf visitor; the callback sees every terminal, literal and
// placeholder symbol in surface order.
void walk_leaves(const Grammar& grammar, const DerivationNode& node,
                 const std::function<void(const Symbol&)>& visit);

// Leaf concatenation with single spaces: terminals and literals emit their
// surface text, placeholders emit `<Category>` slot markers. An epsilon-only
// tree renders as the empty string.
std::string render(const Grammar& grammar, const DerivationTree& tree);

}  // namespace gtf
