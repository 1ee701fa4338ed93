#pragma once

#include <memory>
#include <vector>

#include "gtf/grammar.hpp"

namespace gtf {

// One expanded nonterminal. Children exist only for the NonTerminal positions
// of the committed alternative, in symbol order; terminal and placeholder
// leaves are implied by the grammar, which is what keeps queue entries
// value-free.
struct DerivationNode {
    int nonterminal = -1;
    int alternative = -1;
    std::vector<std::unique_ptr<DerivationNode>> children;

    std::unique_ptr<DerivationNode> clone() const;
};

struct DerivationTree {
    std::unique_ptr<DerivationNode> root;

    DerivationTree clone() const {
        return DerivationTree{root ? root->clone() : nullptr};
    }
};

// Nodes in pre-order. Pointers stay valid while the tree is alive.
std::vector<DerivationNode*> collect_nodes(DerivationTree& tree);
size_t node_count(const DerivationTree& tree);

// Depth of each pre-order node relative to the tree root.
std::vector<int> node_depths(const DerivationTree& tree);

// Distinct (rule, alternative) ids committed anywhere in the tree, sorted.
std::vector<int> committed_arms(const Grammar& grammar, const DerivationTree& tree);

// Throws IncompleteTreeError if any node's children don't line up with its
// committed alternative.
void check_complete(const Grammar& grammar, const DerivationTree& tree);

}  // namespace gtf
