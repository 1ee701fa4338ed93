#pragma once

#include "gtf/generator.hpp"

namespace gtf {

struct MutationResult {
    DerivationTree tree;
    size_t node_index;  // pre-order index of the regenerated node
};

// Picks a node uniformly at random (root included), regenerates its subtree
// from the grammar with the depth budget of the node's original position, and
// returns a new tree; the input is untouched. DepthCapExceeded propagates so
// the caller can retry with fresh randomness.
MutationResult mutate(const DerivationTree& tree, const Grammar& grammar,
                      const RuleClassification& classification, const GenPolicy& policy,
                      BanditTable& bandit, EdgeCoverage& edge_cov, Rng& rng);

// Deterministic variant used by tests and trace replay: regenerates the given
// pre-order node instead of drawing one.
MutationResult mutate_at(const DerivationTree& tree, size_t node_index, const Grammar& grammar,
                         const RuleClassification& classification, const GenPolicy& policy,
                         BanditTable& bandit, EdgeCoverage& edge_cov, Rng& rng);

}  // namespace gtf
