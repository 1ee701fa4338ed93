#include "gtf/mutator.hpp"

#include "gtf/error.hpp"

namespace gtf {

MutationResult mutate_at(const DerivationTree& tree, size_t node_index, const Grammar& grammar,
                         const RuleClassification& classification, const GenPolicy& policy,
                         BanditTable& bandit, EdgeCoverage& edge_cov, Rng& rng) {
    if (!tree.root) throw IncompleteTreeError("mutate on empty tree");

    DerivationTree out = tree.clone();
    auto nodes = collect_nodes(out);
    auto depths = node_depths(out);
    if (node_index >= nodes.size())
        throw IncompleteTreeError("mutation node index out of range");

    DerivationNode* victim = nodes[node_index];
    DerivationTree replacement =
        generate(grammar, classification, victim->nonterminal, policy, bandit, edge_cov, rng,
                 depths[node_index]);

    if (node_index == 0) {
        out.root = std::move(replacement.root);
    } else {
        *victim = std::move(*replacement.root);
    }
    return MutationResult{std::move(out), node_index};
}

MutationResult mutate(const DerivationTree& tree, const Grammar& grammar,
                      const RuleClassification& classification, const GenPolicy& policy,
                      BanditTable& bandit, EdgeCoverage& edge_cov, Rng& rng) {
    size_t count = node_count(tree);
    if (count == 0) throw IncompleteTreeError("mutate on empty tree");
    size_t pick = rng.below(count);
    return mutate_at(tree, pick, grammar, classification, policy, bandit, edge_cov, rng);
}

}  // namespace gtf
