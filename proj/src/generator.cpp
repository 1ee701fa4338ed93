#include "gtf/generator.hpp"

#include "gtf/error.hpp"

namespace gtf {

void GenPolicy::validate() const {
    if (depth_threshold <= 0 || depth_threshold >= hard_depth_cap)
        throw ConfigError("GenPolicy requires 0 < depth_threshold < hard_depth_cap");
    if (epsilon < 0.0 || epsilon > 1.0) throw ConfigError("epsilon must be in [0,1]");
}

namespace {

struct GenContext {
    const Grammar& grammar;
    const RuleClassification& classification;
    const GenPolicy& policy;
    BanditTable& bandit;
    EdgeCoverage& edge_cov;
    Rng& rng;
    std::vector<int> scratch_candidates;
};

std::unique_ptr<DerivationNode> expand(GenContext& ctx, int rule, int depth) {
    if (depth >= ctx.policy.hard_depth_cap)
        throw DepthCapExceeded("expansion of '" + ctx.grammar.rule(rule).name +
                               "' reached hard depth cap " +
                               std::to_string(ctx.policy.hard_depth_cap));

    const auto& alternatives = ctx.grammar.rule(rule).alternatives;
    auto& candidates = ctx.scratch_candidates;
    candidates.clear();

    if (depth < ctx.policy.depth_threshold) {
        for (const auto& alt : alternatives)
            if (!alt.excluded)
                candidates.push_back(ctx.grammar.alternative_id(rule, alt.index));
    } else {
        // Past the threshold, only the best available class stays in play.
        RuleLabel best = RuleLabel::Complex;
        for (const auto& alt : alternatives) {
            if (alt.excluded) continue;
            RuleLabel label = ctx.classification.info(rule, alt.index).label;
            if (label < best) best = label;
        }
        for (const auto& alt : alternatives)
            if (!alt.excluded && ctx.classification.info(rule, alt.index).label == best)
                candidates.push_back(ctx.grammar.alternative_id(rule, alt.index));
    }
    if (candidates.empty())
        throw GenerationStuck("nonterminal '" + ctx.grammar.rule(rule).name +
                              "' has no usable alternatives");

    int arm = select_arm(ctx.bandit, candidates, ctx.policy.epsilon, ctx.rng);
    const Alternative& alt = ctx.grammar.alternative_by_id(arm);

    auto node = std::make_unique<DerivationNode>();
    node->nonterminal = rule;
    node->alternative = alt.index;
    for (const auto& sym : alt.symbols) {
        if (sym.kind != SymbolKind::NonTerminal) continue;
        ctx.edge_cov.record_unchecked(rule, sym.nonterminal);
        node->children.push_back(expand(ctx, sym.nonterminal, depth + 1));
    }
    return node;
}

}  // namespace

DerivationTree generate(const Grammar& grammar, const RuleClassification& classification,
                        int start, const GenPolicy& policy, BanditTable& bandit,
                        EdgeCoverage& edge_cov, Rng& rng, int base_depth) {
    policy.validate();
    GenContext ctx{grammar, classification, policy, bandit, edge_cov, rng, {}};
    return DerivationTree{expand(ctx, start, base_depth)};
}

DerivationTree generate_with_retries(const Grammar& grammar,
                                     const RuleClassification& classification, int start,
                                     const GenPolicy& policy, BanditTable& bandit,
                                     EdgeCoverage& edge_cov, Rng& rng, int base_depth) {
    for (int attempt = 0; attempt < 10; ++attempt) {
        try {
            return generate(grammar, classification, start, policy, bandit, edge_cov, rng,
                            base_depth);
        } catch (const DepthCapExceeded&) {
            // Fresh randomness next attempt; rng has advanced already.
        }
    }
    throw GenerationStuck("10 consecutive generations of '" + grammar.rule(start).name +
                          "' exceeded the depth cap");
}

void walk_leaves(const Grammar& grammar, const DerivationNode& node,
                 const std::function<void(const Symbol&)>& visit) {
    const Alternative& alt = grammar.rule(node.nonterminal).alternatives[node.alternative];
    size_t child = 0;
    for (const auto& sym : alt.symbols) {
        if (sym.kind == SymbolKind::NonTerminal)
            walk_leaves(grammar, *node.children[child++], visit);
        else
            visit(sym);
    }
}

std::string render(const Grammar& grammar, const DerivationTree& tree) {
    if (!tree.root) throw IncompleteTreeError("render on empty tree");
    std::string out;
    walk_leaves(grammar, *tree.root, [&](const Symbol& sym) {
        if (!out.empty()) out.push_back(' ');
        if (sym.kind == SymbolKind::Placeholder) {
            out.push_back('<');
            out += placeholder_category_name(sym.category);
            out.push_back('>');
        } else {
            out += sym.surface;
        }
    });
    return out;
}

}  // namespace gtf
