#include "gtf/derivation.hpp"

#include <algorithm>

#include "gtf/error.hpp"

namespace gtf {

std::unique_ptr<DerivationNode> DerivationNode::clone() const {
    auto out = std::make_unique<DerivationNode>();
    out->nonterminal = nonterminal;
    out->alternative = alternative;
    out->children.reserve(children.size());
    for (const auto& c : children) out->children.push_back(c->clone());
    return out;
}

std::vector<DerivationNode*> collect_nodes(DerivationTree& tree) {
    std::vector<DerivationNode*> out;
    if (!tree.root) return out;
    std::vector<DerivationNode*> stack{tree.root.get()};
    while (!stack.empty()) {
        DerivationNode* n = stack.back();
        stack.pop_back();
        out.push_back(n);
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it)
            stack.push_back(it->get());
    }
    return out;
}

size_t node_count(const DerivationTree& tree) {
    size_t count = 0;
    if (!tree.root) return 0;
    std::vector<const DerivationNode*> stack{tree.root.get()};
    while (!stack.empty()) {
        const DerivationNode* n = stack.back();
        stack.pop_back();
        ++count;
        for (const auto& c : n->children) stack.push_back(c.get());
    }
    return count;
}

std::vector<int> node_depths(const DerivationTree& tree) {
    std::vector<int> out;
    if (!tree.root) return out;
    std::vector<std::pair<const DerivationNode*, int>> stack{{tree.root.get(), 0}};
    while (!stack.empty()) {
        auto [n, d] = stack.back();
        stack.pop_back();
        out.push_back(d);
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it)
            stack.push_back({it->get(), d + 1});
    }
    return out;
}

std::vector<int> committed_arms(const Grammar& grammar, const DerivationTree& tree) {
    std::vector<int> arms;
    if (!tree.root) return arms;
    std::vector<const DerivationNode*> stack{tree.root.get()};
    while (!stack.empty()) {
        const DerivationNode* n = stack.back();
        stack.pop_back();
        arms.push_back(grammar.alternative_id(n->nonterminal, n->alternative));
        for (const auto& c : n->children) stack.push_back(c.get());
    }
    std::sort(arms.begin(), arms.end());
    arms.erase(std::unique(arms.begin(), arms.end()), arms.end());
    return arms;
}

void check_complete(const Grammar& grammar, const DerivationTree& tree) {
    if (!tree.root) throw IncompleteTreeError("tree has no root");
    std::vector<const DerivationNode*> stack{tree.root.get()};
    while (!stack.empty()) {
        const DerivationNode* n = stack.back();
        stack.pop_back();
        if (n->nonterminal < 0 || n->nonterminal >= grammar.rule_count())
            throw IncompleteTreeError("node has invalid nonterminal");
        const auto& alts = grammar.rule(n->nonterminal).alternatives;
        if (n->alternative < 0 || n->alternative >= static_cast<int>(alts.size()))
            throw IncompleteTreeError("node has invalid alternative");
        size_t nt_positions = 0;
        for (const auto& sym : alts[n->alternative].symbols)
            if (sym.kind == SymbolKind::NonTerminal) ++nt_positions;
        if (nt_positions != n->children.size())
            throw IncompleteTreeError("node children do not match committed alternative");
        size_t pos = 0;
        for (const auto& sym : alts[n->alternative].symbols) {
            if (sym.kind != SymbolKind::NonTerminal) continue;
            const DerivationNode* child = n->children[pos++].get();
            if (!child || child->nonterminal != sym.nonterminal)
                throw IncompleteTreeError("child nonterminal does not match symbol");
            stack.push_back(child);
        }
    }
}

}  // namespace gtf
