#include "gtf/rule_analysis.hpp"

#include <algorithm>

#include "gtf/error.hpp"

namespace gtf {

const char* rule_label_name(RuleLabel label) {
    switch (label) {
        case RuleLabel::Simple: return "Simple";
        case RuleLabel::Normal: return "Normal";
        case RuleLabel::Complex: return "Complex";
    }
    return "?";
}

namespace {

// Reference graph over rules via non-excluded alternatives.
std::vector<std::vector<int>> reference_graph(const Grammar& g) {
    std::vector<std::vector<int>> out(g.rule_count());
    for (int r = 0; r < g.rule_count(); ++r) {
        for (const auto& alt : g.rule(r).alternatives) {
            if (alt.excluded) continue;
            for (const auto& sym : alt.symbols)
                if (sym.kind == SymbolKind::NonTerminal) out[r].push_back(sym.nonterminal);
        }
        auto& v = out[r];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return out;
}

// reach[a][b]: b reachable from a in one or more steps.
std::vector<std::vector<bool>> reachability(const std::vector<std::vector<int>>& graph) {
    int n = static_cast<int>(graph.size());
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int start = 0; start < n; ++start) {
        std::vector<int> stack(graph[start]);
        for (int v : graph[start]) reach[start][v] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : graph[v])
                if (!reach[start][w]) {
                    reach[start][w] = true;
                    stack.push_back(w);
                }
        }
    }
    return reach;
}

}  // namespace

RuleClassification classify(const Grammar& grammar) {
    int n = grammar.rule_count();
    auto graph = reference_graph(grammar);
    auto reach = reachability(graph);

    // A rule has unbounded worst-case depth iff it can reach a cycle
    // (including itself). gdepth takes a max over alternatives, so any
    // alternative path into a cycle makes the whole rule unbounded.
    std::vector<bool> on_cycle(n, false);
    for (int r = 0; r < n; ++r) on_cycle[r] = reach[r][r];
    std::vector<bool> unbounded(n, false);
    for (int r = 0; r < n; ++r) {
        if (on_cycle[r]) {
            unbounded[r] = true;
            continue;
        }
        for (int c = 0; c < n; ++c)
            if (on_cycle[c] && reach[r][c]) {
                unbounded[r] = true;
                break;
            }
    }

    // Longest-expansion depth over the bounded part, computed to fixpoint.
    // gdepth(rule) = max over non-excluded alternatives; alternatives with no
    // nonterminals cost 1; a rule whose alternatives are all excluded never
    // contributes (callers guarantee such rules are unreferenced).
    std::vector<int> rule_depth(n, 0);
    auto alt_depth = [&](const Alternative& alt) -> int {
        int deepest = 0;
        bool has_nt = false;
        for (const auto& sym : alt.symbols)
            if (sym.kind == SymbolKind::NonTerminal) {
                has_nt = true;
                if (unbounded[sym.nonterminal]) return kInfiniteDepth;
                deepest = std::max(deepest, rule_depth[sym.nonterminal]);
            }
        return has_nt ? 1 + deepest : 1;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (int r = 0; r < n; ++r) {
            if (unbounded[r]) continue;
            int best = 0;
            for (const auto& alt : grammar.rule(r).alternatives) {
                if (alt.excluded) continue;
                int d = alt_depth(alt);
                if (d != kInfiniteDepth) best = std::max(best, d);
            }
            if (best != rule_depth[r]) {
                rule_depth[r] = best;
                changed = true;
            }
        }
    }

    RuleClassification out;
    out.base_.resize(n);
    out.rule_gdepth_.resize(n);
    for (int r = 0; r < n; ++r) {
        out.base_[r] = static_cast<int>(out.alts_.size());
        out.rule_gdepth_[r] = unbounded[r] ? kInfiniteDepth : rule_depth[r];
        if (on_cycle[r]) out.cyclic_rules_.push_back(r);
        for (const auto& alt : grammar.rule(r).alternatives) {
            AlternativeInfo info;
            info.gdepth = alt_depth(alt);

            // Recursive iff some directly referenced rule can get back to the
            // LHS (a direct self-reference counts trivially).
            for (const auto& sym : alt.symbols)
                if (sym.kind == SymbolKind::NonTerminal &&
                    (sym.nonterminal == r || reach[sym.nonterminal][r])) {
                    info.recursive = true;
                    break;
                }

            if (alt.manual_label) {
                info.label = *alt.manual_label == ManualLabel::Simple ? RuleLabel::Simple
                                                                      : RuleLabel::Complex;
            } else if (info.recursive || info.gdepth == kInfiniteDepth) {
                info.label = RuleLabel::Complex;
            } else if (info.gdepth <= 2) {
                info.label = RuleLabel::Simple;
            } else {
                info.label = RuleLabel::Normal;
            }
            out.alts_.push_back(info);
        }
    }
    return out;
}

std::set<GrammarEdge> enumerate_edges(const Grammar& grammar) {
    std::set<GrammarEdge> edges;
    for (int r = 0; r < grammar.rule_count(); ++r)
        for (const auto& alt : grammar.rule(r).alternatives) {
            if (alt.excluded) continue;
            for (const auto& sym : alt.symbols)
                if (sym.kind == SymbolKind::NonTerminal)
                    edges.insert(GrammarEdge{r, sym.nonterminal});
        }
    return edges;
}

EdgeCoverage::EdgeCoverage(const Grammar& grammar) {
    auto statics = enumerate_edges(grammar);
    edges_.assign(statics.begin(), statics.end());
    total_ = edges_.size();
    covered_.assign(total_, false);
    slot_.reserve(total_ * 2);
    for (size_t i = 0; i < edges_.size(); ++i) slot_[key(edges_[i].parent, edges_[i].child)] = i;
}

void EdgeCoverage::record(GrammarEdge edge) {
    auto it = slot_.find(key(edge.parent, edge.child));
    if (it == slot_.end())
        throw UnknownEdgeError("edge (" + std::to_string(edge.parent) + "," +
                               std::to_string(edge.child) + ") is not statically enumerable");
    if (!covered_[it->second]) {
        covered_[it->second] = true;
        ++covered_count_;
    }
}

std::set<GrammarEdge> EdgeCoverage::covered() const {
    std::set<GrammarEdge> out;
    for (size_t i = 0; i < edges_.size(); ++i)
        if (covered_[i]) out.insert(edges_[i]);
    return out;
}

void EdgeCoverage::merge_from(const EdgeCoverage& other) {
    for (size_t i = 0; i < other.edges_.size(); ++i)
        if (other.covered_[i]) record(other.edges_[i]);
}

}  // namespace gtf
