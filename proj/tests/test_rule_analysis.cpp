#include <doctest.h>

#include <algorithm>

#include "gtf/error.hpp"
#include "gtf/rule_analysis.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace gtf;

TEST_CASE("natural_join_type terminates in two steps and is Simple") {
    Grammar g = test::simple_rule_grammar();
    RuleClassification cls = classify(g);
    int njt = g.find_rule("natural_join_type");
    CHECK(cls.info(njt, 0).gdepth == 2);
    CHECK(cls.info(njt, 0).label == RuleLabel::Simple);
    CHECK(!cls.info(njt, 0).recursive);

    int oi = g.find_rule("opt_inner");
    CHECK(cls.info(oi, 0).gdepth == 1);  // epsilon costs one expansion step
    CHECK(cls.info(oi, 1).gdepth == 1);
    CHECK(cls.info(oi, 0).label == RuleLabel::Simple);
}

TEST_CASE("prioritization grammar reproduces the published labels") {
    Grammar g = test::prioritization_grammar();
    RuleClassification cls = classify(g);
    int tr = g.find_rule("table_reference");
    int jt = g.find_rule("joined_table");
    int tf = g.find_rule("table_factor");

    // table_reference -> table_factor: deep but finite, no cycle back.
    CHECK(cls.info(tr, 0).label == RuleLabel::Normal);
    CHECK(!cls.info(tr, 0).recursive);
    CHECK(cls.info(tr, 0).gdepth > 2);

    // joined_table alternatives loop back to table_reference.
    CHECK(cls.info(jt, 0).label == RuleLabel::Complex);
    CHECK(cls.info(jt, 1).label == RuleLabel::Complex);
    CHECK(cls.info(jt, 0).recursive);
    CHECK(cls.info(tr, 1).label == RuleLabel::Complex);
    CHECK(cls.info(tr, 1).recursive);

    // table_factor -> table_name is the preferred one-step exit.
    CHECK(cls.info(tf, 0).label == RuleLabel::Simple);
    CHECK(cls.info(tf, 0).gdepth == 2);
}

TEST_CASE("self-recursive a_expr alternatives are Complex") {
    Grammar g = test::recursive_grammar();
    RuleClassification cls = classify(g);
    int ae = g.find_rule("a_expr");
    for (int alt = 0; alt < 3; ++alt) {
        CHECK(cls.info(ae, alt).label == RuleLabel::Complex);
        CHECK(cls.info(ae, alt).recursive);
        CHECK(cls.info(ae, alt).gdepth == kInfiniteDepth);
    }
    // The terminal alternative stays Simple even though the rule is cyclic.
    CHECK(cls.info(ae, 3).label == RuleLabel::Simple);
    CHECK(cls.info(ae, 3).gdepth == 1);
    CHECK(std::count(cls.cyclic_rules().begin(), cls.cyclic_rules().end(), ae) == 1);
}

TEST_CASE("terminal-only alternative has gdepth one") {
    Grammar g = load_grammar("opt_inner: | INNER_SYM ;", "INNER_SYM\tINNER");
    RuleClassification cls = classify(g);
    CHECK(cls.info(0, 1).gdepth == 1);
    CHECK(cls.info(0, 1).label == RuleLabel::Simple);
}

TEST_CASE("manual labels override the computed ones") {
    Grammar g = test::prioritization_grammar();
    apply_rule_config(g, "label table_reference[0] complex\nlabel joined_table[0] simple\n");
    RuleClassification cls = classify(g);
    CHECK(cls.info(g.find_rule("table_reference"), 0).label == RuleLabel::Complex);
    CHECK(cls.info(g.find_rule("joined_table"), 0).label == RuleLabel::Simple);
    // recursive/gdepth facts are unaffected by the label override
    CHECK(cls.info(g.find_rule("joined_table"), 0).recursive);
}

TEST_CASE("excluded alternatives drop out of depth, recursion and edges") {
    // Without exclusion, t is cyclic through its first alternative.
    Grammar g = load_grammar("s: t ;\nt: t 'x' | 'a' ;", "");
    apply_rule_config(g, "exclude t[0]\n");
    RuleClassification cls = classify(g);
    CHECK(cls.info(g.find_rule("s"), 0).gdepth == 2);
    CHECK(cls.info(g.find_rule("s"), 0).label == RuleLabel::Simple);
    auto edges = enumerate_edges(g);
    CHECK(edges.size() == 1);  // only s -> t remains
}

TEST_CASE("enumerate_edges matches the hand enumeration of the listing") {
    Grammar g = test::prioritization_grammar();
    auto edges = enumerate_edges(g);

    // Hand enumeration oracle over the listing's three rules.
    auto has = [&](const char* p, const char* c) {
        return edges.count(GrammarEdge{g.find_rule(p), g.find_rule(c)}) == 1;
    };
    CHECK(has("table_reference", "table_factor"));
    CHECK(has("table_reference", "joined_table"));
    CHECK(has("table_factor", "table_name"));
    CHECK(has("table_factor", "table_function"));
    CHECK(has("joined_table", "table_reference"));
    CHECK(has("joined_table", "inner_join_type"));
    CHECK(has("joined_table", "outer_join_type"));
    // The fixture adds helper rules below the listing; count only edges among
    // the listing's nonterminals.
    int listing_edges = 0;
    for (const auto& e : edges) {
        std::string p = g.rule(e.parent).name;
        if (p == "table_reference" || p == "table_factor" || p == "joined_table")
            ++listing_edges;
    }
    CHECK(listing_edges == 7);
}

TEST_CASE("terminal-only grammar has no edges") {
    Grammar g = load_grammar("s: 'a' | 'b' ;", "");
    CHECK(enumerate_edges(g).empty());
}

TEST_CASE("duplicate references dedupe to one edge") {
    Grammar g = test::recursive_grammar();
    auto edges = enumerate_edges(g);
    int ae = g.find_rule("a_expr");
    // a_expr '+' a_expr and the AT TIME ZONE form both reference a_expr.
    CHECK(edges.count(GrammarEdge{ae, ae}) == 1);
    CHECK(edges.size() == 2);  // a_expr->a_expr, a_expr->any_name
}

TEST_CASE("edge enumeration is invariant under alternative reordering") {
    Grammar a = load_grammar("s: t u | 'x' ;\nt: 'a' ;\nu: 'b' ;", "");
    Grammar b = load_grammar("s: 'x' | t u ;\nt: 'a' ;\nu: 'b' ;", "");
    CHECK(enumerate_edges(a) == enumerate_edges(b));
}

TEST_CASE("edge coverage records, dedupes and rejects unknown edges") {
    Grammar g = test::prioritization_grammar();
    EdgeCoverage cov(g);
    size_t total = cov.total();
    CHECK(total == enumerate_edges(g).size());

    GrammarEdge e{g.find_rule("table_reference"), g.find_rule("table_factor")};
    cov.record(e);
    CHECK(cov.covered_count() == 1);
    cov.record(e);  // idempotent
    CHECK(cov.covered_count() == 1);
    CHECK(cov.ratio() == doctest::Approx(1.0 / double(total)));

    for (const auto& edge : enumerate_edges(g)) cov.record(edge);
    CHECK(cov.covered_count() == cov.total());
    CHECK(cov.ratio() == doctest::Approx(1.0));

    CHECK_THROWS_AS(cov.record(GrammarEdge{g.find_rule("table_name"), 0}), UnknownEdgeError);
}

TEST_CASE("classify matches the brute-force expansion oracle on random grammars") {
    Rng rng(20240817);
    for (int trial = 0; trial < 100; ++trial) {
        Grammar g = test::random_grammar(rng);
        std::string mismatch = test::compare_with_oracle(g);
        if (!mismatch.empty()) {
            INFO("grammar:\n" << g.canonical_text());
            FAIL_CHECK(mismatch);
            break;
        }
    }
}

TEST_CASE("epsilon and terminal-only alternatives are Simple everywhere") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        Grammar g = test::random_grammar(rng);
        RuleClassification cls = classify(g);
        for (const auto& rule : g.rules())
            for (const auto& alt : rule.alternatives) {
                bool terminal_only = true;
                for (const auto& sym : alt.symbols)
                    if (sym.kind == SymbolKind::NonTerminal) terminal_only = false;
                if (terminal_only) {
                    const auto& info = cls.info(alt.nonterminal, alt.index);
                    CHECK(info.gdepth == 1);
                    CHECK(info.label == RuleLabel::Simple);
                }
            }
    }
}

TEST_CASE("alternatives on reference cycles are Complex") {
    Rng rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        Grammar g = test::random_grammar(rng);
        RuleClassification cls = classify(g);
        for (const auto& rule : g.rules())
            for (const auto& alt : rule.alternatives)
                if (cls.info(alt.nonterminal, alt.index).recursive)
                    CHECK(cls.info(alt.nonterminal, alt.index).label == RuleLabel::Complex);
    }
}
