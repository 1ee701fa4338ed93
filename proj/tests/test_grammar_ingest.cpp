#include <doctest.h>

#include "gtf/error.hpp"
#include "gtf/grammar_loader.hpp"
#include "support/fixtures.hpp"

using namespace gtf;

TEST_CASE("bison listing grammar loads with three rules") {
    Grammar g = test::listing_grammar();
    CHECK(g.rule_count() == 3);
    REQUIRE(g.has_rule("simple_select"));
    CHECK(g.rule(g.find_rule("simple_select")).alternatives.size() == 3);
    CHECK(g.start_symbol() == "simple_select");

    // Symbol kinds resolve by declaration: SELECT_SYM is a token, SCONST a
    // placeholder, distinct_clause a rule.
    const auto& alt0 = g.rule(g.find_rule("simple_select")).alternatives[0];
    REQUIRE(alt0.symbols.size() == 2);
    CHECK(alt0.symbols[0].kind == SymbolKind::TerminalToken);
    CHECK(alt0.symbols[0].surface == "SELECT");
    CHECK(alt0.symbols[1].kind == SymbolKind::Placeholder);
    CHECK(alt0.symbols[1].category == PlaceholderCategory::StringConst);

    const auto& alt1 = g.rule(g.find_rule("simple_select")).alternatives[1];
    CHECK(alt1.symbols[1].kind == SymbolKind::NonTerminal);
    CHECK(alt1.symbols[1].nonterminal == g.find_rule("distinct_clause"));
}

TEST_CASE("epsilon-only grammar") {
    Grammar g = load_grammar("s: ;", "");
    CHECK(g.rule_count() == 1);
    REQUIRE(g.rule(0).alternatives.size() == 1);
    CHECK(g.rule(0).alternatives[0].symbols.empty());
}

TEST_CASE("grammar with no terminating alternative is rejected") {
    CHECK_THROWS_AS(load_grammar("s: s 'x' ;", ""), NonTerminatingGrammarError);
}

TEST_CASE("termination check only covers rules reachable from the start") {
    // 'dead' is unreachable and non-terminating; load still succeeds.
    Grammar g = load_grammar("s: 'a' ;\ndead: dead 'x' ;", "",
                             "", IngestConfig{"s"});
    CHECK(g.rule_count() == 2);
}

TEST_CASE("dangling nonterminal reference") {
    CHECK_THROWS_AS(load_grammar("s: missing ;", ""), UnresolvedSymbolError);
}

TEST_CASE("action blocks, %prec and comments are stripped") {
    const char* with_noise = R"(
s: A_SYM { int x = '}'; /* } */ "}\"" ; } b %prec A_SYM /* comment ; | */
 | ;
b: A_SYM A_SYM ;
)";
    const char* without_noise = "s: A_SYM b | ;\nb: A_SYM A_SYM ;";
    Grammar a = load_grammar(with_noise, "A_SYM\tA");
    Grammar b = load_grammar(without_noise, "A_SYM\tA");
    CHECK(a.canonical_text() == b.canonical_text());
    CHECK(a.hash() == b.hash());
}

TEST_CASE("parse errors carry line numbers") {
    try {
        load_grammar("s: 'a' ;\n\n: bad ;", "");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(load_grammar("s: 'a'", ""), ParseError);           // missing ;
    CHECK_THROWS_AS(load_grammar("s: 'a' ; t", ""), ParseError);       // dangling name
    CHECK_THROWS_AS(load_grammar("s: %whatever 'a' ;", ""), ParseError);
}

TEST_CASE("quoted literals self-map and survive the round trip") {
    Grammar g = load_grammar("s: 'a' ',' s | ;", "");
    const auto& alt = g.rule(0).alternatives[0];
    CHECK(alt.symbols[0].kind == SymbolKind::Literal);
    CHECK(alt.symbols[0].surface == "a");
    CHECK(alt.symbols[1].surface == ",");
}

TEST_CASE("canonical round trip reproduces the rule graph") {
    Grammar g = test::listing_grammar();
    Grammar reloaded =
        load_grammar(g.canonical_text(), test::kListingTokens, test::kListingPlaceholders);
    CHECK(reloaded.canonical_text() == g.canonical_text());
    CHECK(reloaded.rule_count() == g.rule_count());
    CHECK(reloaded.hash() == g.hash());

    Grammar toy = test::toy_grammar();
    Grammar toy2 = load_grammar(toy.canonical_text(), read_file(test::data_path("toy.tok")),
                                read_file(test::data_path("toy.placeholders")));
    CHECK(toy2.canonical_text() == toy.canonical_text());
}

TEST_CASE("loading is deterministic") {
    Grammar a = test::toy_grammar();
    Grammar b = test::toy_grammar();
    CHECK(a.canonical_text() == b.canonical_text());
    CHECK(a.hash() == b.hash());
}

TEST_CASE("token map requires tab separator and knows placeholders") {
    CHECK_THROWS_AS(load_grammar("s: A ;", "A no-tab-here"), ParseError);
    CHECK_THROWS_AS(load_grammar("s: P ;", "", "P NotACategory"), ParseError);
}

TEST_CASE("apply_rule_config labels and exclusions") {
    Grammar g = test::prioritization_grammar();
    int subq = g.find_rule("table_factor");

    SUBCASE("label one alternative complex") {
        apply_rule_config(g, "label table_factor[0] complex\n");
        CHECK(g.rule(subq).alternatives[0].manual_label == ManualLabel::Complex);
        CHECK(!g.rule(subq).alternatives[1].manual_label.has_value());
    }
    SUBCASE("label whole rule simple") {
        apply_rule_config(g, "label joined_table simple\n");
        int jt = g.find_rule("joined_table");
        for (const auto& alt : g.rule(jt).alternatives)
            CHECK(alt.manual_label == ManualLabel::Simple);
    }
    SUBCASE("empty config is the identity") {
        std::string before = g.canonical_text();
        apply_rule_config(g, "");
        apply_rule_config(g, "# only a comment\n\n");
        CHECK(g.canonical_text() == before);
        for (const auto& rule : g.rules())
            for (const auto& alt : rule.alternatives) {
                CHECK(!alt.excluded);
                CHECK(!alt.manual_label.has_value());
            }
    }
    SUBCASE("exclude one alternative") {
        apply_rule_config(g, "exclude joined_table[1]\n");
        int jt = g.find_rule("joined_table");
        CHECK(g.rule(jt).alternatives[1].excluded);
        CHECK(!g.rule(jt).alternatives[0].excluded);
    }
    SUBCASE("unknown references") {
        CHECK_THROWS_AS(apply_rule_config(g, "exclude nope\n"), UnknownRuleReferenceError);
        CHECK_THROWS_AS(apply_rule_config(g, "exclude table_factor[7]\n"),
                        UnknownRuleReferenceError);
        CHECK_THROWS_AS(apply_rule_config(g, "label table_factor[0] weird\n"),
                        UnknownRuleReferenceError);
        CHECK_THROWS_AS(apply_rule_config(g, "frobnicate x\n"), UnknownRuleReferenceError);
    }
}

TEST_CASE("excluding every alternative of a referenced rule fails") {
    // Two-rule grammar: s references t; excluding all of t must fail.
    Grammar g = load_grammar("s: t | 'a' ;\nt: 'b' ;", "");
    CHECK_THROWS_AS(apply_rule_config(g, "exclude t\n"), AllAlternativesExcludedError);

    // Excluding the referencing alternative first makes it legal.
    Grammar g2 = load_grammar("s: t | 'a' ;\nt: 'b' ;", "");
    apply_rule_config(g2, "exclude s[0]\nexclude t\n");
    CHECK(g2.rule(g2.find_rule("t")).alternatives[0].excluded);
}
