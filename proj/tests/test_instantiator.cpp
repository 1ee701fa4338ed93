#include <doctest.h>

#include <sstream>

#include "gtf/generator.hpp"
#include "gtf/instantiator.hpp"
#include "support/fixtures.hpp"
#include "support/recognizer.hpp"

using namespace gtf;

namespace {

// CREATE TABLE <NewTable> ( <NewColumn> INT ) as a one-rule grammar.
Grammar mint_grammar() {
    return load_grammar("s: CREATE_SYM TABLE_SYM NEW_TABLE '(' NEW_COLUMN INT_SYM ')' ;",
                        "CREATE_SYM\tCREATE\nTABLE_SYM\tTABLE\nINT_SYM\tINT",
                        "NEW_TABLE NewTable\nNEW_COLUMN NewColumn");
}

Grammar select_grammar() {
    return load_grammar("s: SELECT_SYM EXISTING_COLUMN FROM_SYM EXISTING_TABLE ;",
                        "SELECT_SYM\tSELECT\nFROM_SYM\tFROM",
                        "EXISTING_COLUMN ExistingColumn\nEXISTING_TABLE ExistingTable");
}

DerivationTree single_node_tree() {
    auto root = std::make_unique<DerivationNode>();
    root->nonterminal = 0;
    root->alternative = 0;
    return DerivationTree{std::move(root)};
}

}  // namespace

TEST_CASE("new names mint from zero and register") {
    Grammar g = mint_grammar();
    DerivationTree t = single_node_tree();
    SchemaRegistry reg;
    std::string s = instantiate_seeded(g, t, reg, 42);
    CHECK(s == "CREATE TABLE t0 ( c0 INT )");
    REQUIRE(reg.tables().size() == 1);
    CHECK(reg.tables()[0].name == "t0");
    REQUIRE(reg.tables()[0].columns.size() == 1);
    CHECK(reg.tables()[0].columns[0] == "c0");

    // Second statement in the same sequence mints fresh names.
    std::string s2 = instantiate_seeded(g, t, reg, 43);
    CHECK(s2 == "CREATE TABLE t1 ( c1 INT )");
}

TEST_CASE("existing draws pick the single candidate") {
    Grammar g = select_grammar();
    DerivationTree t = single_node_tree();
    SchemaRegistry reg;
    reg.add_table("t0");
    reg.add_column("t0", "c0");
    CHECK(instantiate_seeded(g, t, reg, 7) == "SELECT c0 FROM t0");
}

TEST_CASE("empty registry falls back to fresh unregistered names") {
    Grammar g = select_grammar();
    DerivationTree t = single_node_tree();
    SchemaRegistry reg;
    std::string s = instantiate_seeded(g, t, reg, 9);
    CHECK(s == "SELECT c0 FROM t0");
    CHECK(reg.tables().empty());  // fallback names stay unregistered

    test::ChartRecognizer rec(g);
    CHECK(rec.recognizes(s, 0));
}

TEST_CASE("reset_registry clears everything and restores determinism") {
    Grammar g = mint_grammar();
    DerivationTree t = single_node_tree();
    SchemaRegistry reg = reset_registry();
    std::string first = instantiate_seeded(g, t, reg, 1);
    reg.reset();
    CHECK(reg.tables().empty());
    CHECK(instantiate_seeded(g, t, reg, 1) == first);

    reg.reset();
    Grammar sel = select_grammar();
    DerivationTree st = single_node_tree();
    std::string s = instantiate_seeded(sel, st, reg, 2);
    CHECK(s.substr(0, 7) == "SELECT ");  // fallback path after reset
}

TEST_CASE("column draws scope to the most recent table slot") {
    // SELECT <col> FROM <table> puts the table slot after the column, so the
    // draw comes from the union; FROM-first grammars scope to the table.
    Grammar g = load_grammar("s: FROM_SYM EXISTING_TABLE SELECT_SYM EXISTING_COLUMN ;",
                             "SELECT_SYM\tPICK\nFROM_SYM\tON",
                             "EXISTING_COLUMN ExistingColumn\nEXISTING_TABLE ExistingTable");
    DerivationTree t = single_node_tree();
    SchemaRegistry reg;
    reg.add_table("t0");
    reg.add_column("t0", "a0");
    reg.add_column("t0", "a1");
    reg.add_table("t1");
    reg.add_column("t1", "b0");
    reg.add_column("t1", "b1");

    for (uint64_t seed = 0; seed < 200; ++seed) {
        std::string s = instantiate_seeded(g, t, reg, seed);
        // "ON <table> PICK <col>": the column must belong to that table.
        std::istringstream in(s);
        std::string on, table, pick, col;
        in >> on >> table >> pick >> col;
        const auto* tbl = reg.find_table(table);
        REQUIRE(tbl != nullptr);
        bool in_table = false;
        for (const auto& c : tbl->columns) in_table |= (c == col);
        CHECK(in_table);
    }
}

TEST_CASE("unscoped column draws come from the union of all columns") {
    Grammar g = select_grammar();  // column slot precedes the table slot
    DerivationTree t = single_node_tree();
    SchemaRegistry reg;
    reg.add_table("t0");
    reg.add_column("t0", "a0");
    reg.add_table("t1");
    reg.add_column("t1", "b0");
    bool saw_a = false, saw_b = false;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        std::string s = instantiate_seeded(g, t, reg, seed);
        if (s.find("a0") != std::string::npos) saw_a = true;
        if (s.find("b0") != std::string::npos) saw_b = true;
    }
    CHECK(saw_a);
    CHECK(saw_b);
}

TEST_CASE("int consts cover boundary values") {
    Grammar g = load_grammar("s: INT_CONST ;", "", "INT_CONST IntConst");
    DerivationTree t = single_node_tree();
    SchemaRegistry reg;
    bool saw_max = false, saw_min = false, saw_small = false;
    for (uint64_t seed = 0; seed < 400; ++seed) {
        std::string s = instantiate_seeded(g, t, reg, seed);
        if (s == "2147483647") saw_max = true;
        else if (s == "-2147483648") saw_min = true;
        else saw_small = true;
    }
    CHECK(saw_max);
    CHECK(saw_min);
    CHECK(saw_small);
}

TEST_CASE("string consts double embedded quotes and stay single tokens") {
    Grammar g = load_grammar("s: STRING_CONST ;", "", "STRING_CONST StringConst");
    DerivationTree t = single_node_tree();
    SchemaRegistry reg;
    test::ChartRecognizer rec(g);
    bool saw_doubled = false;
    for (uint64_t seed = 0; seed < 400; ++seed) {
        std::string s = instantiate_seeded(g, t, reg, seed);
        REQUIRE(s.size() >= 2);
        CHECK(s.front() == '\'');
        CHECK(s.back() == '\'');
        CHECK(s.find(' ') == std::string::npos);
        // Interior quotes always come in pairs.
        std::string interior = s.substr(1, s.size() - 2);
        for (size_t i = 0; i < interior.size(); ++i) {
            if (interior[i] == '\'') {
                REQUIRE(i + 1 < interior.size());
                CHECK(interior[i + 1] == '\'');
                ++i;
                saw_doubled = true;
            }
        }
        CHECK(rec.recognizes(s, 0));
    }
    CHECK(saw_doubled);
}

TEST_CASE("float consts have a fixed two-decimal lexical form") {
    Grammar g = load_grammar("s: FLOAT_CONST ;", "", "FLOAT_CONST FloatConst");
    DerivationTree t = single_node_tree();
    SchemaRegistry reg;
    test::ChartRecognizer rec(g);
    for (uint64_t seed = 0; seed < 50; ++seed) {
        std::string s = instantiate_seeded(g, t, reg, seed);
        CHECK(rec.recognizes(s, 0));
        CHECK(s.find('.') != std::string::npos);
    }
}

TEST_CASE("instantiated toy statements re-parse with lexical class matching") {
    Grammar g = test::toy_grammar();
    RuleClassification cls = classify(g);
    BanditTable bandit(g);
    EdgeCoverage edges(g);
    test::ChartRecognizer rec(g);
    Rng rng(11);
    SchemaRegistry reg;
    int start = g.find_rule("stmt");
    for (int i = 0; i < 200; ++i) {
        if (i % 28 == 0) reg.reset();
        DerivationTree t =
            generate_with_retries(g, cls, start, GenPolicy{}, bandit, edges, rng);
        std::string s = instantiate(g, t, reg, rng);
        INFO("statement: " << s);
        CHECK(rec.recognizes(s, start));
    }
}
