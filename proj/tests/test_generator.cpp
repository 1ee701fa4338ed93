#include <doctest.h>

#include <set>

#include "gtf/error.hpp"
#include "gtf/generator.hpp"
#include "support/fixtures.hpp"
#include "support/recognizer.hpp"

using namespace gtf;

namespace {

struct GenHarness {
    Grammar grammar;
    RuleClassification cls;
    BanditTable bandit;
    EdgeCoverage edges;

    explicit GenHarness(Grammar g)
        : grammar(std::move(g)), cls(classify(grammar)), bandit(grammar), edges(grammar) {}

    DerivationTree gen(int start, uint64_t seed, GenPolicy policy = {}) {
        Rng rng(seed);
        return generate(grammar, cls, start, policy, bandit, edges, rng);
    }
};

}  // namespace

TEST_CASE("listing grammar alternative 0 renders as SELECT <StringConst>") {
    GenHarness h(test::listing_grammar());
    int start = h.grammar.find_rule("simple_select");
    // Find a seed committing alternative 0 at the root; assert its shape.
    bool found = false;
    for (uint64_t seed = 0; seed < 64 && !found; ++seed) {
        DerivationTree t = h.gen(start, seed);
        if (t.root->alternative == 0) {
            CHECK(render(h.grammar, t) == "SELECT <StringConst>");
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("single-derivation grammar always yields the same tree") {
    GenHarness h(load_grammar("s: 'a' ;", ""));
    for (uint64_t seed : {1ull, 7ull, 12345ull}) {
        DerivationTree t = h.gen(0, seed);
        CHECK(render(h.grammar, t) == "a");
        CHECK(node_count(t) == 1);
    }
}

TEST_CASE("self-recursive grammar always terminates under prioritization") {
    GenHarness h(test::recursive_grammar());
    GenPolicy policy;
    policy.depth_threshold = 3;
    int start = h.grammar.find_rule("a_expr");
    for (uint64_t seed = 0; seed < 1000; ++seed) {
        DerivationTree t = h.gen(start, seed, policy);
        check_complete(h.grammar, t);
        auto depths = node_depths(t);
        for (int d : depths) CHECK(d < policy.hard_depth_cap);
    }
}

TEST_CASE("generation is deterministic given the seed and bandit snapshot") {
    GenHarness a(test::toy_grammar());
    GenHarness b(test::toy_grammar());
    int start = a.grammar.find_rule("select_stmt");
    for (uint64_t seed = 100; seed < 110; ++seed) {
        DerivationTree ta = a.gen(start, seed);
        DerivationTree tb = b.gen(start, seed);
        CHECK(render(a.grammar, ta) == render(b.grammar, tb));
    }
}

TEST_CASE("every alternative reachable within the threshold is eventually hit") {
    // 10-rule grammar, all alternatives shallow.
    const char* src = R"(
s: a b | c d ;
a: 'a1' | 'a2' ;
b: 'b1' | 'b2' c ;
c: 'c1' | 'c2' ;
d: 'd1' | e ;
e: 'e1' | f g ;
f: 'f1' ;
g: 'g1' | 'g2' ;
)";
    GenHarness h(load_grammar(src, ""));
    GenPolicy policy;
    policy.epsilon = 0.5;
    std::set<std::pair<int, int>> committed;
    Rng rng(777);
    for (int i = 0; i < 5000; ++i) {
        DerivationTree t = generate(h.grammar, h.cls, 0, policy, h.bandit, h.edges, rng);
        std::vector<const DerivationNode*> stack{t.root.get()};
        while (!stack.empty()) {
            const DerivationNode* n = stack.back();
            stack.pop_back();
            committed.insert({n->nonterminal, n->alternative});
            for (const auto& c : n->children) stack.push_back(c.get());
        }
    }
    int total_alts = h.grammar.total_alternatives();
    CHECK(int(committed.size()) == total_alts);
}

TEST_CASE("generation records traversed edges") {
    GenHarness h(test::prioritization_grammar());
    Rng rng(5);
    for (int i = 0; i < 200; ++i)
        generate(h.grammar, h.cls, 0, GenPolicy{}, h.bandit, h.edges, rng);
    // Statistically every edge is traversed within 200 trees.
    CHECK(h.edges.covered_count() == h.edges.total());
}

TEST_CASE("depth cap exceeded surfaces and retries can rescue it") {
    // Only complex alternatives below the cap: b has no terminal-only out.
    const char* src = "s: 'x' | b ;\nb: b 'y' | s ;";
    GenHarness h(load_grammar(src, ""));
    GenPolicy policy;
    policy.depth_threshold = 2;
    policy.hard_depth_cap = 6;
    int caught = 0, ok = 0;
    for (uint64_t seed = 0; seed < 300; ++seed) {
        try {
            h.gen(0, seed, policy);
            ++ok;
        } catch (const DepthCapExceeded&) {
            ++caught;
        }
    }
    CHECK(caught > 0);  // the pathological path exists
    CHECK(ok > 0);      // and so does the escape

    Rng rng(1);
    DerivationTree t = generate_with_retries(h.grammar, h.cls, 0, policy, h.bandit, h.edges, rng);
    check_complete(h.grammar, t);
}

TEST_CASE("generation stuck after ten consecutive failures") {
    // Force failure: a grammar whose only expansion grows forever.
    Grammar g = load_grammar("s: 'a' | t ;\nt: t 'x' | t 'y' ;", "", "", IngestConfig{"s"});
    GenHarness h(std::move(g));
    GenPolicy policy;
    policy.depth_threshold = 2;
    policy.hard_depth_cap = 5;
    int start = h.grammar.find_rule("t");
    Rng rng(3);
    CHECK_THROWS_AS(
        generate_with_retries(h.grammar, h.cls, start, policy, h.bandit, h.edges, rng),
        GenerationStuck);
}

TEST_CASE("render emits slot markers, spaces and epsilon as empty") {
    GenHarness h(test::listing_grammar_full());
    int start = h.grammar.find_rule("simple_select");
    bool saw_full = false;
    for (uint64_t seed = 0; seed < 200 && !saw_full; ++seed) {
        DerivationTree t = h.gen(start, seed);
        if (t.root->alternative != 1) continue;
        std::string s = render(h.grammar, t);
        // target_list -> target_elem exactly once gives the paper's shape.
        if (s == "SELECT DISTINCT <ExistingColumn> FROM <ExistingTable>") saw_full = true;
    }
    CHECK(saw_full);

    Grammar eps = load_grammar("s: ;", "");
    GenHarness he(std::move(eps));
    DerivationTree t = he.gen(0, 1);
    CHECK(render(he.grammar, t) == "");
}

TEST_CASE("literal commas render between slots") {
    GenHarness h(test::listing_grammar_full());
    int tl = h.grammar.find_rule("target_list");
    // Build by hand: target_list -> target_list ',' target_elem, committing
    // the recursive alternative exactly once.
    auto inner = std::make_unique<DerivationNode>();
    inner->nonterminal = tl;
    inner->alternative = 0;
    auto root = std::make_unique<DerivationNode>();
    root->nonterminal = tl;
    root->alternative = 1;
    root->children.push_back(std::move(inner));
    DerivationTree t{std::move(root)};
    check_complete(h.grammar, t);
    CHECK(render(h.grammar, t) == "<ExistingColumn> , <ExistingColumn>");
}

TEST_CASE("rendered output re-parses under the chart recognizer") {
    GenHarness h(test::toy_grammar());
    test::ChartRecognizer rec(h.grammar);
    int start = h.grammar.find_rule("stmt");
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        DerivationTree t =
            generate_with_retries(h.grammar, h.cls, start, GenPolicy{}, h.bandit, h.edges, rng);
        std::string s = render(h.grammar, t);
        INFO("statement: " << s);
        CHECK(rec.recognizes(s, start));
    }
}

TEST_CASE("excluded alternatives are never committed") {
    Grammar g = test::toy_grammar();
    apply_rule_config(g, "exclude stmt[4]\nexclude stmt[5]\n");
    GenHarness h(std::move(g));
    Rng rng(31);
    int start = h.grammar.find_rule("stmt");
    for (int i = 0; i < 500; ++i) {
        DerivationTree t =
            generate_with_retries(h.grammar, h.cls, start, GenPolicy{}, h.bandit, h.edges, rng);
        CHECK(t.root->alternative != 4);
        CHECK(t.root->alternative != 5);
    }
}
