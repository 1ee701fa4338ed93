#include "gtf/cli.hpp"

#include <cstdio>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "gtf/campaign.hpp"
#include "gtf/error.hpp"
#include "gtf/grammar_loader.hpp"
#include "gtf/instantiator.hpp"
#include "gtf/rule_analysis.hpp"
#include "gtf/target.hpp"

namespace gtf {

namespace {

struct TomlOverrides {
    std::optional<uint64_t> seed;
    std::optional<double> budget_seconds;
    std::optional<uint64_t> budget_sequences;
    std::optional<bool> no_coverage;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
};

struct GrammarArgs {
    std::string grammar, tokens, placeholders, rule_config, start;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--grammar", grammar, "grammar definition file")->required();
        cmd->add_option("--tokens", tokens, "token map file (TERMINAL<TAB>surface)")->required();
        cmd->add_option("--placeholders", placeholders, "placeholder declaration file");
        cmd->add_option("--rule-config", rule_config, "manual label / exclusion config");
        cmd->add_option("--start", start, "start symbol (default: first rule)");
    }

    Grammar load() const {
        IngestConfig cfg;
        cfg.start_symbol = start;
        return load_grammar_files(grammar, tokens, placeholders, rule_config, cfg);
    }
};

int cmd_analyze(const GrammarArgs& args) {
    Grammar g = args.load();
    RuleClassification cls = classify(g);

    std::printf("nonterminal,index,label,gdepth,recursive\n");
    size_t excluded = 0;
    for (int r = 0; r < g.rule_count(); ++r) {
        for (const auto& alt : g.rule(r).alternatives) {
            if (alt.excluded) ++excluded;
            const auto& info = cls.info(r, alt.index);
            std::string depth =
                info.gdepth == kInfiniteDepth ? "inf" : std::to_string(info.gdepth);
            std::printf("%s,%d,%s,%s,%d\n", g.rule(r).name.c_str(), alt.index,
                        rule_label_name(info.label), depth.c_str(), info.recursive ? 1 : 0);
        }
    }

    auto edges = enumerate_edges(g);
    std::fprintf(stderr, "rules: %d\n", g.rule_count());
    std::fprintf(stderr, "alternatives: %d (%zu excluded)\n", g.total_alternatives(), excluded);
    std::fprintf(stderr, "grammar edges: %zu\n", edges.size());
    std::fprintf(stderr, "cycles through:");
    for (int r : cls.cyclic_rules()) std::fprintf(stderr, " %s", g.rule(r).name.c_str());
    std::fprintf(stderr, "\n");
    return 0;
}

int cmd_generate(const GrammarArgs& args, uint64_t seed, int count, const GenPolicy& policy) {
    Grammar g = args.load();
    RuleClassification cls = classify(g);
    int start = args.start.empty() ? g.start_rule() : g.find_rule(args.start);
    if (start < 0) throw UnresolvedSymbolError("unknown start symbol '" + args.start + "'");

    BanditTable bandit(g);
    EdgeCoverage edges(g);
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        DerivationTree tree =
            generate_with_retries(g, cls, start, policy, bandit, edges, rng);
        SchemaRegistry registry;  // each statement instantiates against an empty registry
        std::string stmt = instantiate(g, tree, registry, rng);
        std::printf("%s\n", stmt.c_str());
    }
    return 0;
}

struct ReplayArgs {
    std::string poc_path;
    std::vector<std::string> target_cmd;
    size_t map_size = kDefaultMapSize;
};

int cmd_replay(const ReplayArgs& args) {
    PocFile poc = read_poc(args.poc_path);

    std::unique_ptr<TargetAdapter> target;
    if (args.target_cmd.empty()) {
        target = std::make_unique<ToyTargetAdapter>(args.map_size);
    } else {
        target = std::make_unique<PipeTargetAdapter>(args.target_cmd, args.poc_path + ".map",
                                                     args.map_size);
    }

    VirginMap virgin(args.map_size);
    std::vector<ExecOutcome> outcomes = execute_sequence(*target, poc.statements, virgin);

    std::string observed = "none";
    int observed_index = -1;
    if (!outcomes.empty() && (outcomes.back().crashed || outcomes.back().asserted)) {
        observed_index = static_cast<int>(outcomes.size()) - 1;
        // Reuse the recorded statement-type tag when the crash lands on the
        // recorded statement; the key is positional otherwise.
        std::string tag = "?";
        size_t last_colon = poc.crash_key.rfind(':');
        if (last_colon != std::string::npos) tag = poc.crash_key.substr(last_colon + 1);
        observed = crash_key(outcomes.back().asserted, outcomes.back().crash_detail,
                             observed_index == poc.crash_index ? tag : "?");
    }

    bool match = observed == poc.crash_key && observed_index == poc.crash_index;
    std::printf("%s\n", match ? "MATCH" : "MISMATCH");
    std::printf("recorded: %s (statement %d)\n", poc.crash_key.c_str(), poc.crash_index);
    std::printf("observed: %s (statement %d)\n", observed.c_str(), observed_index);
    return match ? 0 : 4;
}

int cmd_fuzz_impl(const std::string& config_path, const TomlOverrides& ov) {
    CampaignConfig cfg = CampaignConfig::from_toml(read_file(config_path));
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.budget_seconds) cfg.budget_seconds = *ov.budget_seconds;
    if (ov.budget_sequences) cfg.budget_sequences = *ov.budget_sequences;
    if (ov.no_coverage) cfg.no_coverage = *ov.no_coverage;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.workers) cfg.workers = *ov.workers;

    try {
        CampaignStats stats = run_campaign(cfg);
        std::printf("sequences: %llu\n", static_cast<unsigned long long>(stats.sequences));
        std::printf("statements: %llu\n",
                    static_cast<unsigned long long>(stats.final_row.stmts));
        std::printf("validity: %.2f%%\n", stats.final_row.valid_pct);
        std::printf("edges: %zu/%zu\n", stats.final_row.edges_covered,
                    stats.final_row.edges_total);
        std::printf("coverage tuples: %zu\n", stats.final_row.cov_tuples);
        std::printf("crash keys: %zu (%zu crashes, %zu asserts)\n", stats.crash_keys.size(),
                    stats.final_row.crashes, stats.final_row.asserts);
        for (const auto& p : stats.poc_files) std::printf("poc: %s\n", p.c_str());
        std::printf("stats: %s/stats.csv\n", cfg.out_dir.c_str());
        return 0;
    } catch (const TargetUnresponsiveError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"grammar-traversal coverage-guided fuzzer"};
    app.require_subcommand(1);

    GrammarArgs analyze_args;
    CLI::App* analyze = app.add_subcommand("analyze", "classify rules and enumerate edges");
    analyze_args.add_to(analyze);

    GrammarArgs gen_args;
    uint64_t gen_seed = 1;
    int gen_count = 10;
    GenPolicy gen_policy;
    CLI::App* generate = app.add_subcommand("generate", "emit random statements");
    gen_args.add_to(generate);
    generate->add_option("--seed", gen_seed, "rng seed");
    generate->add_option("--count", gen_count, "number of statements");
    generate->add_option("--depth-threshold", gen_policy.depth_threshold,
                         "depth where rule prioritization kicks in");
    generate->add_option("--hard-depth-cap", gen_policy.hard_depth_cap, "absolute depth cap");
    generate->add_option("--epsilon", gen_policy.epsilon, "bandit exploitation probability");

    std::string fuzz_config;
    TomlOverrides ov;
    uint64_t ov_seed = 0;
    double ov_budget_s = -1;
    int64_t ov_budget_n = -1;
    bool ov_nocov = false;
    std::string ov_out;
    int ov_workers = 0;
    CLI::App* fuzz = app.add_subcommand("fuzz", "run a fuzzing campaign");
    fuzz->add_option("--config", fuzz_config, "campaign config (TOML)")->required();
    CLI::Option* o_seed = fuzz->add_option("--seed", ov_seed, "override campaign seed");
    CLI::Option* o_bs = fuzz->add_option("--budget-seconds", ov_budget_s, "override time budget");
    CLI::Option* o_bn =
        fuzz->add_option("--budget-sequences", ov_budget_n, "override sequence budget");
    CLI::Option* o_nc =
        fuzz->add_flag("--no-coverage", ov_nocov, "discard coverage feedback (ablation mode)");
    CLI::Option* o_out = fuzz->add_option("--out", ov_out, "override output directory");
    CLI::Option* o_w = fuzz->add_option("--workers", ov_workers, "override worker count");

    ReplayArgs replay_args;
    CLI::App* replay = app.add_subcommand("replay", "replay a PoC and check its crash key");
    replay->add_option("poc", replay_args.poc_path, "PoC file")->required();
    replay->add_option("--target-cmd", replay_args.target_cmd,
                       "external target command (default: embedded toy target)");
    replay->add_option("--map-size", replay_args.map_size, "coverage map size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_args);
        if (*generate) return cmd_generate(gen_args, gen_seed, gen_count, gen_policy);
        if (*fuzz) {
            if (*o_seed) ov.seed = ov_seed;
            if (*o_bs) ov.budget_seconds = ov_budget_s;
            if (*o_bn) ov.budget_sequences = static_cast<uint64_t>(ov_budget_n);
            if (*o_nc) ov.no_coverage = ov_nocov;
            if (*o_out) ov.out_dir = ov_out;
            if (*o_w) ov.workers = ov_workers;
            return cmd_fuzz_impl(fuzz_config, ov);
        }
        if (*replay) return cmd_replay(replay_args);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}

}  // namespace gtf
