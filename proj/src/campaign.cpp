#include "gtf/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gtf/config.hpp"
#include "gtf/error.hpp"
#include "gtf/grammar_loader.hpp"
#include "gtf/instantiator.hpp"
#include "gtf/mutator.hpp"
#include "gtf/target.hpp"

namespace gtf {

static const char* kToolVersion = "gtf 0.1.0";

// ---------------------------------------------------------------------------
// Sequence policy / queue
// ---------------------------------------------------------------------------

SequencePolicy SequencePolicy::standard() {
    SequencePolicy p;
    p.phases = {
        {"create_table", "create_table_stmt", 3}, {"insert", "insert_stmt", 3},
        {"create_index", "create_index_stmt", 2}, {"random", "stmt", 10},
        {"select", "select_stmt", 10},
    };
    return p;
}

int SequencePolicy::total_statements() const {
    int n = 0;
    for (const auto& ph : phases) n += ph.count;
    return n;
}

const std::vector<size_t> FuzzQueue::kEmpty;

void FuzzQueue::push(QueueEntry entry) {
    entries_.push_back(std::move(entry));
    by_rule_[entries_.back().root_rule].push_back(entries_.size() - 1);
    if (size() > cap_) evict_front();
}

void FuzzQueue::evict_front() {
    entries_[front_].tree.root.reset();
    auto& ids = by_rule_[entries_[front_].root_rule];
    ids.erase(std::remove(ids.begin(), ids.end(), front_), ids.end());
    ++front_;
}

const std::vector<size_t>& FuzzQueue::ids_for(int rule) const {
    auto it = by_rule_.find(rule);
    return it == by_rule_.end() ? kEmpty : it->second;
}

std::vector<StatementPlan> build_sequence(const SequencePolicy& policy, const Grammar& grammar,
                                          const FuzzQueue& queue, Rng& rng) {
    std::vector<StatementPlan> plans;
    for (const auto& phase : policy.phases) {
        int rule = grammar.find_rule(phase.start_symbol);
        if (rule < 0)
            throw MissingStartSymbolError("statement type '" + phase.type_tag +
                                          "' has no start nonterminal '" + phase.start_symbol +
                                          "' in the grammar");
        for (int i = 0; i < phase.count; ++i) {
            StatementPlan plan;
            plan.type_tag = phase.type_tag;
            plan.start_rule = rule;
            const auto& candidates = queue.ids_for(rule);
            if (!candidates.empty() && rng.chance(policy.mutation_probability)) {
                plan.mutate = true;
                plan.queue_id = candidates[rng.below(candidates.size())];
            }
            plans.push_back(std::move(plan));
        }
    }
    return plans;
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

CampaignConfig CampaignConfig::from_toml(const std::string& text) {
    TomlDoc doc = TomlDoc::parse(text);
    CampaignConfig c;
    c.grammar_path = doc.get_string("paths.grammar", "");
    c.tokens_path = doc.get_string("paths.tokens", "");
    c.placeholders_path = doc.get_string("paths.placeholders", "");
    c.rule_config_path = doc.get_string("paths.rule_config", "");
    c.out_dir = doc.get_string("paths.out_dir", c.out_dir);

    c.seed = static_cast<uint64_t>(doc.get_int("fuzz.seed", 1));
    c.workers = static_cast<int>(doc.get_int("fuzz.workers", 1));
    c.budget_seconds = doc.get_double("fuzz.budget_seconds", 0);
    c.budget_sequences = static_cast<uint64_t>(doc.get_int("fuzz.budget_sequences", 0));
    c.map_size = static_cast<size_t>(doc.get_int("fuzz.map_size", 262144));
    c.no_coverage = doc.get_bool("fuzz.no_coverage", false);
    c.stats_cadence_s = doc.get_double("fuzz.stats_cadence_s", 5.0);
    c.queue_cap = static_cast<size_t>(doc.get_int("fuzz.queue_cap", 4096));
    c.statement_timeout_ms = static_cast<int>(doc.get_int("fuzz.statement_timeout_ms", 5000));

    c.gen.epsilon = doc.get_double("policy.epsilon", 0.5);
    c.gen.depth_threshold = static_cast<int>(doc.get_int("policy.depth_threshold", 15));
    c.gen.hard_depth_cap = static_cast<int>(doc.get_int("policy.hard_depth_cap", 40));
    c.sequence.mutation_probability = doc.get_double("policy.mutation_probability", 0.5);
    for (auto& phase : c.sequence.phases) {
        phase.count = static_cast<int>(doc.get_int("policy." + phase.type_tag, phase.count));
        phase.start_symbol =
            doc.get_string("start_symbols." + phase.type_tag, phase.start_symbol);
    }

    c.start_symbol = doc.get_string("paths.start_symbol", "");

    std::string cmd = doc.get_string("target.command", "");
    if (!cmd.empty()) {
        std::istringstream in(cmd);
        std::string word;
        while (in >> word) c.target_command.push_back(word);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Stats / PoC plumbing
// ---------------------------------------------------------------------------

const char* CampaignStats::csv_header() {
    return "elapsed_s,stmts,valid_pct,edges_covered,edges_total,cov_tuples,crashes,asserts";
}

std::string StatsRow::csv_line() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.1f,%llu,%.2f,%zu,%zu,%zu,%zu,%zu", elapsed_s,
                  static_cast<unsigned long long>(stmts), valid_pct, edges_covered, edges_total,
                  cov_tuples, crashes, asserts);
    return buf;
}

std::string crash_key(bool asserted, const std::string& detail, const std::string& type_tag) {
    return std::string(asserted ? "assert" : "crash") + ":" + detail + ":" + type_tag;
}

void write_poc(const std::string& path, const PocFile& poc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write PoC file: " + path);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(poc.grammar_hash));
    out << "# gtf poc v1\n";
    out << "# tool: " << poc.tool_version << "\n";
    out << "# grammar_hash: " << hash << "\n";
    out << "# crash_key: " << poc.crash_key << "\n";
    out << "# campaign_seed: " << poc.campaign_seed << "\n";
    out << "# worker: " << poc.worker << "\n";
    out << "# sequence_seed: " << poc.sequence_seed << "\n";
    out << "# crash_index: " << poc.crash_index << "\n";
    out << "# statements: " << poc.statements.size() << "\n";
    for (const auto& s : poc.statements) out << s << "\n";
    out << ";;END\n";
}

PocFile read_poc(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read PoC file: " + path);
    PocFile poc;
    std::string line;
    bool saw_end = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# ", 0) == 0) {
            size_t colon = line.find(": ");
            if (colon == std::string::npos) continue;
            std::string key = line.substr(2, colon - 2);
            std::string value = line.substr(colon + 2);
            if (key == "tool") poc.tool_version = value;
            else if (key == "grammar_hash") poc.grammar_hash = std::stoull(value, nullptr, 16);
            else if (key == "crash_key") poc.crash_key = value;
            else if (key == "campaign_seed") poc.campaign_seed = std::stoull(value);
            else if (key == "worker") poc.worker = std::stoi(value);
            else if (key == "sequence_seed") poc.sequence_seed = std::stoull(value);
            else if (key == "crash_index") poc.crash_index = std::stoi(value);
            continue;
        }
        if (line == "# gtf poc v1") continue;
        if (line == ";;END") {
            saw_end = true;
            break;
        }
        if (!line.empty()) poc.statements.push_back(line);
    }
    if (!saw_end) throw ConfigError("PoC file is not ;;END-terminated: " + path);
    return poc;
}

// ---------------------------------------------------------------------------
// Campaign
// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

struct SharedCampaign {
    const CampaignConfig& config;
    const Grammar& grammar;
    const RuleClassification& classification;
    std::atomic<bool> stop{false};
    std::atomic<bool> aborted{false};
    std::string abort_reason;
    Clock::time_point start;

    std::mutex poc_mutex;
    std::set<std::string> poc_keys;
    std::vector<std::string> poc_files;
    int poc_counter = 0;
};

// Worker-owned state, with a snapshot the supervisor reads under a mutex.
struct WorkerState {
    std::unique_ptr<TargetAdapter> target;
    EdgeCoverage edges;
    VirginMap virgin;
    BanditTable bandit;
    FuzzQueue queue;
    SchemaRegistry registry;

    uint64_t stmts = 0, ok = 0, sem = 0, syn = 0, sequences = 0;

    std::mutex snap_mutex;
    struct Snapshot {
        uint64_t stmts = 0, ok = 0, sequences = 0;
        EdgeCoverage edges;
        VirginMap virgin;
        std::set<std::string> crash_keys;
        std::set<std::string> bug_details;
        size_t queue_size = 0;
        explicit Snapshot(const Grammar& g, size_t map_size) : edges(g), virgin(map_size) {}
    } snap;
    Clock::time_point last_snap{};
    std::set<std::string> crash_keys;
    std::set<std::string> bug_details;

    WorkerState(const Grammar& g, const CampaignConfig& cfg)
        : edges(g),
          virgin(cfg.map_size),
          bandit(g),
          queue(cfg.queue_cap),
          snap(g, cfg.map_size) {}

    void sync_snapshot(bool force) {
        auto now = Clock::now();
        if (!force && now - last_snap < std::chrono::milliseconds(250)) return;
        last_snap = now;
        std::lock_guard<std::mutex> lock(snap_mutex);
        snap.stmts = stmts;
        snap.ok = ok;
        snap.sequences = sequences;
        snap.edges = edges;
        snap.virgin = virgin;
        snap.crash_keys = crash_keys;
        snap.bug_details = bug_details;
        snap.queue_size = queue.size();
    }
};

std::unique_ptr<TargetAdapter> make_target(const CampaignConfig& cfg, int worker_id) {
    if (cfg.target_command.empty()) return std::make_unique<ToyTargetAdapter>(cfg.map_size);
    std::string map_path = cfg.out_dir + "/map-w" + std::to_string(worker_id) + ".bin";
    return std::make_unique<PipeTargetAdapter>(cfg.target_command, map_path, cfg.map_size,
                                               cfg.statement_timeout_ms);
}

void worker_loop_inner(SharedCampaign& shared, WorkerState& ws, int worker_id);

void worker_loop(SharedCampaign& shared, WorkerState& ws, int worker_id) {
    try {
        worker_loop_inner(shared, ws, worker_id);
    } catch (const std::exception& e) {
        shared.abort_reason = e.what();
        shared.aborted = true;
        shared.stop = true;
        ws.sync_snapshot(true);
    }
}

void worker_loop_inner(SharedCampaign& shared, WorkerState& ws, int worker_id) {
    const CampaignConfig& cfg = shared.config;
    const Grammar& grammar = shared.grammar;
    const RuleClassification& classification = shared.classification;
    uint64_t worker_seed = mix_seed(cfg.seed, static_cast<uint64_t>(worker_id) + 1);
    int unresponsive_streak = 0;

    for (uint64_t seq_index = 0;; ++seq_index) {
        if (shared.stop.load(std::memory_order_relaxed)) break;
        if (cfg.budget_sequences && ws.sequences >= cfg.budget_sequences / cfg.workers +
                                        (worker_id < int(cfg.budget_sequences % cfg.workers)))
            break;
        double elapsed =
            std::chrono::duration<double>(Clock::now() - shared.start).count();
        if (cfg.budget_seconds > 0 && elapsed >= cfg.budget_seconds) break;

        uint64_t seq_seed = mix_seed(worker_seed, seq_index);
        Rng rng(seq_seed);

        std::vector<StatementPlan> plans;
        std::vector<DerivationTree> trees;
        std::vector<std::string> statements;
        try {
            plans = build_sequence(cfg.sequence, grammar, ws.queue, rng);
            trees.reserve(plans.size());
            statements.reserve(plans.size());
            ws.registry.reset();
            for (const auto& plan : plans) {
                DerivationTree tree;
                if (plan.mutate) {
                    // Depth-cap failures fall back to fresh generation.
                    bool done = false;
                    for (int attempt = 0; attempt < 10 && !done; ++attempt) {
                        try {
                            tree = mutate(ws.queue.entry(plan.queue_id).tree, grammar,
                                          classification, cfg.gen, ws.bandit, ws.edges, rng)
                                       .tree;
                            done = true;
                        } catch (const DepthCapExceeded&) {
                        }
                    }
                    if (!done)
                        tree = generate_with_retries(grammar, classification, plan.start_rule,
                                                     cfg.gen, ws.bandit, ws.edges, rng);
                } else {
                    tree = generate_with_retries(grammar, classification, plan.start_rule,
                                                 cfg.gen, ws.bandit, ws.edges, rng);
                }
                statements.push_back(instantiate(grammar, tree, ws.registry, rng));
                trees.push_back(std::move(tree));
            }
        } catch (const GenerationStuck& e) {
            shared.abort_reason = e.what();
            shared.aborted = true;
            shared.stop = true;
            break;
        }

        std::vector<ExecOutcome> outcomes;
        try {
            outcomes = execute_sequence(*ws.target, statements, ws.virgin);
            unresponsive_streak = 0;
        } catch (const TargetUnresponsiveError& e) {
            if (++unresponsive_streak >= 3) {
                shared.abort_reason = e.what();
                shared.aborted = true;
                shared.stop = true;
                break;
            }
            ws.target = make_target(cfg, worker_id);  // restart and move on
            continue;
        }

        ++ws.sequences;
        for (size_t i = 0; i < outcomes.size(); ++i) {
            const ExecOutcome& out = outcomes[i];
            ++ws.stmts;
            switch (out.status) {
                case ExecStatus::Ok: ++ws.ok; break;
                case ExecStatus::SemanticError: ++ws.sem; break;
                case ExecStatus::SyntaxError: ++ws.syn; break;
            }
            if (!cfg.no_coverage && out.new_coverage) {
                QueueEntry entry;
                entry.tree = trees[i].clone();
                entry.type_tag = plans[i].type_tag;
                entry.root_rule = plans[i].start_rule;
                entry.discovered_elapsed_s =
                    std::chrono::duration<double>(Clock::now() - shared.start).count();
                entry.sequence_seed = seq_seed;
                entry.slot_index = static_cast<int>(i);
                ws.queue.push(std::move(entry));
            }
            if (!cfg.no_coverage)
                reward_rules(ws.bandit, grammar, trees[i], out.new_coverage);

            if (out.crashed || out.asserted) {
                std::string key = crash_key(out.asserted, out.crash_detail, plans[i].type_tag);
                ws.crash_keys.insert(key);
                ws.bug_details.insert(out.crash_detail);
                std::lock_guard<std::mutex> lock(shared.poc_mutex);
                if (shared.poc_keys.insert(key).second) {
                    PocFile poc;
                    poc.tool_version = kToolVersion;
                    poc.grammar_hash = grammar.hash();
                    poc.crash_key = key;
                    poc.campaign_seed = cfg.seed;
                    poc.worker = worker_id;
                    poc.sequence_seed = seq_seed;
                    poc.crash_index = static_cast<int>(i);
                    poc.statements.assign(statements.begin(),
                                          statements.begin() + i + 1);
                    std::string path = cfg.out_dir + "/pocs/poc-" +
                                       std::to_string(shared.poc_counter++) + ".txt";
                    write_poc(path, poc);
                    shared.poc_files.push_back(path);
                }
            }
        }
        ws.sync_snapshot(false);
    }
    ws.sync_snapshot(true);
}

StatsRow merge_snapshots(SharedCampaign& shared, std::vector<std::unique_ptr<WorkerState>>& workers,
                         CampaignStats& stats) {
    StatsRow row;
    row.elapsed_s = std::chrono::duration<double>(Clock::now() - shared.start).count();
    EdgeCoverage merged_edges(shared.grammar);
    VirginMap merged_virgin(shared.config.map_size);
    uint64_t ok = 0;
    stats.queue_size = 0;
    stats.sequences = 0;
    for (auto& w : workers) {
        std::lock_guard<std::mutex> lock(w->snap_mutex);
        row.stmts += w->snap.stmts;
        ok += w->snap.ok;
        stats.sequences += w->snap.sequences;
        merged_edges.merge_from(w->snap.edges);
        merged_virgin.merge_from(w->snap.virgin);
        for (const auto& k : w->snap.crash_keys) stats.crash_keys.insert(k);
        for (const auto& d : w->snap.bug_details) stats.bug_details.insert(d);
        stats.queue_size += w->snap.queue_size;
    }
    row.valid_pct = row.stmts == 0 ? 0.0 : 100.0 * double(ok) / double(row.stmts);
    row.edges_covered = merged_edges.covered_count();
    row.edges_total = merged_edges.total();
    row.cov_tuples = merged_virgin.tuple_count();
    for (const auto& k : stats.crash_keys) {
        if (k.rfind("assert:", 0) == 0) ++row.asserts;
        else ++row.crashes;
    }
    return row;
}

}  // namespace

CampaignStats run_campaign(const CampaignConfig& config, const Grammar& grammar,
                           CampaignObserver* observer) {
    if (config.workers < 1) throw ConfigError("workers must be >= 1");
    config.gen.validate();
    std::filesystem::create_directories(config.out_dir);
    std::filesystem::create_directories(config.out_dir + "/pocs");

    RuleClassification classification = classify(grammar);
    {
        // Resolve every phase start symbol up front so configuration mistakes
        // surface on the calling thread.
        Rng probe_rng(0);
        FuzzQueue empty_queue(1);
        build_sequence(config.sequence, grammar, empty_queue, probe_rng);
    }
    SharedCampaign shared{config, grammar, classification};
    shared.start = Clock::now();

    std::vector<std::unique_ptr<WorkerState>> workers;
    for (int w = 0; w < config.workers; ++w) {
        auto ws = std::make_unique<WorkerState>(grammar, config);
        ws->target = make_target(config, w);
        workers.push_back(std::move(ws));
    }

    std::vector<std::thread> threads;
    threads.reserve(config.workers);
    for (int w = 0; w < config.workers; ++w)
        threads.emplace_back(worker_loop, std::ref(shared), std::ref(*workers[w]), w);

    CampaignStats stats;
    std::ofstream csv(config.out_dir + "/stats.csv", std::ios::binary);
    csv << CampaignStats::csv_header() << "\n";

    // Supervisor: merge worker snapshots at the stats cadence until all
    // workers finish.
    std::atomic<int> running{config.workers};
    std::thread joiner([&] {
        for (auto& t : threads) {
            t.join();
            --running;
        }
    });

    auto next_tick = Clock::now();
    while (running.load() > 0) {
        next_tick += std::chrono::duration_cast<Clock::duration>(
            std::chrono::duration<double>(std::max(0.05, config.stats_cadence_s)));
        while (Clock::now() < next_tick && running.load() > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        CampaignStats scratch;
        StatsRow row = merge_snapshots(shared, workers, scratch);
        stats.crash_keys = scratch.crash_keys;
        stats.bug_details = scratch.bug_details;
        csv << row.csv_line() << "\n";
        csv.flush();
        stats.series.push_back(row);
        if (observer && observer->on_stats(row, scratch.bug_details)) shared.stop = true;
    }
    joiner.join();

    CampaignStats final_scratch;
    StatsRow final_row = merge_snapshots(shared, workers, final_scratch);
    stats.crash_keys = final_scratch.crash_keys;
    stats.bug_details = final_scratch.bug_details;
    stats.sequences = final_scratch.sequences;
    stats.queue_size = final_scratch.queue_size;
    csv << final_row.csv_line() << "\n";
    stats.series.push_back(final_row);
    stats.final_row = final_row;
    {
        std::lock_guard<std::mutex> lock(shared.poc_mutex);
        stats.poc_files = shared.poc_files;
    }

    if (shared.aborted)
        throw TargetUnresponsiveError("campaign aborted: " + shared.abort_reason);
    return stats;
}

CampaignStats run_campaign(const CampaignConfig& config, CampaignObserver* observer) {
    IngestConfig ic;
    ic.start_symbol = config.start_symbol;
    Grammar grammar = load_grammar_files(config.grammar_path, config.tokens_path,
                                         config.placeholders_path, config.rule_config_path, ic);
    return run_campaign(config, grammar, observer);
}

}  // namespace gtf
