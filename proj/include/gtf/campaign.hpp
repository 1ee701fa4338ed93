#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gtf/bandit.hpp"
#include "gtf/derivation.hpp"
#include "gtf/generator.hpp"
#include "gtf/grammar.hpp"
#include "gtf/rng.hpp"
#include "gtf/rule_analysis.hpp"

namespace gtf {

// ---------------------------------------------------------------------------
// Sequence policy
// ---------------------------------------------------------------------------

struct SequencePhase {
    std::string type_tag;      // create_table / insert / create_index / random / select
    std::string start_symbol;  // nonterminal the slot generates from
    int count = 0;
};

struct SequencePolicy {
    std::vector<SequencePhase> phases;
    double mutation_probability = 0.5;

    // 3 CREATE TABLE, 3 INSERT, 2 CREATE INDEX, 10 random, 10 SELECT.
    static SequencePolicy standard();
    int total_statements() const;
};

struct StatementPlan {
    std::string type_tag;
    int start_rule = -1;
    bool mutate = false;
    size_t queue_id = 0;  // valid when mutate
};

// ---------------------------------------------------------------------------
// Fuzzing queue
// ---------------------------------------------------------------------------

struct QueueEntry {
    DerivationTree tree;  // value-free by construction
    std::string type_tag;
    int root_rule = -1;
    double discovered_elapsed_s = 0.0;
    uint64_t sequence_seed = 0;  // seed provenance
    int slot_index = -1;
};

// FIFO-evicting queue of interesting trees, indexed by root rule.
class FuzzQueue {
  public:
    explicit FuzzQueue(size_t cap = 4096) : cap_(cap) {}

    void push(QueueEntry entry);
    size_t size() const { return entries_.size() - front_; }
    bool empty() const { return size() == 0; }

    // Ids of live entries whose tree is rooted at `rule`.
    const std::vector<size_t>& ids_for(int rule) const;
    const QueueEntry& entry(size_t id) const { return entries_[id]; }

  private:
    void evict_front();

    std::vector<QueueEntry> entries_;
    size_t front_ = 0;
    size_t cap_;
    std::map<int, std::vector<size_t>> by_rule_;
    static const std::vector<size_t> kEmpty;
};

// Throws MissingStartSymbolError when a phase's nonterminal is absent. Each
// slot flips to mutation with the policy probability when a type-compatible
// queue entry exists.
std::vector<StatementPlan> build_sequence(const SequencePolicy& policy, const Grammar& grammar,
                                          const FuzzQueue& queue, Rng& rng);

// ---------------------------------------------------------------------------
// Campaign configuration and stats
// ---------------------------------------------------------------------------

struct CampaignConfig {
    // paths
    std::string grammar_path, tokens_path, placeholders_path, rule_config_path;
    std::string out_dir = "gtf-out";

    // fuzz
    uint64_t seed = 1;
    int workers = 1;
    double budget_seconds = 0;      // 0 = unbounded
    uint64_t budget_sequences = 0;  // 0 = unbounded
    size_t map_size = 262144;
    bool no_coverage = false;
    double stats_cadence_s = 5.0;
    size_t queue_cap = 4096;
    int statement_timeout_ms = 5000;

    // generation policy
    GenPolicy gen;
    SequencePolicy sequence = SequencePolicy::standard();

    // target: empty command = embedded toy target
    std::vector<std::string> target_command;

    std::string start_symbol;  // optional override for grammar entry

    static CampaignConfig from_toml(const std::string& text);
};

struct StatsRow {
    double elapsed_s = 0;
    uint64_t stmts = 0;
    double valid_pct = 0;
    size_t edges_covered = 0, edges_total = 0;
    size_t cov_tuples = 0;
    size_t crashes = 0, asserts = 0;

    std::string csv_line() const;
};

struct CampaignStats {
    std::vector<StatsRow> series;
    StatsRow final_row;
    uint64_t sequences = 0;
    size_t queue_size = 0;
    std::set<std::string> crash_keys;   // kind:detail:type_tag
    std::set<std::string> bug_details;  // distinct probe names / signals
    std::vector<std::string> poc_files;

    static const char* csv_header();
};

// Optional live-progress hooks; all methods may be called from worker threads.
struct CampaignObserver {
    virtual ~CampaignObserver() = default;
    // Return true to stop the campaign early.
    virtual bool on_stats(const StatsRow& merged, const std::set<std::string>& bug_details) {
        (void)merged;
        (void)bug_details;
        return false;
    }
};

// Runs the full loop: build -> instantiate -> execute -> feedback. The grammar
// must outlive the call; workers share it read-only. Stats CSV and PoC files
// land under config.out_dir.
CampaignStats run_campaign(const CampaignConfig& config, const Grammar& grammar,
                           CampaignObserver* observer = nullptr);

// Convenience: loads the grammar from config paths first.
CampaignStats run_campaign(const CampaignConfig& config, CampaignObserver* observer = nullptr);

// ---------------------------------------------------------------------------
// PoC files
// ---------------------------------------------------------------------------

struct PocFile {
    std::string tool_version;
    uint64_t grammar_hash = 0;
    std::string crash_key;  // kind:detail:type_tag
    uint64_t campaign_seed = 0;
    int worker = 0;
    uint64_t sequence_seed = 0;
    int crash_index = -1;  // 0-based statement index that crashed
    std::vector<std::string> statements;
};

void write_poc(const std::string& path, const PocFile& poc);
PocFile read_poc(const std::string& path);

std::string crash_key(bool asserted, const std::string& detail, const std::string& type_tag);

}  // namespace gtf
