#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gtf/coverage.hpp"
#include "gtf/toy_db.hpp"

namespace gtf {

// Deterministic spread of logical probe ids over the coverage map; shared by
// the in-process harness and the external toy target binary so their maps are
// byte-identical for the same statements.
uint32_t toy_probe_slot(uint32_t probe_id, size_t map_size);

struct StatementResult {
    ExecStatus status = ExecStatus::Ok;
    bool crashed = false;
    bool asserted = false;
    std::string crash_detail;  // toy probe name, or signal name for external targets
    // Per-statement coverage snapshot: slots touched by this statement with
    // their final counts. The target zeroes its map before each statement.
    std::vector<std::pair<uint32_t, uint8_t>> snapshot;
};

class TargetAdapter {
  public:
    virtual ~TargetAdapter() = default;
    virtual StatementResult run_statement(const std::string& statement) = 0;
    // Ends the current query sequence: database contents are dropped; crashed
    // external targets are respawned.
    virtual void end_sequence() = 0;
    virtual size_t map_size() const = 0;
};

// Hosts the toy database in-process. One instance per worker.
class ToyTargetAdapter : public TargetAdapter {
  public:
    explicit ToyTargetAdapter(size_t map_size = kDefaultMapSize);

    StatementResult run_statement(const std::string& statement) override;
    void end_sequence() override;
    size_t map_size() const override { return map_.size(); }

    // The raw per-statement map, for protocol and attribution tests.
    const CoverageMap& last_map() const { return map_; }

  private:
    struct Sink;
    ToyDatabase db_;
    CoverageMap map_;
    std::vector<uint32_t> touched_;
};

// Spawns an external target speaking the wire protocol: statements on stdin
// one per line, `;;END` closes a sequence, one `OK|SEM_ERR|SYN_ERR` status
// line per statement on stdout, coverage rewritten to the GTF_MAP_PATH file
// after every statement. Process exit before the status line is a crash.
class PipeTargetAdapter : public TargetAdapter {
  public:
    PipeTargetAdapter(std::vector<std::string> argv, std::string map_path,
                      size_t map_size = kDefaultMapSize, int timeout_ms = 5000);
    ~PipeTargetAdapter() override;

    StatementResult run_statement(const std::string& statement) override;
    void end_sequence() override;
    size_t map_size() const override { return map_size_; }

    // Full-map view of the last statement, for byte-exact protocol tests.
    const CoverageMap& last_map() const { return last_map_; }

  private:
    void spawn();
    void kill_child();
    // Reads one status line; empty result means the child died first.
    std::string read_status_line();

    std::vector<std::string> argv_;
    std::string map_path_;
    size_t map_size_;
    int timeout_ms_;
    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    CoverageMap last_map_;
};

struct ExecOutcome {
    ExecStatus status = ExecStatus::Ok;
    bool new_coverage = false;
    bool crashed = false;
    bool asserted = false;
    std::string crash_detail;
    std::vector<std::pair<uint32_t, uint8_t>> snapshot;
};

// Runs the statements in order, folding each per-statement snapshot into
// virgin to decide new_coverage. A crash truncates the sequence: the returned
// prefix ends with the crashing statement's outcome. The target's database
// state is reset afterwards either way.
std::vector<ExecOutcome> execute_sequence(TargetAdapter& target,
                                          const std::vector<std::string>& statements,
                                          VirginMap& virgin);

}  // namespace gtf
