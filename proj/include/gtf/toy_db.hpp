#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace gtf {

enum class ExecStatus { Ok, SemanticError, SyntaxError };

// Receives synthetic branch probe hits during statement execution.
struct ProbeSink {
    virtual ~ProbeSink() = default;
    virtual void hit(uint32_t probe_id) = 0;
};

struct ToyOutcome {
    ExecStatus status = ExecStatus::Ok;
    bool crashed = false;         // planted segfault-style bug fired
    bool assert_failed = false;   // planted assertion fired
    uint32_t bug_probe = 0;       // which planted bug, when crashed/assert_failed
    const char* bug_name = "";    // stable short name for crash keys
};

// An in-process mini-SQL interpreter over the shipped toy grammar: CREATE
// TABLE / CREATE INDEX / INSERT / SELECT with joins, WHERE, GROUP BY, ORDER
// BY, LIMIT / UPDATE / DELETE / DROP. Instrumented with synthetic branch
// probes keyed by statement type, feature flags and operator kinds, plus
// three planted bugs. The interpreter never actually faults; a fired bug is
// reported through the outcome so the in-process harness survives, and the
// external wrapper turns it into a real signal.
class ToyDatabase {
  public:
    ToyDatabase();
    ~ToyDatabase();
    ToyDatabase(ToyDatabase&&) noexcept;
    ToyDatabase& operator=(ToyDatabase&&) noexcept;

    ToyOutcome execute(const std::string& statement, ProbeSink& probes);

    // Drops all tables and indexes; run between query sequences.
    void reset();

    size_t table_count() const;

    // Planted bug probe ids. Two crashes reachable only through rare feature
    // combinations, one assertion failure.
    static constexpr uint32_t kBugMixedIndex = 9001;   // crash: plain+expression key parts in one temp-table index
    static constexpr uint32_t kBugJoinCombo = 9002;    // crash: OUTER+USING+COLLATE+CAST+DESC in one SELECT
    static constexpr uint32_t kBugIntMinFloat = 9003;  // assert: INT32_MIN inserted into a FLOAT column

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace gtf
