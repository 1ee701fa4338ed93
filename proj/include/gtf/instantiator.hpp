#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtf/derivation.hpp"
#include "gtf/grammar.hpp"
#include "gtf/rng.hpp"

namespace gtf {

// Tracks objects created by earlier statements in the current sequence so
// Existing* draws can reference them. Monotonic per-prefix counters mint
// t<N>/c<N>/i<N>; minted names never collide with anything already issued,
// registered or not.
class SchemaRegistry {
  public:
    struct Table {
        std::string name;
        std::vector<std::string> columns;
    };

    const std::vector<Table>& tables() const { return tables_; }
    const std::vector<std::string>& indexes() const { return indexes_; }

    std::string mint_table() { return "t" + std::to_string(table_counter_++); }
    std::string mint_column() { return "c" + std::to_string(column_counter_++); }
    std::string mint_index() { return "i" + std::to_string(index_counter_++); }

    void add_table(const std::string& name) { tables_.push_back(Table{name, {}}); }
    void add_column(const std::string& table, const std::string& column);
    void add_index(const std::string& name) { indexes_.push_back(name); }

    const Table* find_table(const std::string& name) const;
    std::vector<std::string> all_columns() const;

    void reset() {
        tables_.clear();
        indexes_.clear();
        table_counter_ = column_counter_ = index_counter_ = 0;
    }

  private:
    std::vector<Table> tables_;
    std::vector<std::string> indexes_;
    uint64_t table_counter_ = 0;
    uint64_t column_counter_ = 0;
    uint64_t index_counter_ = 0;
};

inline SchemaRegistry reset_registry() { return SchemaRegistry{}; }

// Constant pools; defaults per the boundary-value policy (degenerate constants
// are productive bug triggers).
struct InstantiateOptions {
    std::vector<int64_t> int_boundaries{-1, 0, 1, 2147483647LL, -2147483648LL};
    int64_t small_int_range = 100;  // uniform in [-range, range]
    int max_string_len = 8;
    double string_quote_chance = 0.125;  // chance of embedding a quote to exercise doubling
};

// Fills every placeholder leaf with a concrete value, updating the registry as
// New* names are minted. Deterministic given the rng state and registry
// contents. Never fails: Existing* draws on an empty registry mint fresh
// unregistered names so the statement stays syntactically valid.
std::string instantiate(const Grammar& grammar, const DerivationTree& tree,
                        SchemaRegistry& registry, Rng& rng,
                        const InstantiateOptions& options = {});

inline std::string instantiate_seeded(const Grammar& grammar, const DerivationTree& tree,
                                      SchemaRegistry& registry, uint64_t seed,
                                      const InstantiateOptions& options = {}) {
    Rng rng(seed);
    return instantiate(grammar, tree, registry, rng, options);
}

}  // namespace gtf
