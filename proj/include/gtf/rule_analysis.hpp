#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gtf/grammar.hpp"

namespace gtf {

enum class RuleLabel { Simple, Normal, Complex };

const char* rule_label_name(RuleLabel label);

constexpr int kInfiniteDepth = -1;

struct AlternativeInfo {
    RuleLabel label = RuleLabel::Normal;
    int gdepth = kInfiniteDepth;  // kInfiniteDepth encodes no guaranteed bound
    bool recursive = false;
};

// Per-alternative labels indexed by Grammar::alternative_id, plus per-rule
// worst-case depth.
class RuleClassification {
  public:
    const AlternativeInfo& info(int rule, int alt) const { return alts_[base_[rule] + alt]; }
    const AlternativeInfo& info_by_id(int id) const { return alts_[id]; }
    int rule_gdepth(int rule) const { return rule_gdepth_[rule]; }
    // Rules on a reference-graph cycle, in rule-index order. Drives the
    // `analyze` cycle report.
    const std::vector<int>& cyclic_rules() const { return cyclic_rules_; }

  private:
    friend RuleClassification classify(const Grammar&);
    std::vector<AlternativeInfo> alts_;
    std::vector<int> base_;
    std::vector<int> rule_gdepth_;
    std::vector<int> cyclic_rules_;
};

RuleClassification classify(const Grammar& grammar);

struct GrammarEdge {
    int parent;  // rule index
    int child;   // rule index
    auto operator<=>(const GrammarEdge&) const = default;
};

std::set<GrammarEdge> enumerate_edges(const Grammar& grammar);

// Covered edges grow monotonically within one campaign worker.
class EdgeCoverage {
  public:
    explicit EdgeCoverage(const Grammar& grammar);

    // Idempotent; throws UnknownEdgeError for edges outside the static set.
    void record(GrammarEdge edge);
    // Hot-path variant for the generator: parent/child pairs it produces are
    // static by construction, so no membership check.
    void record_unchecked(int parent, int child) {
        auto it = slot_.find(key(parent, child));
        if (it != slot_.end() && !covered_[it->second]) {
            covered_[it->second] = true;
            ++covered_count_;
        }
    }

    size_t total() const { return total_; }
    size_t covered_count() const { return covered_count_; }
    double ratio() const { return total_ == 0 ? 1.0 : double(covered_count_) / double(total_); }
    std::set<GrammarEdge> covered() const;

    void merge_from(const EdgeCoverage& other);

  private:
    static uint64_t key(int parent, int child) {
        return (static_cast<uint64_t>(static_cast<uint32_t>(parent)) << 32) |
               static_cast<uint32_t>(child);
    }
    std::vector<GrammarEdge> edges_;  // sorted static set
    std::unordered_map<uint64_t, size_t> slot_;
    std::vector<bool> covered_;
    size_t total_ = 0;
    size_t covered_count_ = 0;
};

}  // namespace gtf
