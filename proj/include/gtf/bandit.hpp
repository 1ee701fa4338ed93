#pragma once

#include <cstdint>
#include <vector>

#include "gtf/derivation.hpp"
#include "gtf/grammar.hpp"
#include "gtf/rng.hpp"

namespace gtf {

// Per-arm statistics for (nonterminal, alternative) commitment, indexed by
// Grammar::alternative_id. Unplayed arms read as mean 0.
class BanditTable {
  public:
    explicit BanditTable(const Grammar& grammar)
        : trials_(grammar.total_alternatives(), 0), rewards_(grammar.total_alternatives(), 0) {}

    uint64_t trials(int arm) const { return trials_[arm]; }
    uint64_t reward_sum(int arm) const { return rewards_[arm]; }
    double mean(int arm) const {
        return trials_[arm] == 0 ? 0.0 : double(rewards_[arm]) / double(trials_[arm]);
    }
    uint64_t total_rewards() const {
        uint64_t sum = 0;
        for (auto r : rewards_) sum += r;
        return sum;
    }

    void record(int arm, bool rewarded) {
        ++trials_[arm];
        if (rewarded) ++rewards_[arm];
    }

  private:
    std::vector<uint64_t> trials_;
    std::vector<uint64_t> rewards_;
};

// ε-greedy: with probability epsilon pick an argmax of mean reward (uniform
// among ties), otherwise uniform over all candidates. Candidates are arm ids;
// returns one of them. Throws EmptyCandidatesError.
int select_arm(const BanditTable& bandit, const std::vector<int>& candidates, double epsilon,
               Rng& rng);

// Every arm committed anywhere in the tree gains one trial (once per distinct
// arm), plus one reward when the tree produced new coverage.
void reward_rules(BanditTable& bandit, const Grammar& grammar, const DerivationTree& tree,
                  bool got_new_coverage);

}  // namespace gtf
