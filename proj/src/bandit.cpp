#include "gtf/bandit.hpp"

#include "gtf/error.hpp"

namespace gtf {

int select_arm(const BanditTable& bandit, const std::vector<int>& candidates, double epsilon,
               Rng& rng) {
    if (candidates.empty()) throw EmptyCandidatesError("select_arm with no candidates");
    if (candidates.size() == 1) {
        // Consume no randomness; keeps single-choice expansion cheap and the
        // stream identical whether or not the choice was forced.
        return candidates[0];
    }
    if (rng.unit() < epsilon) {
        double best = -1.0;
        int tie_count = 0;
        int chosen = candidates[0];
        for (int arm : candidates) {
            double m = bandit.mean(arm);
            if (m > best) {
                best = m;
                tie_count = 1;
                chosen = arm;
            } else if (m == best) {
                // Reservoir-style uniform pick among ties.
                ++tie_count;
                if (rng.below(tie_count) == 0) chosen = arm;
            }
        }
        return chosen;
    }
    return candidates[rng.below(candidates.size())];
}

void reward_rules(BanditTable& bandit, const Grammar& grammar, const DerivationTree& tree,
                  bool got_new_coverage) {
    for (int arm : committed_arms(grammar, tree)) bandit.record(arm, got_new_coverage);
}

}  // namespace gtf
