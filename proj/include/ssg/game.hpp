#pragma once

#include <cstddef>
#include <vector>

namespace ssg {

// Defender coverage probabilities over targets: x_i in [0,1], sum x_i <= K.
struct MixedStrategy {
    std::vector<double> coverage;

    MixedStrategy() = default;
    explicit MixedStrategy(std::vector<double> x) : coverage(std::move(x)) {}

    int num_targets() const { return static_cast<int>(coverage.size()); }
    double operator[](std::size_t i) const { return coverage[i]; }
};

// Security game instance. The payoff matrix U defines the defender's
// expected utility x^T U q against an attack distribution q. Rewards and
// penalties are optional per-target features used by standard SUQR; r_max
// and p_min bound them when present.
struct SecurityGame {
    int num_targets = 0;
    int num_resources = 0;
    std::vector<double> payoff;     // row-major T x T
    std::vector<double> rewards;    // empty when absent, else size T
    std::vector<double> penalties;  // empty when absent, else size T
    double r_max = 1.0;
    double p_min = -1.0;

    bool has_features() const { return !rewards.empty() && !penalties.empty(); }
    double payoff_at(int row, int col) const {
        return payoff[static_cast<std::size_t>(row) * num_targets + col];
    }
    void validate() const;
    void validate_strategy(const MixedStrategy& x) const;
};

struct AttackRecord {
    MixedStrategy strategy;
    int target = 0;  // 0-indexed
};

// Categorical attack distribution over the targets.
struct AttackDistribution {
    std::vector<double> q;

    AttackDistribution() = default;
    explicit AttackDistribution(std::vector<double> probs) : q(std::move(probs)) {}

    int num_targets() const { return static_cast<int>(q.size()); }
    double operator[](std::size_t i) const { return q[i]; }
    void validate() const;  // q_i >= 0 and |sum - 1| <= 1e-12
};

// Raw attack records plus the aggregated per-unique-strategy view used by
// every fitting routine: `anchors` holds the s distinct strategies (first
// occurrence order), counts[j][i] the attacks on target i under anchor j.
struct AttackDataset {
    std::vector<AttackRecord> records;
    std::vector<MixedStrategy> anchors;
    std::vector<std::vector<double>> counts;
    std::vector<int> record_anchor;  // records[r] belongs to anchors[record_anchor[r]]
    int num_targets = 0;

    std::size_t size() const { return records.size(); }
    int num_anchors() const { return static_cast<int>(anchors.size()); }
    std::vector<double> anchor_totals() const;
};

// Builds the aggregated view. Strategies merge only under exact
// componentwise equality; record order is preserved.
AttackDataset dedupe_dataset(std::vector<AttackRecord> records);

// Restriction of a dataset to the records of the given anchor indices.
AttackDataset subset_by_anchors(const AttackDataset& data, const std::vector<int>& anchor_ids);

// q_i = e^{h_i} / (1 + sum_j e^{h_j}) for i < T, with the reference target
// T-1 carrying exponent 0. Computed with max-subtraction. `h` has T-1 entries.
AttackDistribution softmax_from_exponents(const std::vector<double>& h);

// Softmax over all T exponents (no fixed reference target).
AttackDistribution softmax_full(const std::vector<double>& exponents);

// x^T U q, the defender's expected utility.
double defender_utility(const SecurityGame& game, const MixedStrategy& x,
                        const AttackDistribution& q);

double l1_distance(const MixedStrategy& a, const MixedStrategy& b);

}  // namespace ssg
