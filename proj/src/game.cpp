#include "ssg/game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace ssg {

void SecurityGame::validate() const {
    if (num_targets < 2) throw std::invalid_argument("SecurityGame: need at least 2 targets");
    if (num_resources < 1 || num_resources >= num_targets)
        throw std::invalid_argument("SecurityGame: resources must satisfy 1 <= K < T");
    if (payoff.size() != static_cast<std::size_t>(num_targets) * num_targets)
        throw std::invalid_argument("SecurityGame: payoff matrix must be T x T");
    if (!rewards.empty()) {
        if (rewards.size() != static_cast<std::size_t>(num_targets))
            throw std::invalid_argument("SecurityGame: rewards must have one entry per target");
        if (r_max <= 0) throw std::invalid_argument("SecurityGame: r_max must be positive");
        for (double r : rewards)
            if (r < 0 || r > r_max)
                throw std::invalid_argument("SecurityGame: rewards must lie in [0, r_max]");
    }
    if (!penalties.empty()) {
        if (penalties.size() != static_cast<std::size_t>(num_targets))
            throw std::invalid_argument("SecurityGame: penalties must have one entry per target");
        if (p_min >= 0) throw std::invalid_argument("SecurityGame: p_min must be negative");
        for (double p : penalties)
            if (p > 0 || p < p_min)
                throw std::invalid_argument("SecurityGame: penalties must lie in [p_min, 0]");
    }
}

void SecurityGame::validate_strategy(const MixedStrategy& x) const {
    if (x.num_targets() != num_targets)
        throw std::invalid_argument("MixedStrategy: dimension does not match the game");
    double total = 0.0;
    for (double xi : x.coverage) {
        if (!(xi >= -1e-12 && xi <= 1.0 + 1e-12))
            throw std::invalid_argument("MixedStrategy: coverage must lie in [0, 1]");
        total += xi;
    }
    if (total > num_resources + 1e-9)
        throw std::invalid_argument("MixedStrategy: total coverage exceeds the resource count");
}

void AttackDistribution::validate() const {
    double total = 0.0;
    for (double qi : q) {
        if (!(qi >= 0.0) || !std::isfinite(qi))
            throw std::invalid_argument("AttackDistribution: probabilities must be nonnegative");
        total += qi;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("AttackDistribution: probabilities must sum to 1");
}

std::vector<double> AttackDataset::anchor_totals() const {
    std::vector<double> totals(anchors.size(), 0.0);
    for (std::size_t j = 0; j < anchors.size(); ++j)
        for (double c : counts[j]) totals[j] += c;
    return totals;
}

AttackDataset dedupe_dataset(std::vector<AttackRecord> records) {
    AttackDataset data;
    if (records.empty()) return data;

    data.num_targets = records.front().strategy.num_targets();
    if (data.num_targets < 2)
        throw std::invalid_argument("dedupe_dataset: strategies need at least 2 targets");

    std::map<std::vector<double>, int> index;
    data.record_anchor.reserve(records.size());
    for (const AttackRecord& rec : records) {
        if (rec.strategy.num_targets() != data.num_targets)
            throw std::invalid_argument("dedupe_dataset: inconsistent strategy dimensions");
        if (rec.target < 0 || rec.target >= data.num_targets)
            throw std::invalid_argument("dedupe_dataset: target index out of range");
        auto [it, inserted] =
            index.try_emplace(rec.strategy.coverage, static_cast<int>(data.anchors.size()));
        if (inserted) {
            data.anchors.push_back(rec.strategy);
            data.counts.emplace_back(data.num_targets, 0.0);
        }
        data.counts[it->second][rec.target] += 1.0;
        data.record_anchor.push_back(it->second);
    }
    data.records = std::move(records);
    return data;
}

AttackDataset subset_by_anchors(const AttackDataset& data, const std::vector<int>& anchor_ids) {
    std::vector<char> keep(data.anchors.size(), 0);
    for (int id : anchor_ids) {
        if (id < 0 || id >= data.num_anchors())
            throw std::invalid_argument("subset_by_anchors: anchor index out of range");
        keep[id] = 1;
    }
    std::vector<AttackRecord> records;
    for (std::size_t r = 0; r < data.records.size(); ++r)
        if (keep[data.record_anchor[r]]) records.push_back(data.records[r]);
    return dedupe_dataset(std::move(records));
}

AttackDistribution softmax_from_exponents(const std::vector<double>& h) {
    for (double hi : h)
        if (!std::isfinite(hi))
            throw std::invalid_argument("softmax_from_exponents: exponents must be finite");
    double m = 0.0;  // the reference exponent is 0
    for (double hi : h) m = std::max(m, hi);
    double denom = std::exp(-m);
    std::vector<double> q(h.size() + 1);
    for (std::size_t i = 0; i < h.size(); ++i) {
        q[i] = std::exp(h[i] - m);
        denom += q[i];
    }
    for (std::size_t i = 0; i < h.size(); ++i) q[i] /= denom;
    q[h.size()] = std::exp(-m) / denom;
    return AttackDistribution(std::move(q));
}

AttackDistribution softmax_full(const std::vector<double>& exponents) {
    if (exponents.empty())
        throw std::invalid_argument("softmax_full: need at least one exponent");
    for (double e : exponents)
        if (!std::isfinite(e)) throw std::invalid_argument("softmax_full: exponents must be finite");
    double m = *std::max_element(exponents.begin(), exponents.end());
    std::vector<double> q(exponents.size());
    double denom = 0.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        q[i] = std::exp(exponents[i] - m);
        denom += q[i];
    }
    for (double& qi : q) qi /= denom;
    return AttackDistribution(std::move(q));
}

double defender_utility(const SecurityGame& game, const MixedStrategy& x,
                        const AttackDistribution& q) {
    if (x.num_targets() != game.num_targets || q.num_targets() != game.num_targets)
        throw std::invalid_argument("defender_utility: dimension mismatch");
    double total = 0.0;
    for (int i = 0; i < game.num_targets; ++i) {
        double row = 0.0;
        for (int j = 0; j < game.num_targets; ++j) row += game.payoff_at(i, j) * q[j];
        total += x[i] * row;
    }
    return total;
}

double l1_distance(const MixedStrategy& a, const MixedStrategy& b) {
    if (a.num_targets() != b.num_targets())
        throw std::invalid_argument("l1_distance: dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.coverage.size(); ++i)
        d += std::fabs(a.coverage[i] - b.coverage[i]);
    return d;
}

}  // namespace ssg
