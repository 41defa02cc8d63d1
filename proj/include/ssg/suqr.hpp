#pragma once

#include <functional>
#include <vector>

#include "ssg/game.hpp"
#include "ssg/optim.hpp"

namespace ssg {

// Generalized SUQR: attack exponent h_i(x) = w1 (x_i - x_{T-1}) + c_i for
// i < T-1, reference target T-1. Fitted under |w1| + |c_i| <= M/2, which
// keeps every h_i inside [-M/2, M/2] over the strategy space.
struct GeneralizedSuqrModel {
    double w1 = 0.0;
    std::vector<double> c;  // size T-1
    double big_m = 20.0;

    int num_targets() const { return static_cast<int>(c.size()) + 1; }
    std::vector<double> exponents(const MixedStrategy& x) const;
    AttackDistribution predict(const MixedStrategy& x) const;
};

// Standard SUQR: exponent w1 x_i + w2 R_i + w3 P_i, normalized over all T
// targets. Needs a game with rewards and penalties.
struct StandardSuqrModel {
    double w1 = 0.0;
    double w2 = 0.0;
    double w3 = 0.0;

    AttackDistribution predict(const SecurityGame& game, const MixedStrategy& x) const;
};

GeneralizedSuqrModel gsuqr_fit(const AttackDataset& data, double big_m = 20.0,
                               const optim::SolverConfig& config = {});

// Unbounded parameters with an L2 ridge of 1e-8 so that separable datasets
// stay finite.
StandardSuqrModel ssuqr_fit(const AttackDataset& data, const SecurityGame& game,
                            const optim::SolverConfig& config = {});

using QFn = std::function<AttackDistribution(const MixedStrategy&)>;

// sum_j sum_i n_{j,i} log q_i(x^j) over the aggregated view.
double log_likelihood(const QFn& model, const AttackDataset& data);
double log_likelihood(const GeneralizedSuqrModel& model, const AttackDataset& data);
double log_likelihood(const StandardSuqrModel& model, const SecurityGame& game,
                      const AttackDataset& data);

// Empirical risk of the loss: -LL / m.
double empirical_risk(const QFn& model, const AttackDataset& data);

// Objective/gradient callbacks for the two likelihoods, exposed for the
// gradient checks. Parameter layout: gsuqr (w1, c_1..c_{T-1}); ssuqr
// (w1, w2, w3).
optim::ObjectiveFn gsuqr_objective(const AttackDataset& data);
optim::ObjectiveFn ssuqr_objective(const AttackDataset& data, const SecurityGame& game,
                                   double ridge = 1e-8);

}  // namespace ssg
