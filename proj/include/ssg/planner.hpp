#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ssg/game.hpp"
#include "ssg/suqr.hpp"

namespace ssg {

struct PlanResult {
    MixedStrategy x;
    double utility = 0.0;
    std::vector<double> start_values;  // best value reached from each start
    int best_start = 0;
};

// Maximizes x^T U q^h(x) over the capped simplex by multi-start projected
// gradient ascent with central-difference gradients (the objective is only
// piecewise smooth for NPL models). Start 0 is the uniform K/T point, the
// rest are uniform feasible samples. For T <= 4 the best point is polished
// by hill-climbing on the 1e-3 grid. Deterministic given the seed, for any
// job count.
PlanResult plan_strategy(const SecurityGame& game, const QFn& model, int num_starts,
                         std::uint64_t seed, int jobs = 1);

struct RiskDelta {
    double delta = 0.0;     // (alpha + eps_star)^{1/3}
    double l1_bound = 0.0;  // sqrt(2) * delta
};
RiskDelta delta_from_risk(double alpha, double eps_star);

// Inputs of the utility lower bound. k_p is the Lipschitz constant of the
// true response q^p, distinct from the game's resource count; eps is the
// ball radius of the density assumptions; none of these are estimated from
// data here, they are supplied by the caller.
struct UtilityBoundInputs {
    double opt_utility = 0.0;
    double eps = 0.0;
    double k_p = 0.0;
    double khat = 0.0;
    double alpha = 0.0;
    double eps_star = 0.0;
};

// opt - (K_p + 1) eps - 2 sqrt(2) Delta - 6 Khat eps.
double utility_lower_bound(const UtilityBoundInputs& in);

struct PinskerCheck {
    double kl = 0.0;
    double half_l1_sq = 0.0;
    bool holds = false;
};

// Computes KL(q_p || q_h) and (1/2) ||q_p - q_h||_1^2 and whether the
// inequality holds. A zero in q_h under positive q_p mass yields infinite
// KL with holds = true.
PinskerCheck empirical_pinsker_check(const AttackDistribution& q_p, const AttackDistribution& q_h);

}  // namespace ssg
