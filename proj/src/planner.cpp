#include "ssg/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssg/optim.hpp"
#include "ssg/parallel.hpp"
#include "ssg/rng.hpp"

namespace ssg {

namespace {

constexpr double kGridStep = 1e-3;

MixedStrategy sample_feasible(Rng& rng, int t, int k) {
    // Rejection from the cube; for thin feasible regions fall back to a
    // scaled flat Dirichlet draw, which always lands inside.
    for (int attempt = 0; attempt < 200000; ++attempt) {
        std::vector<double> x(t);
        double total = 0.0;
        for (int i = 0; i < t; ++i) {
            x[i] = rng.uniform();
            total += x[i];
        }
        if (total <= k) return MixedStrategy(std::move(x));
    }
    std::vector<double> e(t + 1);
    double total = 0.0;
    for (int i = 0; i <= t; ++i) {
        e[i] = rng.exponential();
        total += e[i];
    }
    std::vector<double> x(t);
    for (int i = 0; i < t; ++i) x[i] = std::min(1.0, k * e[i] / total);
    return MixedStrategy(std::move(x));
}

// Snaps onto the kGridStep lattice without leaving the feasible set.
std::vector<double> snap_to_grid(std::vector<double> x, int k) {
    double total = 0.0;
    for (double& xi : x) {
        xi = std::min(1.0, std::max(0.0, std::round(xi / kGridStep) * kGridStep));
        total += xi;
    }
    if (total > k + 1e-12) {
        x = optim::project_capped_simplex(x, k);
        for (double& xi : x) xi = std::floor(xi / kGridStep + 1e-9) * kGridStep;
    }
    return x;
}

}  // namespace

PlanResult plan_strategy(const SecurityGame& game, const QFn& model, int num_starts,
                         std::uint64_t seed, int jobs) {
    game.validate();
    if (num_starts < 1) throw std::invalid_argument("plan_strategy: need at least one start");
    const int t = game.num_targets;
    const int k = game.num_resources;

    auto value = [&](const std::vector<double>& x) {
        MixedStrategy s{x};
        return defender_utility(game, s, model(s));
    };
    auto objective = [&](const std::vector<double>& x, std::vector<double>* grad) {
        if (grad) {
            const double h = 1e-6;
            grad->assign(x.size(), 0.0);
            std::vector<double> p = x;
            for (std::size_t i = 0; i < x.size(); ++i) {
                p[i] = x[i] + h;
                double fp = value(p);
                p[i] = x[i] - h;
                double fm = value(p);
                p[i] = x[i];
                (*grad)[i] = (fp - fm) / (2.0 * h);
            }
        }
        return value(x);
    };
    auto project = [k](std::vector<double>& x) { x = optim::project_capped_simplex(x, k); };

    optim::SolverConfig config;
    config.max_iters = 2000;
    config.grad_tol = 1e-9;

    std::vector<std::vector<double>> solutions(num_starts);
    std::vector<double> values(num_starts);
    par::for_each_index(static_cast<std::size_t>(num_starts), jobs, [&](std::size_t idx) {
        std::vector<double> init;
        if (idx == 0) {
            init.assign(t, static_cast<double>(k) / t);
        } else {
            Rng rng = Rng::child(seed, idx);
            init = sample_feasible(rng, t, k).coverage;
        }
        auto res = optim::projected_gradient_ascent(objective, project, init, config);
        solutions[idx] = std::move(res.x);
        values[idx] = res.value;
    });

    int best = 0;
    for (int i = 1; i < num_starts; ++i)
        if (values[i] > values[best]) best = i;

    std::vector<double> x = solutions[best];
    double fx = values[best];

    if (t <= 4) {
        // Local polish on the 1e-3 lattice: single-coordinate moves plus
        // swaps, which matter on the sum-constraint face.
        std::vector<double> g = snap_to_grid(x, k);
        double fg = value(g);
        for (int moves = 0; moves < 100000; ++moves) {
            double best_gain = 0.0;
            std::vector<double> best_point;
            auto consider = [&](std::vector<double> cand) {
                for (double c : cand)
                    if (c < -1e-12 || c > 1.0 + 1e-12) return;
                double total = 0.0;
                for (double c : cand) total += c;
                if (total > k + 1e-9) return;
                double fc = value(cand);
                if (fc - fg > best_gain) {
                    best_gain = fc - fg;
                    best_point = std::move(cand);
                }
            };
            for (int i = 0; i < t; ++i) {
                for (double dir : {kGridStep, -kGridStep}) {
                    std::vector<double> cand = g;
                    cand[i] += dir;
                    consider(std::move(cand));
                }
                for (int j = 0; j < t; ++j) {
                    if (i == j) continue;
                    std::vector<double> cand = g;
                    cand[i] += kGridStep;
                    cand[j] -= kGridStep;
                    consider(std::move(cand));
                }
            }
            if (best_point.empty()) break;
            g = std::move(best_point);
            fg += best_gain;
        }
        if (fg > fx) {
            x = std::move(g);
            fx = fg;
        }
    }

    PlanResult result;
    result.x = MixedStrategy(std::move(x));
    result.utility = fx;
    result.start_values = std::move(values);
    result.best_start = best;
    return result;
}

RiskDelta delta_from_risk(double alpha, double eps_star) {
    double sum = alpha + eps_star;
    if (sum < 0) throw std::invalid_argument("delta_from_risk: alpha + eps_star must be >= 0");
    RiskDelta d;
    d.delta = std::cbrt(sum);
    d.l1_bound = std::sqrt(2.0) * d.delta;
    return d;
}

double utility_lower_bound(const UtilityBoundInputs& in) {
    RiskDelta d = delta_from_risk(in.alpha, in.eps_star);
    return in.opt_utility - (in.k_p + 1.0) * in.eps - 2.0 * std::sqrt(2.0) * d.delta -
           6.0 * in.khat * in.eps;
}

PinskerCheck empirical_pinsker_check(const AttackDistribution& q_p,
                                     const AttackDistribution& q_h) {
    q_p.validate();
    q_h.validate();
    if (q_p.num_targets() != q_h.num_targets())
        throw std::invalid_argument("empirical_pinsker_check: dimension mismatch");
    PinskerCheck out;
    double l1 = 0.0;
    for (int i = 0; i < q_p.num_targets(); ++i) {
        l1 += std::fabs(q_p[i] - q_h[i]);
        if (q_p[i] > 0.0) {
            if (q_h[i] <= 0.0)
                out.kl = std::numeric_limits<double>::infinity();
            else
                out.kl += q_p[i] * std::log(q_p[i] / q_h[i]);
        }
    }
    out.half_l1_sq = 0.5 * l1 * l1;
    out.holds = out.half_l1_sq <= out.kl + 1e-12;
    return out;
}

}  // namespace ssg
