#include "ssg/suqr.hpp"

#include <cmath>
#include <stdexcept>

namespace ssg {

namespace {

// log(1 + sum_i e^{h_i}), the partition term of the fixed-reference softmax.
double log1p_sum_exp(const std::vector<double>& h) {
    double m = 0.0;
    for (double hi : h) m = std::max(m, hi);
    double s = std::exp(-m);
    for (double hi : h) s += std::exp(hi - m);
    return m + std::log(s);
}

}  // namespace

std::vector<double> GeneralizedSuqrModel::exponents(const MixedStrategy& x) const {
    const int t = num_targets();
    if (x.num_targets() != t)
        throw std::invalid_argument("GeneralizedSuqrModel: strategy dimension mismatch");
    std::vector<double> h(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        h[i] = w1 * (x[i] - x[t - 1]) + c[i];
    return h;
}

AttackDistribution GeneralizedSuqrModel::predict(const MixedStrategy& x) const {
    return softmax_from_exponents(exponents(x));
}

AttackDistribution StandardSuqrModel::predict(const SecurityGame& game,
                                              const MixedStrategy& x) const {
    if (!game.has_features())
        throw std::invalid_argument("StandardSuqrModel: game lacks rewards or penalties");
    if (x.num_targets() != game.num_targets)
        throw std::invalid_argument("StandardSuqrModel: strategy dimension mismatch");
    std::vector<double> e(game.num_targets);
    for (int i = 0; i < game.num_targets; ++i)
        e[i] = w1 * x[i] + w2 * game.rewards[i] + w3 * game.penalties[i];
    return softmax_full(e);
}

optim::ObjectiveFn gsuqr_objective(const AttackDataset& data) {
    if (data.size() == 0) throw std::invalid_argument("gsuqr: empty dataset");
    const int t = data.num_targets;
    auto totals = data.anchor_totals();
    return [&data, totals, t](const std::vector<double>& params,
                              std::vector<double>* grad) -> double {
        const double w1 = params[0];
        double ll = 0.0;
        if (grad) grad->assign(params.size(), 0.0);
        std::vector<double> h(t - 1);
        for (int j = 0; j < data.num_anchors(); ++j) {
            const MixedStrategy& x = data.anchors[j];
            for (int i = 0; i < t - 1; ++i)
                h[i] = w1 * (x[i] - x[t - 1]) + params[1 + i];
            double lse = log1p_sum_exp(h);
            for (int i = 0; i < t - 1; ++i) ll += data.counts[j][i] * h[i];
            ll -= totals[j] * lse;
            if (grad) {
                for (int i = 0; i < t - 1; ++i) {
                    double q = std::exp(h[i] - lse);
                    double resid = data.counts[j][i] - totals[j] * q;
                    (*grad)[1 + i] += resid;
                    (*grad)[0] += resid * (x[i] - x[t - 1]);
                }
            }
        }
        return ll;
    };
}

GeneralizedSuqrModel gsuqr_fit(const AttackDataset& data, double big_m,
                               const optim::SolverConfig& config) {
    if (data.size() == 0) throw std::invalid_argument("gsuqr_fit: empty dataset");
    if (big_m <= 0) throw std::invalid_argument("gsuqr_fit: M must be positive");
    const int t = data.num_targets;
    const double radius = big_m / 2.0;

    // Feasible set: for every i, |w1| + |c_i| <= M/2. Each constraint is a
    // 2-D l1 ball in the (w1, c_i) plane; the intersection is handled by
    // Dykstra over the per-pair projections.
    auto project = [t, radius, &config](std::vector<double>& p) {
        bool ok = true;
        for (int i = 0; i < t - 1; ++i)
            if (std::fabs(p[0]) + std::fabs(p[1 + i]) > radius) ok = false;
        if (ok) return;
        std::vector<std::function<void(std::vector<double>&)>> sets;
        for (int i = 0; i < t - 1; ++i)
            sets.push_back([i, radius](std::vector<double>& v) {
                auto [a, b] = optim::project_l1_ball_2d(v[0], v[1 + i], radius);
                v[0] = a;
                v[1 + i] = b;
            });
        optim::dykstra(p, sets, config.projection_tol, config.projection_max_cycles);
    };

    auto objective = gsuqr_objective(data);
    std::vector<double> init(t, 0.0);
    auto res = optim::projected_gradient_ascent(objective, project, init, config);
    if (!res.converged)
        throw optim::NonConvergenceError(
            "gsuqr_fit: no convergence after iteration cap (residual " +
                std::to_string(res.grad_residual) + ")",
            res.x, res.grad_residual);
    GeneralizedSuqrModel model;
    model.w1 = res.x[0];
    model.c.assign(res.x.begin() + 1, res.x.end());
    model.big_m = big_m;
    return model;
}

optim::ObjectiveFn ssuqr_objective(const AttackDataset& data, const SecurityGame& game,
                                   double ridge) {
    if (data.size() == 0) throw std::invalid_argument("ssuqr: empty dataset");
    if (!game.has_features())
        throw std::invalid_argument("ssuqr: game lacks rewards or penalties");
    if (game.num_targets != data.num_targets)
        throw std::invalid_argument("ssuqr: dataset does not match the game");
    const int t = data.num_targets;
    auto totals = data.anchor_totals();
    return [&data, &game, totals, t, ridge](const std::vector<double>& w,
                                            std::vector<double>* grad) -> double {
        double ll = 0.0;
        if (grad) grad->assign(3, 0.0);
        std::vector<double> e(t);
        for (int j = 0; j < data.num_anchors(); ++j) {
            const MixedStrategy& x = data.anchors[j];
            double m = -1e300;
            for (int i = 0; i < t; ++i) {
                e[i] = w[0] * x[i] + w[1] * game.rewards[i] + w[2] * game.penalties[i];
                m = std::max(m, e[i]);
            }
            double denom = 0.0;
            for (int i = 0; i < t; ++i) denom += std::exp(e[i] - m);
            double lse = m + std::log(denom);
            for (int i = 0; i < t; ++i) {
                ll += data.counts[j][i] * (e[i] - lse);
                if (grad) {
                    double q = std::exp(e[i] - lse);
                    double resid = data.counts[j][i] - totals[j] * q;
                    (*grad)[0] += resid * x[i];
                    (*grad)[1] += resid * game.rewards[i];
                    (*grad)[2] += resid * game.penalties[i];
                }
            }
        }
        for (int k = 0; k < 3; ++k) {
            ll -= ridge * w[k] * w[k];
            if (grad) (*grad)[k] -= 2.0 * ridge * w[k];
        }
        return ll;
    };
}

StandardSuqrModel ssuqr_fit(const AttackDataset& data, const SecurityGame& game,
                            const optim::SolverConfig& config) {
    auto objective = ssuqr_objective(data, game);
    auto project = [](std::vector<double>&) {};
    auto res = optim::projected_gradient_ascent(objective, project, {0.0, 0.0, 0.0}, config);
    if (!res.converged)
        throw optim::NonConvergenceError(
            "ssuqr_fit: no convergence after iteration cap (residual " +
                std::to_string(res.grad_residual) + ")",
            res.x, res.grad_residual);
    return StandardSuqrModel{res.x[0], res.x[1], res.x[2]};
}

double log_likelihood(const QFn& model, const AttackDataset& data) {
    if (data.size() == 0) throw std::invalid_argument("log_likelihood: empty dataset");
    double ll = 0.0;
    for (int j = 0; j < data.num_anchors(); ++j) {
        AttackDistribution q = model(data.anchors[j]);
        for (int i = 0; i < data.num_targets; ++i)
            if (data.counts[j][i] > 0) ll += data.counts[j][i] * std::log(q[i]);
    }
    return ll;
}

double log_likelihood(const GeneralizedSuqrModel& model, const AttackDataset& data) {
    return log_likelihood([&model](const MixedStrategy& x) { return model.predict(x); }, data);
}

double log_likelihood(const StandardSuqrModel& model, const SecurityGame& game,
                      const AttackDataset& data) {
    return log_likelihood(
        [&model, &game](const MixedStrategy& x) { return model.predict(game, x); }, data);
}

double empirical_risk(const QFn& model, const AttackDataset& data) {
    return -log_likelihood(model, data) / static_cast<double>(data.size());
}

}  // namespace ssg
