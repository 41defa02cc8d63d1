#include "ssg/npl.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ssg/parallel.hpp"
#include "ssg/rng.hpp"
#include "ssg/suqr.hpp"

namespace ssg {

namespace {

std::vector<std::vector<double>> pairwise_l1(const std::vector<MixedStrategy>& anchors) {
    const std::size_t s = anchors.size();
    std::vector<std::vector<double>> d(s, std::vector<double>(s, 0.0));
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t k = j + 1; k < s; ++k)
            d[j][k] = d[k][j] = l1_distance(anchors[j], anchors[k]);
    return d;
}

// Dykstra over the box plus a working set of band constraints, with raw
// loops; this is the hot path of the anchor fit.
void dykstra_bands(std::vector<double>& row, const std::vector<std::vector<double>>& bounds,
                   const std::vector<std::pair<int, int>>& bands, double radius, double tol,
                   std::size_t max_cycles) {
    const std::size_t s = row.size();
    std::vector<double> box_inc(s, 0.0);
    std::vector<std::pair<double, double>> band_inc(bands.size(), {0.0, 0.0});
    for (std::size_t cycle = 0; cycle < max_cycles; ++cycle) {
        double change = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            double y = row[i] + box_inc[i];
            double z = std::min(radius, std::max(-radius, y));
            double inc = y - z;
            change = std::max(change, std::fabs(inc - box_inc[i]));
            change = std::max(change, std::fabs(z - row[i]));
            box_inc[i] = inc;
            row[i] = z;
        }
        for (std::size_t b = 0; b < bands.size(); ++b) {
            auto [j, k] = bands[b];
            double yj = row[j] + band_inc[b].first;
            double yk = row[k] + band_inc[b].second;
            double zj = yj, zk = yk;
            double gap = yj - yk;
            double c = bounds[j][k];
            if (std::fabs(gap) > c) {
                double shift = (std::fabs(gap) - c) / 2.0;
                double sign = gap > 0 ? 1.0 : -1.0;
                zj = yj - sign * shift;
                zk = yk + sign * shift;
            }
            double ij = yj - zj, ik = yk - zk;
            change = std::max(change, std::fabs(ij - band_inc[b].first));
            change = std::max(change, std::fabs(ik - band_inc[b].second));
            change = std::max(change, std::fabs(zj - row[j]));
            change = std::max(change, std::fabs(zk - row[k]));
            band_inc[b] = {ij, ik};
            row[j] = zj;
            row[k] = zk;
        }
        if (change <= tol) break;
    }
}

// Projects one component row onto {|h_j - h_{j'}| <= bound_{jj'}} cap box.
// Most bands are slack, so the projection runs over a working set: Dykstra
// over the currently violated bands, then a full feasibility check; any
// newly violated band joins the set and the projection restarts from the
// input point. The final point is feasible for every constraint and optimal
// for a superset problem, hence the exact projection.
void project_row(std::vector<double>& row, const std::vector<std::vector<double>>& bounds,
                 double radius, double tol, std::size_t max_cycles) {
    const std::size_t s = row.size();
    std::vector<std::pair<int, int>> working;
    std::vector<char> in_working(s * s, 0);
    const std::vector<double> input = row;
    for (int round = 0; round < 64; ++round) {
        bool feasible = true;
        bool grew = false;
        for (std::size_t j = 0; j < s; ++j) {
            if (std::fabs(row[j]) > radius + tol) feasible = false;
            for (std::size_t k = j + 1; k < s; ++k) {
                if (std::fabs(row[j] - row[k]) > bounds[j][k] + tol &&
                    !in_working[j * s + k]) {
                    in_working[j * s + k] = 1;
                    working.emplace_back(static_cast<int>(j), static_cast<int>(k));
                    feasible = false;
                    grew = true;
                }
            }
        }
        if (feasible) return;
        if (!grew && round > 0) return;  // cycle cap reached, keep best effort
        row = input;
        dykstra_bands(row, bounds, working, radius, tol, max_cycles);
    }
}

}  // namespace

double NplModel::h_component(int i, const MixedStrategy& x) const {
    const std::vector<double>& row = values[i];
    double best = row[0] + kstar[i] * l1_distance(x, anchors[0]);
    for (std::size_t j = 1; j < anchors.size(); ++j)
        best = std::min(best, row[j] + kstar[i] * l1_distance(x, anchors[j]));
    if (clamp) best = std::min(big_m / 2.0, std::max(-big_m / 2.0, best));
    return best;
}

std::vector<double> NplModel::exponents(const MixedStrategy& x) const {
    std::vector<double> h(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        h[i] = h_component(static_cast<int>(i), x);
    return h;
}

AttackDistribution NplModel::predict(const MixedStrategy& x) const {
    return softmax_from_exponents(exponents(x));
}

void NplModel::validate() const {
    if (anchors.empty()) throw std::invalid_argument("NplModel: no anchors");
    if (values.empty()) throw std::invalid_argument("NplModel: no component values");
    if (kstar.size() != values.size())
        throw std::invalid_argument("NplModel: kstar size mismatch");
    if (khat <= 0 || big_m <= 0)
        throw std::invalid_argument("NplModel: khat and M must be positive");
    const std::size_t s = anchors.size();
    auto dist = pairwise_l1(anchors);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != s)
            throw std::invalid_argument("NplModel: values row size mismatch");
        double max_ratio = 0.0;
        for (std::size_t j = 0; j < s; ++j) {
            if (std::fabs(values[i][j]) > big_m / 2.0 + 1e-10)
                throw std::invalid_argument("NplModel: anchor value outside [-M/2, M/2]");
            for (std::size_t k = j + 1; k < s; ++k) {
                double gap = std::fabs(values[i][j] - values[i][k]);
                if (gap > khat * dist[j][k] + 1e-8)
                    throw std::invalid_argument("NplModel: Lipschitz constraint violated");
                if (dist[j][k] > 0) max_ratio = std::max(max_ratio, gap / dist[j][k]);
            }
        }
        if (kstar[i] < 0 || kstar[i] > khat + 1e-8)
            throw std::invalid_argument("NplModel: kstar outside [0, khat]");
        if (std::fabs(kstar[i] - max_ratio) > 1e-8)
            throw std::invalid_argument("NplModel: kstar does not match the defining ratio");
    }
}

optim::ObjectiveFn npl_anchor_objective(const AttackDataset& data) {
    if (data.size() == 0) throw std::invalid_argument("npl: empty dataset");
    const int t = data.num_targets;
    const int s = data.num_anchors();
    auto totals = data.anchor_totals();
    // Layout: flat[i * s + j] = h_{ij}, i in [0, T-1), j in [0, s).
    return [&data, totals, t, s](const std::vector<double>& flat,
                                 std::vector<double>* grad) -> double {
        double ll = 0.0;
        if (grad) grad->assign(flat.size(), 0.0);
        for (int j = 0; j < s; ++j) {
            double m = 0.0;
            for (int i = 0; i < t - 1; ++i) m = std::max(m, flat[i * s + j]);
            double denom = std::exp(-m);
            for (int i = 0; i < t - 1; ++i) denom += std::exp(flat[i * s + j] - m);
            double lse = m + std::log(denom);
            for (int i = 0; i < t - 1; ++i) ll += data.counts[j][i] * flat[i * s + j];
            ll -= totals[j] * lse;
            if (grad)
                for (int i = 0; i < t - 1; ++i) {
                    double q = std::exp(flat[i * s + j] - lse);
                    (*grad)[i * s + j] = data.counts[j][i] - totals[j] * q;
                }
        }
        return ll;
    };
}

void project_npl_feasible(std::vector<double>& flat, const std::vector<MixedStrategy>& anchors,
                          int num_targets, double khat, double big_m,
                          const optim::SolverConfig& config) {
    const int s = static_cast<int>(anchors.size());
    const int rows = num_targets - 1;
    auto dist = pairwise_l1(anchors);
    std::vector<std::vector<double>> bounds(s, std::vector<double>(s, 0.0));
    for (int j = 0; j < s; ++j)
        for (int k = 0; k < s; ++k) bounds[j][k] = khat * dist[j][k];
    par::for_each_index(static_cast<std::size_t>(rows), config.jobs, [&](std::size_t i) {
        std::vector<double> row(flat.begin() + i * s, flat.begin() + (i + 1) * s);
        project_row(row, bounds, big_m / 2.0, config.projection_tol, config.projection_max_cycles);
        std::copy(row.begin(), row.end(), flat.begin() + i * s);
    });
}

AnchorFit npl_fit_anchors(const AttackDataset& data, double khat, double big_m,
                          const optim::SolverConfig& config) {
    if (data.size() == 0) throw std::invalid_argument("npl_fit_anchors: empty dataset");
    if (big_m <= 0) throw std::invalid_argument("npl_fit_anchors: M must be positive");
    if (khat <= 0) throw std::invalid_argument("npl_fit_anchors: khat must be positive");
    const int t = data.num_targets;
    const int s = data.num_anchors();

    auto objective = npl_anchor_objective(data);
    auto project = [&](std::vector<double>& flat) {
        project_npl_feasible(flat, data.anchors, t, khat, big_m, config);
    };

    std::vector<double> init(static_cast<std::size_t>(t - 1) * s, 0.0);
    auto res = optim::projected_gradient_ascent(objective, project, init, config);
    if (!res.converged)
        throw optim::NonConvergenceError(
            "npl_fit_anchors: no convergence after iteration cap (residual " +
                std::to_string(res.grad_residual) + ")",
            res.x, res.grad_residual);

    AnchorFit fit;
    fit.values.assign(t - 1, std::vector<double>(s));
    for (int i = 0; i < t - 1; ++i)
        for (int j = 0; j < s; ++j) fit.values[i][j] = res.x[i * s + j];
    fit.objective = res.value;
    fit.diagnostics = std::move(res);
    return fit;
}

NplModel minlip_extend(std::vector<std::vector<double>> values,
                       std::vector<MixedStrategy> anchors, double khat, double big_m,
                       bool clamp) {
    NplModel model;
    model.khat = khat;
    model.big_m = big_m;
    model.clamp = clamp;
    const std::size_t s = anchors.size();
    auto dist = pairwise_l1(anchors);
    model.kstar.assign(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double best = 0.0;
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t k = j + 1; k < s; ++k)
                if (dist[j][k] > 0)
                    best = std::max(best, std::fabs(values[i][j] - values[i][k]) / dist[j][k]);
        model.kstar[i] = best;
    }
    model.values = std::move(values);
    model.anchors = std::move(anchors);
    return model;
}

NplModel npl_fit(const AttackDataset& data, double khat, double big_m, bool clamp,
                 const optim::SolverConfig& config) {
    AnchorFit fit = npl_fit_anchors(data, khat, big_m, config);
    return minlip_extend(std::move(fit.values), data.anchors, khat, big_m, clamp);
}

double cross_validate_khat(const AttackDataset& data, const std::vector<double>& grid,
                           int folds, std::uint64_t seed, double big_m,
                           const optim::SolverConfig& config) {
    if (grid.empty()) throw std::invalid_argument("cross_validate_khat: empty grid");
    const int s = data.num_anchors();
    if (s < 2) throw std::invalid_argument("cross_validate_khat: need at least 2 anchors");
    folds = std::min(folds, s);

    std::vector<int> order(s);
    for (int j = 0; j < s; ++j) order[j] = j;
    Rng rng(seed);
    rng.shuffle(order);

    double best_khat = grid.front();
    double best_score = -1e300;
    for (double khat : grid) {
        double score = 0.0;
        for (int f = 0; f < folds; ++f) {
            std::vector<int> train_ids;
            std::vector<int> test_ids;
            for (int j = 0; j < s; ++j)
                (j % folds == f ? test_ids : train_ids).push_back(order[j]);
            if (train_ids.empty() || test_ids.empty()) continue;
            AttackDataset train = subset_by_anchors(data, train_ids);
            AttackDataset test = subset_by_anchors(data, test_ids);
            NplModel model = npl_fit(train, khat, big_m, true, config);
            score += log_likelihood([&model](const MixedStrategy& x) { return model.predict(x); },
                                    test);
        }
        if (score > best_score) {
            best_score = score;
            best_khat = khat;
        }
    }
    return best_khat;
}

}  // namespace ssg
