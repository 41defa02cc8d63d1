#include "ssg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

#include "ssg/parallel.hpp"
#include "ssg/rng.hpp"

namespace ssg::sim {

namespace {

double gamma_draw(Rng& rng, double shape) {
    // Marsaglia-Tsang; the shape < 1 case boosts through shape + 1.
    if (shape < 1.0) {
        double u = rng.uniform_pos();
        return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z = rng.normal();
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.uniform_pos();
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
    }
}

}  // namespace

GroundTruth GroundTruth::standard(const SecurityGame& game, double w1, double w2, double w3) {
    if (!game.has_features())
        throw std::invalid_argument("GroundTruth::standard: game lacks rewards or penalties");
    GroundTruth g;
    g.kind = TruthKind::SuqrStandard;
    g.w1 = w1;
    g.intercepts.resize(game.num_targets);
    for (int i = 0; i < game.num_targets; ++i)
        g.intercepts[i] = w2 * game.rewards[i] + w3 * game.penalties[i];
    return g;
}

GroundTruth GroundTruth::generalized(double w1, std::vector<double> c_reduced) {
    GroundTruth g;
    g.kind = TruthKind::SuqrGeneralized;
    g.w1 = w1;
    g.intercepts = std::move(c_reduced);
    g.intercepts.push_back(0.0);  // reference target
    return g;
}

GroundTruth GroundTruth::quadratic(const SecurityGame& game, double w1, double w2, double w3) {
    GroundTruth g = standard(game, w1, w2, w3);
    g.kind = TruthKind::SuqrQuadratic;
    return g;
}

GroundTruth GroundTruth::quadratic_intercepts(double w1, std::vector<double> intercepts) {
    GroundTruth g;
    g.kind = TruthKind::SuqrQuadratic;
    g.w1 = w1;
    g.intercepts = std::move(intercepts);
    return g;
}

AttackDistribution GroundTruth::predict(const MixedStrategy& x) const {
    if (x.num_targets() != num_targets())
        throw std::invalid_argument("GroundTruth: strategy dimension mismatch");
    std::vector<double> e(intercepts.size());
    for (std::size_t i = 0; i < intercepts.size(); ++i) {
        double f = (kind == TruthKind::SuqrQuadratic) ? x[i] * x[i] : x[i];
        e[i] = w1 * f + intercepts[i];
    }
    return softmax_full(e);
}

QFn GroundTruth::as_qfn() const {
    GroundTruth copy = *this;
    return [copy](const MixedStrategy& x) { return copy.predict(x); };
}

std::vector<MixedStrategy> sample_strategies(int targets, int resources, int count,
                                             const SamplerOptions& opts, std::uint64_t seed) {
    if (targets < 2 || resources < 1 || resources >= targets)
        throw std::invalid_argument("sample_strategies: need 1 <= K < T");
    if (count < 0) throw std::invalid_argument("sample_strategies: negative count");
    std::vector<MixedStrategy> out;
    out.reserve(count);
    Rng rng(seed);

    auto reject_draw = [&](long long& attempts) {
        std::vector<double> x(targets);
        for (;;) {
            if (++attempts > 10000000LL)
                throw std::runtime_error(
                    "sample_strategies: uniform rejection exceeded 1e7 attempts; use the "
                    "dirichlet-scaled or anchored-grid sampler for this T, K");
            double total = 0.0;
            for (int i = 0; i < targets; ++i) {
                x[i] = rng.uniform();
                total += x[i];
            }
            if (total <= resources) return x;
        }
    };

    long long attempts = 0;
    for (int n = 0; n < count; ++n) {
        std::vector<double> x;
        switch (opts.kind) {
            case SamplerKind::UniformRejection:
                x = reject_draw(attempts);
                break;
            case SamplerKind::DirichletScaled: {
                if (opts.concentration <= 0)
                    throw std::invalid_argument("sample_strategies: concentration must be positive");
                std::vector<double> g(targets + 1);
                double total = 0.0;
                for (int i = 0; i <= targets; ++i) {
                    g[i] = opts.concentration == 1.0 ? rng.exponential()
                                                     : gamma_draw(rng, opts.concentration);
                    total += g[i];
                }
                x.resize(targets);
                for (int i = 0; i < targets; ++i)
                    x[i] = std::min(1.0, resources * g[i] / total);
                break;
            }
            case SamplerKind::AnchoredGrid: {
                if (opts.grid_resolution <= 0 || opts.grid_resolution > 1)
                    throw std::invalid_argument(
                        "sample_strategies: grid resolution must lie in (0, 1]");
                x = reject_draw(attempts);
                for (double& xi : x)
                    xi = std::floor(xi / opts.grid_resolution) * opts.grid_resolution;
                break;
            }
        }
        out.emplace_back(std::move(x));
    }
    return out;
}

AttackDataset simulate_attacks(const GroundTruth& truth,
                               const std::vector<MixedStrategy>& strategies,
                               int attacks_per_strategy, std::uint64_t seed) {
    if (attacks_per_strategy < 0)
        throw std::invalid_argument("simulate_attacks: negative attack count");
    std::vector<AttackRecord> records;
    records.reserve(strategies.size() * attacks_per_strategy);
    for (std::size_t j = 0; j < strategies.size(); ++j) {
        AttackDistribution q = truth.predict(strategies[j]);
        Rng rng = Rng::child(seed, j);
        for (int a = 0; a < attacks_per_strategy; ++a)
            records.push_back({strategies[j], rng.categorical(q.q)});
    }
    return dedupe_dataset(std::move(records));
}

AttackDataset simulate_attacks_total(const GroundTruth& truth,
                                     const std::vector<MixedStrategy>& strategies,
                                     int total_attacks, std::uint64_t seed) {
    if (strategies.empty()) throw std::invalid_argument("simulate_attacks_total: no strategies");
    const int s = static_cast<int>(strategies.size());
    std::vector<AttackRecord> records;
    records.reserve(total_attacks);
    for (int j = 0; j < s; ++j) {
        int n = total_attacks / s + (j < total_attacks % s ? 1 : 0);
        AttackDistribution q = truth.predict(strategies[j]);
        Rng rng = Rng::child(seed, j);
        for (int a = 0; a < n; ++a)
            records.push_back({strategies[j], rng.categorical(q.q)});
    }
    return dedupe_dataset(std::move(records));
}

double alpha_metric(const QFn& model, const AttackDataset& test, const QFn& reference) {
    if (test.size() == 0) throw std::invalid_argument("alpha_metric: empty test set");
    double total = 0.0;
    for (int j = 0; j < test.num_anchors(); ++j) {
        AttackDistribution qm = model(test.anchors[j]);
        AttackDistribution qr = reference(test.anchors[j]);
        for (int i = 0; i < test.num_targets; ++i)
            if (test.counts[j][i] > 0)
                total += test.counts[j][i] * (std::log(qr[i]) - std::log(qm[i]));
    }
    return total / static_cast<double>(test.size());
}

QFn empirical_reference(const AttackDataset& data) {
    if (data.size() == 0) throw std::invalid_argument("empirical_reference: empty dataset");
    auto totals = data.anchor_totals();
    std::map<std::vector<double>, AttackDistribution> table;
    for (int j = 0; j < data.num_anchors(); ++j) {
        if (totals[j] <= 0) continue;  // cannot arise from records; kept as a guard
        std::vector<double> q(data.num_targets);
        for (int i = 0; i < data.num_targets; ++i)
            q[i] = (data.counts[j][i] + 1.0) / (totals[j] + data.num_targets);
        table.emplace(data.anchors[j].coverage, AttackDistribution(std::move(q)));
    }
    return [table](const MixedStrategy& x) {
        auto it = table.find(x.coverage);
        if (it == table.end())
            throw std::invalid_argument("empirical_reference: strategy not in the reference set");
        return it->second;
    };
}

CoarseAlpha coarse_grained_alpha(const QFn& model, const AttackDataset& test, double threshold) {
    if (test.size() == 0) throw std::invalid_argument("coarse_grained_alpha: empty test set");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("coarse_grained_alpha: threshold must lie in (0,1)");
    auto totals = test.anchor_totals();
    double loss = 0.0;
    double correct = 0.0;
    double cells = 0.0;
    for (int j = 0; j < test.num_anchors(); ++j) {
        AttackDistribution q = model(test.anchors[j]);
        for (int i = 0; i < test.num_targets; ++i) {
            double label = test.counts[j][i] >= 1.0 ? 1.0 : 0.0;
            double p_hit = 1.0 - std::pow(1.0 - q[i], totals[j]);
            p_hit = std::min(1.0 - 1e-15, std::max(1e-300, p_hit));
            loss -= label * std::log(p_hit) + (1.0 - label) * std::log(1.0 - p_hit);
            correct += ((p_hit >= threshold) == (label > 0.5)) ? 1.0 : 0.0;
            cells += 1.0;
        }
    }
    CoarseAlpha out;
    out.alpha = loss / cells;
    out.accuracy_at_threshold = correct / cells;
    return out;
}

std::string ModelSpec::name() const {
    switch (kind) {
        case Kind::Gsuqr: return "gsuqr";
        case Kind::Ssuqr: return "ssuqr";
        case Kind::Npl: return "npl";
    }
    return "?";
}

QFn fit_model_spec(const ModelSpec& spec, const AttackDataset& train, const SecurityGame* game,
                   const optim::SolverConfig& config) {
    switch (spec.kind) {
        case ModelSpec::Kind::Gsuqr: {
            GeneralizedSuqrModel m = gsuqr_fit(train, spec.big_m, config);
            return [m](const MixedStrategy& x) { return m.predict(x); };
        }
        case ModelSpec::Kind::Ssuqr: {
            if (!game) throw std::invalid_argument("fit_model_spec: ssuqr needs a game");
            StandardSuqrModel m = ssuqr_fit(train, *game, config);
            SecurityGame g = *game;
            return [m, g](const MixedStrategy& x) { return m.predict(g, x); };
        }
        case ModelSpec::Kind::Npl: {
            NplModel m = npl_fit(train, spec.khat, spec.big_m, spec.clamp, config);
            return [m](const MixedStrategy& x) { return m.predict(x); };
        }
    }
    throw std::logic_error("fit_model_spec: unknown kind");
}

DatasetSource fixed_dataset(AttackDataset data) {
    auto shared = std::make_shared<AttackDataset>(std::move(data));
    return [shared](std::uint64_t) { return *shared; };
}

namespace {

// Splits anchors into train/test, fits every spec, returns per-spec alpha.
std::vector<double> run_split(const std::vector<ModelSpec>& specs, const SecurityGame* game,
                              const AttackDataset& data, const QFn* truth_reference,
                              const EvalOptions& opts, std::uint64_t split_seed) {
    const int s = data.num_anchors();
    if (s < 2) throw std::invalid_argument("evaluate: need at least 2 unique strategies");
    std::vector<int> order(s);
    for (int j = 0; j < s; ++j) order[j] = j;
    Rng rng(split_seed);
    rng.shuffle(order);
    int n_train = static_cast<int>(std::round(opts.train_fraction * s));
    n_train = std::max(1, std::min(s - 1, n_train));
    std::vector<int> train_ids(order.begin(), order.begin() + n_train);
    std::vector<int> test_ids(order.begin() + n_train, order.end());
    AttackDataset train = subset_by_anchors(data, train_ids);
    AttackDataset test = subset_by_anchors(data, test_ids);

    std::vector<double> alphas;
    alphas.reserve(specs.size());
    QFn empirical;
    if (!truth_reference && opts.mode == EvalOptions::Mode::Fine)
        empirical = empirical_reference(test);
    for (const ModelSpec& spec : specs) {
        QFn model = fit_model_spec(spec, train, game, opts.solver);
        if (opts.mode == EvalOptions::Mode::Fine) {
            const QFn& ref = truth_reference ? *truth_reference : empirical;
            alphas.push_back(alpha_metric(model, test, ref));
        } else {
            alphas.push_back(coarse_grained_alpha(model, test, opts.coarse_threshold).alpha);
        }
    }
    return alphas;
}

double order_statistic(std::vector<double> values, double delta) {
    std::sort(values.begin(), values.end());
    int n = static_cast<int>(values.size());
    int idx = static_cast<int>(std::ceil((1.0 - delta) * n));
    idx = std::max(1, std::min(n, idx));
    return values[idx - 1];
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

EvalReport evaluate(const std::vector<ModelSpec>& specs, const SecurityGame* game,
                    const DatasetSource& source, const QFn* truth_reference,
                    const EvalOptions& opts, std::uint64_t seed) {
    if (opts.num_splits < 1) throw std::invalid_argument("evaluate: need at least one split");
    for (double d : opts.deltas)
        if (!(d >= 0.0 && d < 1.0))
            throw std::invalid_argument("evaluate: deltas must lie in [0, 1)");
    if (!(opts.train_fraction > 0.0 && opts.train_fraction < 1.0))
        throw std::invalid_argument("evaluate: train_fraction must lie in (0,1)");

    std::vector<std::vector<double>> per_split(opts.num_splits);
    par::for_each_index(static_cast<std::size_t>(opts.num_splits), opts.jobs, [&](std::size_t i) {
        std::uint64_t split_seed = splitmix64(seed ^ splitmix64(i + 1));
        AttackDataset data = source(split_seed);
        EvalOptions inner = opts;
        inner.solver.jobs = 1;
        per_split[i] = run_split(specs, game, data, truth_reference, inner,
                                 splitmix64(split_seed + 0x9e37));
    });

    EvalReport report;
    report.num_splits = opts.num_splits;
    report.mode = opts.mode == EvalOptions::Mode::Fine ? "fine" : "coarse";
    for (std::size_t k = 0; k < specs.size(); ++k) {
        ModelEval me;
        me.model = specs[k].name();
        me.split_alphas.reserve(opts.num_splits);
        for (int i = 0; i < opts.num_splits; ++i) me.split_alphas.push_back(per_split[i][k]);
        for (double d : opts.deltas)
            me.alpha_at_delta.emplace_back(d, order_statistic(me.split_alphas, d));
        report.models.push_back(std::move(me));
    }
    return report;
}

DecayFit fit_inverse_sqrt(const std::vector<DecayPoint>& points) {
    DecayFit fit;
    fit.points = points;
    if (points.size() < 2) {
        fit.r2 = 1.0;
        if (!points.empty())
            fit.coefficient = points[0].alpha * std::sqrt(static_cast<double>(points[0].sample_size));
        return fit;
    }
    double suu = 0.0, sua = 0.0;
    double mean_u = 0.0, mean_a = 0.0;
    std::vector<double> u(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        u[i] = 1.0 / std::sqrt(static_cast<double>(points[i].sample_size));
        mean_u += u[i];
        mean_a += points[i].alpha;
        suu += u[i] * u[i];
        sua += u[i] * points[i].alpha;
    }
    mean_u /= points.size();
    mean_a /= points.size();
    fit.coefficient = sua / suu;  // through-origin coefficient of alpha = c/sqrt(m)

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double du = u[i] - mean_u;
        double da = points[i].alpha - mean_a;
        sxx += du * du;
        sxy += du * da;
        syy += da * da;
    }
    fit.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

DecayFit evaluate_decay(const ModelSpec& spec, const SecurityGame* game,
                        const GroundTruth& truth, const SamplerOptions& sampler,
                        int num_strategies, const std::vector<int>& sizes, int seeds_per_size,
                        double train_fraction, std::uint64_t seed, const EvalOptions& opts) {
    if (num_strategies < 2)
        throw std::invalid_argument("evaluate_decay: need at least 2 strategies");
    QFn reference = truth.as_qfn();
    std::vector<DecayPoint> medians;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        int m = sizes[si];
        std::vector<double> alphas(seeds_per_size);
        par::for_each_index(static_cast<std::size_t>(seeds_per_size), opts.jobs,
                            [&](std::size_t r) {
            std::uint64_t run_seed = splitmix64(seed ^ splitmix64((si << 20) + r + 1));
            auto strategies = sample_strategies(truth.num_targets(),
                                                game ? game->num_resources : 1, num_strategies,
                                                sampler, run_seed);
            AttackDataset data = simulate_attacks_total(truth, strategies, m,
                                                        splitmix64(run_seed + 17));
            EvalOptions inner = opts;
            inner.train_fraction = train_fraction;
            inner.solver.jobs = 1;
            std::vector<double> a = run_split({spec}, game, data, &reference, inner,
                                              splitmix64(run_seed + 31));
            alphas[r] = a[0];
        });
        medians.push_back({m, median(alphas)});
    }
    return fit_inverse_sqrt(medians);
}

}  // namespace ssg::sim
