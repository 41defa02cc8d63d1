#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ssg/game.hpp"
#include "ssg/npl.hpp"
#include "ssg/suqr.hpp"

namespace ssg::sim {

enum class TruthKind { SuqrStandard, SuqrGeneralized, SuqrQuadratic };

// Ground-truth adversary used by the simulators. All kinds share the form
// q_i proportional to e^{w1 phi(x_i) + c_i} with phi(x) = x, except the
// quadratic adversary which reasons on phi(x) = x^2.
struct GroundTruth {
    TruthKind kind = TruthKind::SuqrGeneralized;
    double w1 = 0.0;
    std::vector<double> intercepts;  // size T

    static GroundTruth standard(const SecurityGame& game, double w1, double w2, double w3);
    static GroundTruth generalized(double w1, std::vector<double> c_reduced);
    static GroundTruth quadratic(const SecurityGame& game, double w1, double w2, double w3);
    static GroundTruth quadratic_intercepts(double w1, std::vector<double> intercepts);

    int num_targets() const { return static_cast<int>(intercepts.size()); }
    AttackDistribution predict(const MixedStrategy& x) const;
    QFn as_qfn() const;
};

enum class SamplerKind { UniformRejection, DirichletScaled, AnchoredGrid };

struct SamplerOptions {
    SamplerKind kind = SamplerKind::UniformRejection;
    double grid_resolution = 0.1;  // AnchoredGrid: coordinates snap down to this lattice
    double concentration = 1.0;    // DirichletScaled: symmetric Dirichlet parameter
};

// Draws feasible mixed strategies; deterministic given the seed. The
// rejection sampler raises after 1e7 attempts and suggests an alternative.
std::vector<MixedStrategy> sample_strategies(int targets, int resources, int count,
                                             const SamplerOptions& opts, std::uint64_t seed);

// For each strategy draws categorical attacks from the truth.
AttackDataset simulate_attacks(const GroundTruth& truth,
                               const std::vector<MixedStrategy>& strategies,
                               int attacks_per_strategy, std::uint64_t seed);
// Variant distributing `total_attacks` as evenly as possible.
AttackDataset simulate_attacks_total(const GroundTruth& truth,
                                     const std::vector<MixedStrategy>& strategies,
                                     int total_attacks, std::uint64_t seed);

// Fine-grained prediction error: the average over test records of
// ln q^ref(target | x) - ln q^model(target | x).
double alpha_metric(const QFn& model, const AttackDataset& test, const QFn& reference);

// Add-one-smoothed per-unique-strategy frequencies of a dataset, as a
// reference usable with alpha_metric. Lookup is by exact strategy match.
QFn empirical_reference(const AttackDataset& data);

// Coarse-grained error: per unique test strategy, target i carries the
// label "attacked at least once"; the model's probability of that event is
// 1 - (1 - q_i)^{n_j}. Returns the average Bernoulli log-loss against the
// labels (a perfect predictor approaches 0). The threshold only enters the
// companion classification diagnostic.
struct CoarseAlpha {
    double alpha = 0.0;
    double accuracy_at_threshold = 0.0;
};
CoarseAlpha coarse_grained_alpha(const QFn& model, const AttackDataset& test, double threshold);

struct ModelSpec {
    enum class Kind { Gsuqr, Ssuqr, Npl };
    Kind kind = Kind::Gsuqr;
    double big_m = 20.0;
    double khat = 5.0;
    bool clamp = true;

    std::string name() const;
};

QFn fit_model_spec(const ModelSpec& spec, const AttackDataset& train, const SecurityGame* game,
                   const optim::SolverConfig& config = {});

struct EvalOptions {
    int num_splits = 100;
    std::vector<double> deltas = {0.01, 0.05, 0.1, 0.25, 0.5};
    double train_fraction = 0.7;
    enum class Mode { Fine, Coarse } mode = Mode::Fine;
    double coarse_threshold = 0.5;
    int jobs = 1;
    optim::SolverConfig solver;
};

struct ModelEval {
    std::string model;
    std::vector<double> split_alphas;                       // per split, unsorted
    std::vector<std::pair<double, double>> alpha_at_delta;  // (delta, reported alpha)
};

struct EvalReport {
    int num_splits = 0;
    std::string mode;
    std::vector<ModelEval> models;
};

// Yields the dataset evaluated in one split; a fixed dataset ignores the
// seed, a simulator draws a fresh one.
using DatasetSource = std::function<AttackDataset(std::uint64_t seed)>;
DatasetSource fixed_dataset(AttackDataset data);

// Train/test splits partition unique strategies, never records. Per split
// every spec is fitted on the train records and scored on the test records;
// the report carries the ceil((1-delta) * num_splits)-th order statistic of
// the per-split alphas for each requested delta. `truth_reference` selects
// the exact reference; when null the smoothed empirical frequencies of the
// test split are used.
EvalReport evaluate(const std::vector<ModelSpec>& specs, const SecurityGame* game,
                    const DatasetSource& source, const QFn* truth_reference,
                    const EvalOptions& opts, std::uint64_t seed);

struct DecayPoint {
    int sample_size = 0;
    double alpha = 0.0;
};

// Least-squares fit of alpha = c / sqrt(m); r2 is the coefficient of
// determination of the linear regression of alpha on 1/sqrt(m).
struct DecayFit {
    std::vector<DecayPoint> points;
    double coefficient = 0.0;
    double r2 = 0.0;
};
DecayFit fit_inverse_sqrt(const std::vector<DecayPoint>& points);

// Runs the sample-size sweep: for each size, `seeds_per_size` independent
// simulate/split/fit/score rounds; the median alpha per size feeds the
// 1/sqrt(m) fit.
DecayFit evaluate_decay(const ModelSpec& spec, const SecurityGame* game,
                        const GroundTruth& truth, const SamplerOptions& sampler,
                        int num_strategies, const std::vector<int>& sizes, int seeds_per_size,
                        double train_fraction, std::uint64_t seed, const EvalOptions& opts);

}  // namespace ssg::sim
