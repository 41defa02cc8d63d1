// Wall-clock comparison of the serial reference paths against the OpenMP
// paths for the three parallel kernels: NPL anchor fitting (per-component
// row projections), multi-start planning, and evaluation splits. Also
// verifies that both paths produce identical results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "ssg/npl.hpp"
#include "ssg/parallel.hpp"
#include "ssg/planner.hpp"
#include "ssg/rng.hpp"
#include "ssg/simulate.hpp"

using namespace ssg;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Fn>
double timed(const Fn& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return seconds_since(t0);
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-22s serial %7.3fs   omp %7.3fs   speedup %4.2fx   identical %s\n", name,
                serial, parallel, serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main() {
    const int jobs = par::hardware_jobs();
    std::printf("hardware jobs: %d\n", jobs);

    SecurityGame game;
    game.num_targets = 8;
    game.num_resources = 3;
    game.payoff.assign(64, 0.0);
    Rng rng(99);
    for (double& u : game.payoff) u = rng.uniform(-2.0, 2.0);
    game.r_max = 10.0;
    game.p_min = -10.0;
    game.rewards.resize(8);
    game.penalties.resize(8);
    for (int i = 0; i < 8; ++i) {
        game.rewards[i] = rng.uniform() * 10.0;
        game.penalties[i] = -rng.uniform() * 10.0;
    }

    sim::GroundTruth truth = sim::GroundTruth::quadratic(game, -9.85, 0.37, 0.15);
    auto strategies = sim::sample_strategies(8, 3, 40, {sim::SamplerKind::DirichletScaled, 0.1, 1.0}, 3);
    auto data = sim::simulate_attacks(truth, strategies, 40, 5);

    // NPL anchor fit: rows project in parallel inside Dykstra.
    NplModel npl_serial, npl_parallel;
    optim::SolverConfig cfg;
    cfg.max_iters = 3000;
    double t_serial = timed([&] { npl_serial = npl_fit(data, 2.0, 60.0, true, cfg); });
    optim::SolverConfig cfg_par = cfg;
    cfg_par.jobs = jobs;
    double t_parallel = timed([&] { npl_parallel = npl_fit(data, 2.0, 60.0, true, cfg_par); });
    bool same = npl_serial.values == npl_parallel.values;
    report("npl_fit", t_serial, t_parallel, same);

    // Multi-start planner.
    QFn q = [&npl_serial](const MixedStrategy& x) { return npl_serial.predict(x); };
    PlanResult plan_serial, plan_parallel;
    t_serial = timed([&] { plan_serial = plan_strategy(game, q, 64, 7, 1); });
    t_parallel = timed([&] { plan_parallel = plan_strategy(game, q, 64, 7, jobs); });
    same = plan_serial.x.coverage == plan_parallel.x.coverage &&
           plan_serial.utility == plan_parallel.utility;
    report("plan_strategy", t_serial, t_parallel, same);

    // Evaluation splits.
    QFn ref = truth.as_qfn();
    auto source = [&](std::uint64_t seed) {
        auto xs = sim::sample_strategies(8, 3, 30, {sim::SamplerKind::DirichletScaled, 0.1, 1.0},
                                         seed);
        return sim::simulate_attacks(truth, xs, 30, splitmix64(seed));
    };
    sim::EvalOptions opts;
    opts.num_splits = 24;
    opts.solver.max_iters = 3000;
    sim::EvalReport rep_serial, rep_parallel;
    t_serial = timed([&] {
        rep_serial = sim::evaluate({{sim::ModelSpec::Kind::Gsuqr, 60.0, 5.0, true}}, &game,
                                   source, &ref, opts, 11);
    });
    opts.jobs = jobs;
    t_parallel = timed([&] {
        rep_parallel = sim::evaluate({{sim::ModelSpec::Kind::Gsuqr, 60.0, 5.0, true}}, &game,
                                     source, &ref, opts, 11);
    });
    same = rep_serial.models[0].split_alphas == rep_parallel.models[0].split_alphas;
    report("evaluate", t_serial, t_parallel, same);

    return 0;
}
