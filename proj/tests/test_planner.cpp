#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ssg/planner.hpp"
#include "ssg/rng.hpp"
#include "ssg/simulate.hpp"

using namespace ssg;

namespace {

SecurityGame random_game(int t, int k, Rng& rng) {
    SecurityGame g;
    g.num_targets = t;
    g.num_resources = k;
    g.payoff.resize(static_cast<std::size_t>(t) * t);
    for (double& u : g.payoff) u = rng.uniform(-2.0, 2.0);
    return g;
}

// Exhaustive 1e-3-step search over the feasible grid for T = 2.
double grid_oracle_t2(const SecurityGame& game, const QFn& model) {
    double best = -1e300;
    const double step = 1e-3;
    for (int i = 0; i <= 1000; ++i) {
        double x0 = i * step;
        int jmax = std::min(1000, static_cast<int>((game.num_resources - x0) / step + 1e-9));
        for (int j = 0; j <= jmax; ++j) {
            MixedStrategy x({x0, j * step});
            best = std::max(best, defender_utility(game, x, model(x)));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("planning against a zero payoff matrix") {
    Rng rng(1);
    SecurityGame g = random_game(3, 1, rng);
    g.payoff.assign(9, 0.0);
    GeneralizedSuqrModel m;
    m.w1 = -1.0;
    m.c = {0.2, -0.2};
    auto res = plan_strategy(g, [&m](const MixedStrategy& x) { return m.predict(x); }, 8, 5);
    CHECK(res.utility == doctest::Approx(0.0).epsilon(1e-12));
    g.validate_strategy(res.x);
}

TEST_CASE("planning with a constant uniform adversary and diagonal payoff") {
    // f(x) = 0.5 x_1 with q fixed at (0.5, 0.5): optimum x = (1, 0), value 0.5.
    SecurityGame g;
    g.num_targets = 2;
    g.num_resources = 1;
    g.payoff = {1.0, 0.0, 0.0, 0.0};
    QFn uniform = [](const MixedStrategy&) { return AttackDistribution({0.5, 0.5}); };
    auto res = plan_strategy(g, uniform, 8, 3);
    CHECK(res.utility == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(grid_oracle_t2(g, uniform) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("planner matches the grid oracle on random T=2 SUQR instances") {
    Rng rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        SecurityGame g = random_game(2, 1, rng);
        GeneralizedSuqrModel m;
        m.w1 = rng.uniform(-6.0, 2.0);
        m.c = {rng.uniform(-1.5, 1.5)};
        QFn q = [&m](const MixedStrategy& x) { return m.predict(x); };
        auto res = plan_strategy(g, q, 16, 100 + trial);
        double oracle = grid_oracle_t2(g, q);
        CHECK(res.utility >= oracle - 1e-4);
        g.validate_strategy(res.x);
    }
}

TEST_CASE("planner output dominates every multi-start value and is feasible") {
    Rng rng(13);
    SecurityGame g = random_game(4, 2, rng);
    GeneralizedSuqrModel m;
    m.w1 = -3.0;
    m.c = {0.3, -0.1, 0.6};
    auto res = plan_strategy(g, [&m](const MixedStrategy& x) { return m.predict(x); }, 12, 77);
    for (double v : res.start_values) CHECK(res.utility >= v - 1e-9);
    double total = 0.0;
    for (double xi : res.x.coverage) {
        CHECK(xi >= -1e-9);
        CHECK(xi <= 1.0 + 1e-9);
        total += xi;
    }
    CHECK(total <= g.num_resources + 1e-9);
}

TEST_CASE("planner is deterministic for any job count") {
    Rng rng(17);
    SecurityGame g = random_game(3, 1, rng);
    GeneralizedSuqrModel m;
    m.w1 = -2.0;
    m.c = {0.4, -0.4};
    QFn q = [&m](const MixedStrategy& x) { return m.predict(x); };
    auto serial = plan_strategy(g, q, 10, 42, 1);
    auto parallel = plan_strategy(g, q, 10, 42, 4);
    CHECK(serial.utility == parallel.utility);
    for (int i = 0; i < 3; ++i) CHECK(serial.x[i] == parallel.x[i]);
}

TEST_CASE("delta from risk") {
    auto d1 = delta_from_risk(0.001, 0.0);
    CHECK(d1.delta == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(d1.l1_bound == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-12));
    auto d2 = delta_from_risk(0.0, 0.0);
    CHECK(d2.delta == 0.0);
    CHECK(d2.l1_bound == 0.0);
    auto d3 = delta_from_risk(0.008, 0.019);
    CHECK(d3.delta == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(delta_from_risk(-0.5, 0.2), std::invalid_argument);
}

TEST_CASE("utility lower bound") {
    SUBCASE("no slack returns the optimum exactly") {
        UtilityBoundInputs in;
        in.opt_utility = 0.7321;
        CHECK(utility_lower_bound(in) == 0.7321);
    }
    SUBCASE("hand-derived value") {
        UtilityBoundInputs in;
        in.opt_utility = 1.0;
        in.k_p = 1.0;
        in.khat = 1.0;
        in.eps = 0.01;
        in.alpha = 0.001;
        in.eps_star = 0.0;
        CHECK(utility_lower_bound(in) == doctest::Approx(0.63715728752538099).epsilon(1e-12));
    }
    SUBCASE("monotone decreasing in every slack term") {
        UtilityBoundInputs in;
        in.opt_utility = 1.0;
        in.k_p = 1.0;
        in.khat = 1.0;
        in.eps = 0.01;
        in.alpha = 0.001;
        double base = utility_lower_bound(in);
        UtilityBoundInputs worse = in;
        worse.eps = 0.02;
        CHECK(utility_lower_bound(worse) < base);
        worse = in;
        worse.khat = 2.0;
        CHECK(utility_lower_bound(worse) < base);
        worse = in;
        worse.alpha = 0.002;
        CHECK(utility_lower_bound(worse) < base);
    }
}

TEST_CASE("Pinsker check") {
    SUBCASE("identical distributions") {
        AttackDistribution q({0.2, 0.3, 0.5});
        auto c = empirical_pinsker_check(q, q);
        CHECK(c.kl == 0.0);
        CHECK(c.half_l1_sq == 0.0);
        CHECK(c.holds);
    }
    SUBCASE("point mass against uniform") {
        auto c = empirical_pinsker_check(AttackDistribution({1.0, 0.0}),
                                         AttackDistribution({0.5, 0.5}));
        CHECK(c.kl == doctest::Approx(std::log(2.0)).epsilon(1e-13));
        CHECK(c.half_l1_sq == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(c.holds);
    }
    SUBCASE("zero in q_h under q_p mass reports infinite KL") {
        auto c = empirical_pinsker_check(AttackDistribution({1.0, 0.0}),
                                         AttackDistribution({0.0, 1.0}));
        CHECK(std::isinf(c.kl));
        CHECK(c.holds);
    }
    SUBCASE("holds on random distribution pairs") {
        Rng rng(23);
        for (int trial = 0; trial < 10000; ++trial) {
            int t = 2 + rng.uniform_int(6);
            std::vector<double> p(t), q(t);
            double sp = 0.0, sq = 0.0;
            for (int i = 0; i < t; ++i) {
                p[i] = rng.exponential();
                q[i] = rng.exponential();
                sp += p[i];
                sq += q[i];
            }
            for (int i = 0; i < t; ++i) {
                p[i] /= sp;
                q[i] /= sq;
            }
            auto c = empirical_pinsker_check(AttackDistribution(p), AttackDistribution(q));
            CHECK(c.holds);
        }
    }
}

TEST_CASE("planner works against a fitted NPL model") {
    Rng rng(29);
    std::vector<AttackRecord> records;
    for (int j = 0; j < 5; ++j) {
        MixedStrategy s({rng.uniform() * 0.5, rng.uniform() * 0.5});
        for (int a = 0; a < 12; ++a) records.push_back({s, rng.uniform_int(2)});
    }
    NplModel model = npl_fit(dedupe_dataset(records), 2.0, 20.0);
    SecurityGame g = random_game(2, 1, rng);
    QFn q = [&model](const MixedStrategy& x) { return model.predict(x); };
    auto res = plan_strategy(g, q, 16, 55);
    double oracle = grid_oracle_t2(g, q);
    CHECK(res.utility >= oracle - 1e-4);
}
