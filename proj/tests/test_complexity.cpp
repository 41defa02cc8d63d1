#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ssg/complexity.hpp"
#include "ssg/rng.hpp"

using namespace ssg;
using namespace ssg::complexity;

namespace {

// Counts descents over all permutations of {0..t-1}; the brute-force
// Eulerian row.
std::vector<long long> eulerian_by_enumeration(int t) {
    std::vector<int> perm(t);
    for (int i = 0; i < t; ++i) perm[i] = i;
    std::vector<long long> row(t, 0);
    do {
        int descents = 0;
        for (int i = 0; i + 1 < t; ++i)
            if (perm[i] > perm[i + 1]) ++descents;
        row[descents] += 1;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return row;
}

}  // namespace

TEST_CASE("Eulerian rows") {
    auto r1 = eulerian_numbers(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == 1);

    auto r3 = eulerian_numbers(3);
    CHECK(r3[0] == 1);
    CHECK(r3[1] == 4);
    CHECK(r3[2] == 1);
    auto brute = eulerian_by_enumeration(3);
    for (int k = 0; k < 3; ++k) CHECK(r3[k] == brute[k]);

    BigInt sum5 = 0;
    for (const auto& v : eulerian_numbers(5)) sum5 += v;
    CHECK(sum5 == 120);

    CHECK_THROWS_AS(eulerian_numbers(0), std::invalid_argument);
    CHECK_THROWS_AS(eulerian_numbers(31), std::invalid_argument);
}

TEST_CASE("Eulerian row sums are exactly T! up to T = 12") {
    BigInt fact = 1;
    for (int t = 1; t <= 12; ++t) {
        fact *= t;
        BigInt sum = 0;
        for (const auto& v : eulerian_numbers(t)) sum += v;
        CHECK(sum == fact);
    }
}

TEST_CASE("Irwin-Hall CDF boundary values and exact slices") {
    for (int t : {1, 3, 7}) {
        CHECK(irwin_hall_cdf(t, 0) == 0.0);
        CHECK(irwin_hall_cdf(t, t) == 1.0);
    }
    CHECK(irwin_hall_cdf_exact(3, 1) == BigRational(1, 6));
    CHECK(irwin_hall_cdf_exact(3, 2) == BigRational(5, 6));
    CHECK_THROWS_AS(irwin_hall_cdf(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(irwin_hall_cdf(3, -1), std::invalid_argument);
}

TEST_CASE("F_3(1) matches a Monte-Carlo volume estimate") {
    Rng rng(2024);
    long long hits = 0;
    const long long n = 10000000;
    for (long long i = 0; i < n; ++i) {
        double s = rng.uniform() + rng.uniform() + rng.uniform();
        if (s <= 1.0) ++hits;
    }
    double mc = static_cast<double>(hits) / n;
    CHECK(std::fabs(mc - irwin_hall_cdf(3, 1)) < 1e-3);
}

TEST_CASE("Irwin-Hall increments are the Eulerian ratios") {
    for (int t = 1; t <= 12; ++t) {
        auto row = eulerian_numbers(t);
        BigInt fact = 1;
        for (int i = 2; i <= t; ++i) fact *= i;
        for (int k = 1; k <= t; ++k) {
            BigRational diff = irwin_hall_cdf_exact(t, k) - irwin_hall_cdf_exact(t, k - 1);
            CHECK(diff == BigRational(row[k - 1], fact));
        }
    }
}

TEST_CASE("Irwin-Hall CDF is nondecreasing in k") {
    for (int t : {4, 11, 30}) {
        double prev = -1.0;
        for (int k = 0; k <= t; ++k) {
            double v = irwin_hall_cdf(t, k);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("floating Irwin-Hall path agrees with the exact one near the cutover") {
    for (int k : {1, 10, 15, 29}) {
        double exact = irwin_hall_cdf_exact(29, k).convert_to<double>();
        CHECK(irwin_hall_cdf(29, k) == doctest::Approx(exact).epsilon(1e-12));
    }
    double prev = -1.0;
    for (int k = 0; k <= 35; ++k) {
        double v = irwin_hall_cdf(35, k);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(irwin_hall_cdf(35, 35) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("covering bound for X") {
    SUBCASE("Bernstein exponent vanishes at the K+1 = T/2 boundary") {
        double eps = 0.1;
        CHECK(ln_cover_x(6, 2, eps, CoverMode::Bernstein) ==
              doctest::Approx(-6.0 * std::log(2.0 * eps)).epsilon(1e-13));
    }
    SUBCASE("exact volume form at T=3, K=1, eps=0.25") {
        CHECK(ln_cover_x(3, 1, 0.25, CoverMode::ExactVolume) ==
              doctest::Approx(1.8971199848858813).epsilon(1e-13));
    }
    SUBCASE("exact volume never exceeds Bernstein where both are defined") {
        for (int t = 10; t <= 40; ++t)
            for (int k = 1; k + 1 <= t / 2; ++k)
                for (double eps : {0.01, 0.1, 0.4}) {
                    double exact = ln_cover_x(t, k, eps, CoverMode::ExactVolume);
                    double bern = ln_cover_x(t, k, eps, CoverMode::Bernstein);
                    CHECK(exact <= bern + 1e-9);
                }
    }
    SUBCASE("Bernstein mode rejects K+1 > T/2") {
        CHECK_THROWS_AS(ln_cover_x(3, 1, 0.1, CoverMode::Bernstein), std::invalid_argument);
    }
}

TEST_CASE("NPL component capacity") {
    SUBCASE("integer M/eps keeps the exact ceiling: factor 21") {
        auto cap10 = ln_capacity_npl_component(4, 1, 10.0, 20.0, 1.0, CoverMode::ExactVolume);
        CHECK(cap10.ln_linear_factor == doctest::Approx(std::log(21.0)).epsilon(1e-13));
    }
    SUBCASE("monotone decreasing in eps") {
        double prev = -1e300;
        for (double eps : {0.4, 0.2, 0.1, 0.05}) {
            auto cap = ln_capacity_npl_component(3, 1, 20.0, 1.0, eps, CoverMode::ExactVolume);
            double total = cap.ln_total();
            CHECK(total > prev);
            prev = total;
        }
    }
    SUBCASE("assembly from the two audited sub-calls") {
        auto cap = ln_capacity_npl_component(3, 1, 20.0, 1.0, 0.5, CoverMode::ExactVolume);
        CHECK(cap.ln_linear_factor == doctest::Approx(std::log(81.0)).epsilon(1e-13));
        CHECK(cap.ln_ball_count ==
              doctest::Approx(ln_cover_x(3, 1, 0.25, CoverMode::ExactVolume)).epsilon(1e-13));
        CHECK(cap.ln_total() ==
              doctest::Approx(std::log(81.0) +
                              std::log(2.0) * std::exp(cap.ln_ball_count)).epsilon(1e-12));
    }
}

TEST_CASE("generalized SUQR sample bound") {
    ComplexityQuery q;
    q.alpha = 0.1;
    q.delta = 0.05;
    q.targets = 3;
    q.resources = 1;
    q.big_m = 20.0;
    auto r = samples_gsuqr(q);
    // independently evaluated with 30-digit arithmetic
    CHECK(r.ln_capacity == doctest::Approx(30.804391998372112).epsilon(1e-13));
    CHECK(r.samples == doctest::Approx(826665196.34548083).epsilon(1e-12));
    CHECK(r.ln_samples == doctest::Approx(20.532910329839273).epsilon(1e-12));

    SUBCASE("doubling T strictly increases m") {
        ComplexityQuery q2 = q;
        q2.targets = 6;
        CHECK(samples_gsuqr(q2).samples > r.samples);
    }
    SUBCASE("halving alpha more than quadruples m") {
        ComplexityQuery q2 = q;
        q2.alpha = 0.05;
        CHECK(samples_gsuqr(q2).samples > 4.0 * r.samples);
    }
}

TEST_CASE("standard SUQR sample bound") {
    ComplexityQuery q;
    q.alpha = 0.1;
    q.delta = 0.05;
    q.targets = 5;
    q.resources = 2;
    q.big_m = 20.0;
    q.r_max = 10.0;
    q.p_min_abs = 10.0;
    auto r = samples_ssuqr(q);
    CHECK(r.ln_capacity == doctest::Approx(27.731698683681993).epsilon(1e-13));
    CHECK(r.samples == doctest::Approx(755870342.37502048).epsilon(1e-12));

    SUBCASE("unit feature scale drops the correction") {
        ComplexityQuery q2 = q;
        q2.r_max = 1.0;
        q2.p_min_abs = 1.0;
        double eps = q2.alpha / (96.0 * q2.targets);
        CHECK(samples_ssuqr(q2).ln_capacity ==
              doctest::Approx(3.0 * std::log(q2.big_m / (2.0 * eps))).epsilon(1e-13));
    }
    SUBCASE("never above the generalized bound for T >= 3 and r|p| >= 1") {
        Rng rng(10);
        for (int trial = 0; trial < 40; ++trial) {
            ComplexityQuery g;
            g.alpha = rng.uniform(0.02, 0.5);
            g.delta = rng.uniform(0.01, 0.5);
            g.targets = 3 + rng.uniform_int(8);
            g.resources = 1;
            g.big_m = rng.uniform(5.0, 40.0);
            g.r_max = rng.uniform(1.0, 10.0);
            g.p_min_abs = rng.uniform(1.0, 10.0);
            CHECK(samples_ssuqr(g).samples <= samples_gsuqr(g).samples + 1e-6);
        }
    }
    SUBCASE("missing feature bounds are rejected") {
        ComplexityQuery bad = q;
        bad.r_max = 0.0;
        CHECK_THROWS_AS(samples_ssuqr(bad), std::invalid_argument);
    }
}

TEST_CASE("weaker pseudo-dimension bound") {
    ComplexityQuery q;
    q.alpha = 0.1;
    q.delta = 0.05;
    q.targets = 3;
    q.resources = 1;
    q.big_m = 20.0;
    auto r = samples_gsuqr_weak(q);
    CHECK(r.ln_capacity == doctest::Approx(88.737156138883925).epsilon(1e-13));
    CHECK(r.samples == doctest::Approx(2161436082.142873).epsilon(1e-12));

    SUBCASE("dominates the direct-sum route on a grid") {
        Rng rng(20);
        for (int trial = 0; trial < 50; ++trial) {
            ComplexityQuery g;
            g.alpha = rng.uniform(0.02, 0.5);
            g.delta = rng.uniform(0.01, 0.5);
            g.targets = 2 + rng.uniform_int(10);
            g.resources = 1;
            g.big_m = rng.uniform(5.0, 40.0);
            CHECK(samples_gsuqr_weak(g).samples >= samples_gsuqr(g).samples);
        }
    }
    SUBCASE("the excess over the direct-sum route grows as alpha shrinks") {
        ComplexityQuery g = q;
        g.alpha = 0.2;
        double gap1 = samples_gsuqr_weak(g).samples - samples_gsuqr(g).samples;
        g.alpha = 0.02;
        double gap2 = samples_gsuqr_weak(g).samples - samples_gsuqr(g).samples;
        CHECK(gap2 > gap1);
        CHECK(gap1 > 0.0);
    }
}

TEST_CASE("NPL sample bound") {
    ComplexityQuery q;
    q.alpha = 0.2;
    q.delta = 0.1;
    q.targets = 4;
    q.resources = 1;
    q.big_m = 20.0;
    q.khat = 1.0;
    auto r = samples_npl(q);

    SUBCASE("composed from the audited sub-calls") {
        double eps = q.alpha / (96.0 * q.targets);
        auto cap = ln_capacity_npl_component(4, 1, 20.0, 1.0, eps, CoverMode::ExactVolume);
        double ln_c = 3.0 * cap.ln_total();
        CHECK(r.ln_capacity == doctest::Approx(ln_c).epsilon(1e-12));
        double bracket = std::log(1.0 / q.delta) + std::log(8.0) + ln_c;
        double factor = 576.0 * 400.0 / (q.alpha * q.alpha);
        CHECK(r.samples == doctest::Approx(factor * bracket).epsilon(1e-12));
        CHECK(r.ln_samples == doctest::Approx(std::log(factor * bracket)).epsilon(1e-12));
    }
    SUBCASE("matches an end-to-end 40-digit evaluation") {
        // F_4(2) = 1/2; the whole chain evaluated independently in
        // high-precision arithmetic
        CHECK(std::exp(ln_cover_x(4, 1, q.alpha / (96.0 * 4) / 2.0, CoverMode::ExactVolume)) ==
              doctest::Approx(6794772480000.0).epsilon(1e-11));
        CHECK(r.ln_capacity == doctest::Approx(14129332161208.669055).epsilon(1e-11));
        CHECK(r.samples == doctest::Approx(81384953248587174230.0).epsilon(1e-11));
        CHECK(r.ln_samples == doctest::Approx(45.845722080288581525).epsilon(1e-12));
    }
    SUBCASE("dominates the parametric bounds on a grid") {
        Rng rng(30);
        for (int trial = 0; trial < 40; ++trial) {
            ComplexityQuery g;
            g.alpha = rng.uniform(0.05, 0.5);
            g.delta = rng.uniform(0.01, 0.5);
            g.targets = 3 + rng.uniform_int(6);
            g.resources = 1;
            g.big_m = rng.uniform(5.0, 40.0);
            g.khat = rng.uniform(0.5, 5.0);
            auto npl = samples_npl(g);
            auto gs = samples_gsuqr(g);
            if (std::isinf(npl.samples)) {
                CHECK(npl.ln_samples > gs.ln_samples);
            } else {
                CHECK(npl.samples >= gs.samples);
            }
        }
    }
    SUBCASE("ln m stays finite when m overflows") {
        ComplexityQuery g = q;
        g.targets = 60;
        g.resources = 29;
        g.alpha = 0.005;
        auto res = samples_npl(g);
        CHECK(std::isinf(res.samples));
        CHECK(std::isfinite(res.ln_samples));
        CHECK(res.ln_samples > 700.0);
    }
    SUBCASE("khat is required") {
        ComplexityQuery g = q;
        g.khat = 0.0;
        CHECK_THROWS_AS(samples_npl(g), std::invalid_argument);
    }
}

TEST_CASE("all bounds decrease in alpha and delta and increase in M") {
    auto run = [](const ComplexityQuery& g) {
        return std::vector<double>{samples_gsuqr(g).ln_samples, samples_gsuqr_weak(g).ln_samples,
                                   samples_npl(g).ln_samples};
    };
    ComplexityQuery base;
    base.alpha = 0.2;
    base.delta = 0.1;
    base.targets = 4;
    base.resources = 1;
    base.big_m = 20.0;
    base.khat = 1.0;
    auto b = run(base);

    ComplexityQuery more_alpha = base;
    more_alpha.alpha = 0.3;
    auto a = run(more_alpha);
    ComplexityQuery more_delta = base;
    more_delta.delta = 0.2;
    auto d = run(more_delta);
    ComplexityQuery more_m = base;
    more_m.big_m = 30.0;
    auto m = run(more_m);
    for (int i = 0; i < 3; ++i) {
        CHECK(a[i] < b[i]);
        CHECK(d[i] < b[i]);
        CHECK(m[i] > b[i]);
    }
    ComplexityQuery more_t = base;
    more_t.targets = 5;
    CHECK(samples_gsuqr(more_t).ln_samples > b[0]);
    CHECK(samples_npl(more_t).ln_samples > b[2]);
}

TEST_CASE("rho distance") {
    SUBCASE("identical points") {
        CHECK(rho_distance({0.4, -0.3}, {0.4, -0.3}) == 0.0);
    }
    SUBCASE("hand-checkable two-target case") {
        // a = (1), b = (0): losses are (lse - a_1, lse); enumerating both
        // outcomes gives max(|ln((1+e)/2) - 1|, ln((1+e)/2)).
        double lse_a = std::log(1.0 + std::exp(1.0));
        double lse_b = std::log(2.0);
        double expect = std::max(std::fabs((lse_a - 1.0) - lse_b), std::fabs(lse_a - lse_b));
        CHECK(rho_distance({1.0}, {0.0}) == doctest::Approx(expect).epsilon(1e-13));
    }
    SUBCASE("bounded by 2 max |a_i - b_i| <= 2T average-l1 on random pairs") {
        Rng rng(40);
        for (int trial = 0; trial < 10000; ++trial) {
            int t = 2 + rng.uniform_int(7);
            std::vector<double> a(t - 1), b(t - 1);
            double max_gap = 0.0, sum_gap = 0.0;
            for (int i = 0; i < t - 1; ++i) {
                a[i] = rng.uniform(-10.0, 10.0);
                b[i] = rng.uniform(-10.0, 10.0);
                max_gap = std::max(max_gap, std::fabs(a[i] - b[i]));
                sum_gap += std::fabs(a[i] - b[i]);
            }
            double rho = rho_distance(a, b);
            double avg_l1 = sum_gap / (t - 1);
            CHECK(rho <= 2.0 * max_gap + 1e-12);
            CHECK(2.0 * max_gap <= 2.0 * t * avg_l1 + 1e-12);
        }
    }
    SUBCASE("non-finite inputs are rejected") {
        CHECK_THROWS_AS(rho_distance({std::nan("")}, {0.0}), std::invalid_argument);
    }
}
