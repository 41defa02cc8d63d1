#include "ssg/complexity.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ssg::complexity {

namespace {

constexpr int kExactLimit = 30;
constexpr double kInf = std::numeric_limits<double>::infinity();

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Alternating-sum evaluation guarded with Kahan compensation in quad
// precision; the raw terms cancel by tens of orders of magnitude.
double irwin_hall_cdf_float(int t, int k) {
    using Quad = boost::multiprecision::cpp_bin_float_quad;
    Quad sum = 0;
    Quad comp = 0;
    for (int j = 0; j <= k; ++j) {
        Quad term = Quad(binomial(t, j)) * pow(Quad(k - j), t);
        if (j % 2 == 1) term = -term;
        Quad y = term - comp;
        Quad s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    Quad result = sum / Quad(factorial(t));
    if (result < 0) result = 0;
    if (result > 1) result = 1;
    return result.convert_to<double>();
}

}  // namespace

std::vector<BigInt> eulerian_numbers(int t) {
    if (t < 1 || t > kExactLimit)
        throw std::invalid_argument(
            "eulerian_numbers: exact mode requires 1 <= T <= 30; use the log-space covering "
            "routines for larger T");
    std::vector<BigInt> row{1};
    for (int n = 2; n <= t; ++n) {
        std::vector<BigInt> next(n);
        for (int k = 0; k < n; ++k) {
            next[k] = 0;
            if (k < n - 1) next[k] += BigInt(k + 1) * row[k];
            if (k >= 1) next[k] += BigInt(n - k) * row[k - 1];
        }
        row = std::move(next);
    }
    return row;
}

BigRational irwin_hall_cdf_exact(int t, int k) {
    if (t < 1 || t > kExactLimit)
        throw std::invalid_argument("irwin_hall_cdf_exact: requires 1 <= T <= 30");
    if (k < 0 || k > t) throw std::invalid_argument("irwin_hall_cdf: k must lie in [0, T]");
    BigInt num = 0;
    for (int j = 0; j <= k; ++j) {
        BigInt term = binomial(t, j) * boost::multiprecision::pow(BigInt(k - j), t);
        num += (j % 2 == 0) ? term : -term;
    }
    return BigRational(num, factorial(t));
}

double irwin_hall_cdf(int t, int k) {
    if (t < 1) throw std::invalid_argument("irwin_hall_cdf: T must be positive");
    if (k < 0 || k > t) throw std::invalid_argument("irwin_hall_cdf: k must lie in [0, T]");
    if (t <= kExactLimit) return irwin_hall_cdf_exact(t, k).convert_to<double>();
    return irwin_hall_cdf_float(t, k);
}

double ln_irwin_hall_cdf(int t, int k) {
    double v = irwin_hall_cdf(t, k);
    if (v <= 0.0) return -kInf;
    return std::log(v);
}

double ln_cover_x(int t, int k_resources, double eps, CoverMode mode) {
    if (t < 2) throw std::invalid_argument("ln_cover_x: T must be at least 2");
    if (k_resources < 1 || k_resources >= t)
        throw std::invalid_argument("ln_cover_x: resources must satisfy 1 <= K < T");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("ln_cover_x: eps must lie in (0,1)");
    const double kp1 = k_resources + 1;
    if (mode == CoverMode::Bernstein) {
        if (kp1 > 0.5 * t)
            throw std::invalid_argument("ln_cover_x: Bernstein form requires K+1 <= T/2");
        double ratio = kp1 / t;
        double exponent = -3.0 * t * (0.5 - ratio) * (0.5 - ratio) / (1.0 - ratio);
        return exponent - t * std::log(2.0 * eps);
    }
    return ln_irwin_hall_cdf(t, k_resources + 1) - t * std::log(2.0 * eps);
}

double NplComponentCapacity::ln_total() const {
    // ln[(linear) * 2^N] = ln_linear + N ln 2, N = exp(ln_ball_count).
    return ln_linear_factor + std::log(2.0) * std::exp(ln_ball_count);
}

NplComponentCapacity ln_capacity_npl_component(int t, int k_resources, double big_m, double khat,
                                               double eps, CoverMode mode) {
    if (big_m <= 0 || khat <= 0)
        throw std::invalid_argument("ln_capacity_npl_component: M and khat must be positive");
    if (eps <= 0) throw std::invalid_argument("ln_capacity_npl_component: eps must be positive");
    NplComponentCapacity cap;
    cap.ln_linear_factor = std::log(2.0 * std::ceil(big_m / eps) + 1.0);
    cap.ln_ball_count = ln_cover_x(t, k_resources, eps / (2.0 * khat), mode);
    return cap;
}

void ComplexityQuery::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("ComplexityQuery: alpha must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("ComplexityQuery: delta must lie in (0,1)");
    if (targets < 2) throw std::invalid_argument("ComplexityQuery: need at least 2 targets");
    if (resources < 1 || resources >= targets)
        throw std::invalid_argument("ComplexityQuery: resources must satisfy 1 <= K < T");
    if (big_m <= 0) throw std::invalid_argument("ComplexityQuery: M must be positive");
}

namespace {

double capacity_radius(const ComplexityQuery& q) { return q.alpha / (96.0 * q.targets); }

// Assembles Theorem-2 style results for a finite ln-capacity.
ComplexityResult assemble(const ComplexityQuery& q, double ln_capacity, double order_term) {
    ComplexityResult r;
    r.ln_capacity = ln_capacity;
    double factor = 576.0 * q.big_m * q.big_m / (q.alpha * q.alpha);
    double bracket = std::log(1.0 / q.delta) + std::log(8.0) + ln_capacity;
    r.samples = factor * bracket;
    r.ln_samples = std::log(factor) + std::log(bracket);
    r.order_term = order_term;
    return r;
}

}  // namespace

ComplexityResult samples_gsuqr(const ComplexityQuery& q) {
    q.validate();
    double eps = capacity_radius(q);
    double ln_capacity = q.targets * std::log(q.big_m / (2.0 * eps));
    double order = (std::log(1.0 / q.delta) + q.targets * std::log(q.targets / q.alpha)) /
                   (q.alpha * q.alpha);
    return assemble(q, ln_capacity, order);
}

ComplexityResult samples_ssuqr(const ComplexityQuery& q) {
    q.validate();
    if (q.r_max <= 0 || q.p_min_abs <= 0)
        throw std::invalid_argument("samples_ssuqr: r_max and |p_min| must be positive");
    double eps = capacity_radius(q);
    double ln_capacity = 3.0 * std::log(q.big_m / (2.0 * eps)) - std::log(q.r_max * q.p_min_abs);
    double order =
        (std::log(1.0 / q.delta) + std::log(q.targets / q.alpha)) / (q.alpha * q.alpha);
    return assemble(q, ln_capacity, order);
}

ComplexityResult samples_npl(const ComplexityQuery& q) {
    q.validate();
    if (q.khat <= 0) throw std::invalid_argument("samples_npl: khat must be positive");
    double eps = capacity_radius(q);
    NplComponentCapacity cap =
        ln_capacity_npl_component(q.targets, q.resources, q.big_m, q.khat, eps, q.cover_mode);

    // ln C = (T-1)(ln_linear + N ln 2) with N = e^{ln_ball_count}. The
    // bracket of Theorem 2 is A + B N; for large N go through logs so that
    // ln m survives even when m itself overflows.
    const double rows = q.targets - 1;
    const double a_term = std::log(8.0 / q.delta) + rows * cap.ln_linear_factor;
    const double b_term = rows * std::log(2.0);
    const double ln_n = cap.ln_ball_count;

    ComplexityResult r;
    r.ln_capacity = rows * cap.ln_total();  // may round to +inf
    double factor = 576.0 * q.big_m * q.big_m / (q.alpha * q.alpha);
    double n_balls = std::exp(ln_n);
    double bracket = a_term + b_term * n_balls;  // may overflow
    r.samples = factor * bracket;
    if (std::isfinite(bracket)) {
        r.ln_samples = std::log(factor) + std::log(bracket);
    } else {
        // bracket ~ B e^{ln_n}: ln(bracket) = ln_n + ln B + ln(1 + A e^-ln_n / B)
        r.ln_samples = std::log(factor) + ln_n + std::log(b_term) +
                       std::log1p(a_term * std::exp(-ln_n) / b_term);
    }
    double order = (std::log(1.0 / q.delta) +
                    std::pow(q.targets, q.targets + 1) / std::pow(q.alpha, q.targets)) /
                   (q.alpha * q.alpha);
    r.order_term = order;
    return r;
}

ComplexityResult samples_gsuqr_weak(const ComplexityQuery& q) {
    q.validate();
    double eps = capacity_radius(q);
    if (std::exp(1.0) * q.big_m / eps <= 1.0)
        throw std::invalid_argument("samples_gsuqr_weak: radius too large for the bound");
    double l = std::log(std::exp(1.0) * q.big_m / eps);
    double ln_capacity = q.targets * std::log(2.0) + 2.0 * q.targets * (l + std::log(l));
    double order = (std::log(1.0 / q.delta) +
                    q.targets * std::log((q.targets / q.alpha) * std::log(q.targets / q.alpha))) /
                   (q.alpha * q.alpha);
    return assemble(q, ln_capacity, order);
}

double rho_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("rho_distance: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw std::invalid_argument("rho_distance: inputs must be finite");
    auto lse0 = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double vi : v) m = std::max(m, vi);
        double s = std::exp(-m);
        for (double vi : v) s += std::exp(vi - m);
        return m + std::log(s);
    };
    const double la = lse0(a);
    const double lb = lse0(b);
    // Loss of outcome i is lse - a_i for i < T, and lse alone for the
    // reference target.
    double worst = std::fabs(la - lb);
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::fabs((la - a[i]) - (lb - b[i])));
    return worst;
}

}  // namespace ssg::complexity
