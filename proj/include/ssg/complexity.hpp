#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace ssg::complexity {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Eulerian numbers <T,0> .. <T,T-1> (descent counts), exact. T in [1, 30];
// larger T must go through the log-space covering routines instead.
std::vector<BigInt> eulerian_numbers(int t);

// Irwin-Hall CDF F_T(k) = P(U_1 + ... + U_T <= k) at integer k in [0, T].
// Exact rationals up to T = 30; a compensated floating alternating sum past
// that (the terms cancel catastrophically without the guard).
BigRational irwin_hall_cdf_exact(int t, int k);
double irwin_hall_cdf(int t, int k);
double ln_irwin_hall_cdf(int t, int k);  // -inf at k = 0

enum class CoverMode { ExactVolume, Bernstein };

// ln of the l_inf covering-number bound for the strategy space
// X = {x in [0,1]^T : sum x_i <= K}. ExactVolume uses F_T(K+1)/(2 eps)^T;
// Bernstein replaces the volume with the concentration bound and requires
// K+1 <= T/2. ExactVolume is never larger where both are defined.
double ln_cover_x(int t, int k_resources, double eps, CoverMode mode = CoverMode::ExactVolume);

// One NPL component capacity: (2 ceil(M/eps) + 1) * 2^{N(eps/2Khat, X, l_inf)}.
// The tower exponent is kept in log form; ln_total() may round to +inf for
// extreme inputs, the fields never do.
struct NplComponentCapacity {
    double ln_linear_factor = 0.0;  // ln(2 ceil(M/eps) + 1)
    double ln_ball_count = 0.0;     // ln N(eps/2Khat, X, l_inf)
    double ln_total() const;
};
NplComponentCapacity ln_capacity_npl_component(int t, int k_resources, double big_m, double khat,
                                               double eps, CoverMode mode = CoverMode::ExactVolume);

struct ComplexityQuery {
    double alpha = 0.1;
    double delta = 0.05;
    int targets = 0;
    int resources = 1;
    double big_m = 20.0;
    double khat = 0.0;       // NPL only
    double r_max = 0.0;      // standard SUQR only
    double p_min_abs = 0.0;  // standard SUQR only, |p_min|
    CoverMode cover_mode = CoverMode::ExactVolume;

    void validate() const;
};

// Sample bound m = (576 M^2 / alpha^2) (ln 1/delta + ln 8 + ln C), with the
// capacity evaluated at the fixed radius alpha / 96T. All model-specific
// calculators only swap the capacity. `samples` may round to +inf for the
// non-parametric class; ln_samples stays finite far beyond that point.
struct ComplexityResult {
    double ln_capacity = 0.0;
    double samples = 0.0;
    double ln_samples = 0.0;
    double order_term = 0.0;  // the bare O(.) argument, reported alongside
};

ComplexityResult samples_gsuqr(const ComplexityQuery& q);      // C = (M/2eps)^T
ComplexityResult samples_ssuqr(const ComplexityQuery& q);      // C = (M/2eps)^3 / (r_max |p_min|)
ComplexityResult samples_npl(const ComplexityQuery& q);        // C = component^(T-1)
ComplexityResult samples_gsuqr_weak(const ComplexityQuery& q); // pseudo-dimension route

// rho(a, b) = max_y |l(y,a) - l(y,b)| by enumerating all T outcomes of the
// log loss; a and b are (T-1)-vectors of exponents.
double rho_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ssg::complexity
