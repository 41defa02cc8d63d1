#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssg::optim {

// Raised by the fitting routines when the iteration cap is reached; keeps
// the last iterate and its gradient-mapping residual for diagnosis.
struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(const std::string& what, std::vector<double> iterate, double residual)
        : std::runtime_error(what), last_iterate(std::move(iterate)), grad_residual(residual) {}
    std::vector<double> last_iterate;
    double grad_residual = 0.0;
};

struct SolverConfig {
    std::size_t max_iters = 100000;
    double grad_tol = 1e-7;
    double obj_tol = 1e-10;           // relative objective change
    double armijo_c = 1e-4;
    double backtrack_factor = 0.5;
    double projection_tol = 1e-10;
    std::size_t projection_max_cycles = 1000;
    int jobs = 1;

    void validate() const;
};

// Euclidean projection onto {x in [0,1]^T : sum x_i <= K}. Bisection on the
// dual variable of the sum constraint, with box clipping inside the scan.
std::vector<double> project_capped_simplex(const std::vector<double>& v, double cap);

// Nearest (a', b') with |a' - b'| <= c. Both points move toward the mean by
// half the violation.
std::pair<double, double> project_pairwise_band(double a, double b, double c);

// Projection of (a, b) onto {|u| + |v| <= r}.
std::pair<double, double> project_l1_ball_2d(double a, double b, double r);

// Dykstra's alternating projections onto the intersection of convex sets,
// each given by an exact projector acting in place.
struct DykstraResult {
    bool converged = false;
    std::size_t cycles = 0;
    double last_change = 0.0;
};
DykstraResult dykstra(std::vector<double>& x,
                      const std::vector<std::function<void(std::vector<double>&)>>& projectors,
                      double tol, std::size_t max_cycles);

// f(x) with the gradient written to *grad when non-null.
using ObjectiveFn = std::function<double(const std::vector<double>&, std::vector<double>*)>;
using ProjectFn = std::function<void(std::vector<double>&)>;

struct AscentResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    double grad_residual = 0.0;       // norm of the unit-step gradient mapping
    bool converged = false;
    std::string stop_reason;
};

// Maximizes a smooth concave objective over a convex set by projected
// gradient ascent with Armijo backtracking. The objective sequence is
// non-decreasing; termination on the projected-gradient residual, on
// stalled relative objective change, or at the iteration cap.
AscentResult projected_gradient_ascent(const ObjectiveFn& objective,
                                       const ProjectFn& project,
                                       std::vector<double> init,
                                       const SolverConfig& config = {});

// Worst-coordinate relative error between an analytic gradient and central
// finite differences, relative to the difference estimate.
double finite_diff_check(const std::function<double(const std::vector<double>&)>& objective,
                         const std::vector<double>& analytic_grad,
                         const std::vector<double>& point, double step);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
double linf_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ssg::optim
