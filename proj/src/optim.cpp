#include "ssg/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssg::optim {

void SolverConfig::validate() const {
    if (max_iters == 0 || grad_tol <= 0 || obj_tol <= 0 || armijo_c <= 0 ||
        projection_tol <= 0 || projection_max_cycles == 0)
        throw std::invalid_argument("SolverConfig: all tolerances and caps must be positive");
    if (backtrack_factor <= 0.0 || backtrack_factor >= 1.0)
        throw std::invalid_argument("SolverConfig: backtrack_factor must lie in (0,1)");
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) {
    return std::sqrt(dot(a, a));
}

double linf_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

double capped_sum(const std::vector<double>& v, double lambda) {
    double s = 0.0;
    for (double vi : v) s += clip01(vi - lambda);
    return s;
}

}  // namespace

std::vector<double> project_capped_simplex(const std::vector<double>& v, double cap) {
    if (cap <= 0.0) throw std::invalid_argument("project_capped_simplex: cap must be positive");
    std::vector<double> x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x[i] = clip01(v[i]);
    double total = 0.0;
    for (double xi : x) total += xi;
    if (total <= cap) return x;

    // sum_i clip01(v_i - lambda) is non-increasing in lambda; it exceeds cap
    // at lambda = 0 and reaches 0 at lambda = max(v).
    double lo = 0.0;
    double hi = *std::max_element(v.begin(), v.end());
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (capped_sum(v, mid) > cap)
            lo = mid;
        else
            hi = mid;
    }
    double lambda = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < v.size(); ++i) x[i] = clip01(v[i] - lambda);
    return x;
}

std::pair<double, double> project_pairwise_band(double a, double b, double c) {
    if (c < 0.0) throw std::invalid_argument("project_pairwise_band: c must be nonnegative");
    double gap = a - b;
    if (std::fabs(gap) <= c) return {a, b};
    double shift = (std::fabs(gap) - c) / 2.0;
    double s = gap > 0 ? 1.0 : -1.0;
    return {a - s * shift, b + s * shift};
}

std::pair<double, double> project_l1_ball_2d(double a, double b, double r) {
    if (r < 0.0) throw std::invalid_argument("project_l1_ball_2d: radius must be nonnegative");
    double aa = std::fabs(a), ab = std::fabs(b);
    if (aa + ab <= r) return {a, b};
    // Project (|a|, |b|) onto the simplex {p + q = r, p, q >= 0}.
    double p = std::min(r, std::max(0.0, (aa - ab + r) / 2.0));
    double q = r - p;
    double sa = a < 0 ? -1.0 : 1.0;
    double sb = b < 0 ? -1.0 : 1.0;
    return {sa * p, sb * q};
}

DykstraResult dykstra(std::vector<double>& x,
                      const std::vector<std::function<void(std::vector<double>&)>>& projectors,
                      double tol, std::size_t max_cycles) {
    DykstraResult res;
    if (projectors.empty()) {
        res.converged = true;
        return res;
    }
    if (projectors.size() == 1) {
        projectors[0](x);
        res.converged = true;
        res.cycles = 1;
        return res;
    }
    std::vector<std::vector<double>> increments(projectors.size(),
                                                std::vector<double>(x.size(), 0.0));
    std::vector<double> y(x.size()), prev(x.size());
    for (std::size_t cycle = 0; cycle < max_cycles; ++cycle) {
        prev = x;
        // The iterates can plateau while the correction vectors still move,
        // so the stopping test tracks both.
        double change = 0.0;
        for (std::size_t s = 0; s < projectors.size(); ++s) {
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + increments[s][i];
            std::vector<double> z = y;
            projectors[s](z);
            for (std::size_t i = 0; i < x.size(); ++i) {
                double inc = y[i] - z[i];
                change = std::max(change, std::fabs(inc - increments[s][i]));
                increments[s][i] = inc;
            }
            x = std::move(z);
        }
        res.cycles = cycle + 1;
        res.last_change = std::max(change, linf_distance(prev, x));
        if (res.last_change <= tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

AscentResult projected_gradient_ascent(const ObjectiveFn& objective,
                                       const ProjectFn& project,
                                       std::vector<double> init,
                                       const SolverConfig& config) {
    config.validate();
    AscentResult res;
    std::vector<double> x = std::move(init);
    std::vector<double> grad(x.size());
    double f = objective(x, &grad);
    if (!std::isfinite(f)) throw std::runtime_error("projected_gradient_ascent: non-finite objective");

    double step = 1.0;
    int stall_count = 0;
    std::vector<double> prev_x, prev_grad;
    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        res.iterations = iter + 1;

        // Unit-step gradient mapping, the stationarity measure on the set.
        std::vector<double> probe(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) probe[i] = x[i] + grad[i];
        project(probe);
        double residual = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double d = probe[i] - x[i];
            residual += d * d;
        }
        res.grad_residual = std::sqrt(residual);
        if (res.grad_residual <= config.grad_tol) {
            res.converged = true;
            res.stop_reason = "grad_tol";
            break;
        }

        // Armijo backtracking along the projected arc.
        bool accepted = false;
        double f_new = f;
        std::vector<double> x_new;
        for (int bt = 0; bt < 80; ++bt) {
            x_new.assign(x.size(), 0.0);
            for (std::size_t i = 0; i < x.size(); ++i) x_new[i] = x[i] + step * grad[i];
            project(x_new);
            std::vector<double> dir(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) dir[i] = x_new[i] - x[i];
            double gd = dot(grad, dir);
            f_new = objective(x_new, nullptr);
            if (!std::isfinite(f_new))
                throw std::runtime_error("projected_gradient_ascent: non-finite objective");
            if (f_new >= f + config.armijo_c * gd && f_new >= f) {
                accepted = true;
                break;
            }
            step *= config.backtrack_factor;
        }
        if (!accepted) {
            // No ascent found down to vanishing steps: the objective is at
            // its floating-point floor along the projected ray.
            res.converged = true;
            res.stop_reason = "line_search_floor";
            break;
        }

        double change = std::fabs(f_new - f);
        double x_change = linf_distance(x, x_new);
        double x_scale = 0.0;
        for (double xi : x_new) x_scale = std::max(x_scale, std::fabs(xi));
        prev_x = std::move(x);
        prev_grad = grad;
        x = std::move(x_new);
        f = f_new;
        objective(x, &grad);

        // Barzilai-Borwein spectral step as the next trial step; plain
        // doubling crawls on ill-conditioned likelihoods. The Armijo
        // backtracking above keeps every accepted step an ascent step.
        double sy = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double dx = x[i] - prev_x[i];
            sy += dx * (prev_grad[i] - grad[i]);
            ss += dx * dx;
        }
        if (sy > 1e-300 && ss > 0)
            step = std::min(std::max(ss / sy, 1e-12), 1e12);
        else
            step = std::min(step * 2.0, 1e8);

        // A stall requires both the objective and the iterate to be frozen;
        // a frozen objective alone still allows linear progress in the
        // gradient.
        if (change <= config.obj_tol * (1.0 + std::fabs(f)) &&
            x_change <= 1e3 * config.obj_tol * (1.0 + x_scale)) {
            if (++stall_count >= 5) {
                res.converged = true;
                res.stop_reason = "obj_tol";
                break;
            }
        } else {
            stall_count = 0;
        }
    }
    if (res.stop_reason.empty()) res.stop_reason = "max_iters";
    res.x = std::move(x);
    res.value = f;
    return res;
}

double finite_diff_check(const std::function<double(const std::vector<double>&)>& objective,
                         const std::vector<double>& analytic_grad,
                         const std::vector<double>& point, double step) {
    double worst = 0.0;
    std::vector<double> p = point;
    for (std::size_t i = 0; i < point.size(); ++i) {
        p[i] = point[i] + step;
        double fp = objective(p);
        p[i] = point[i] - step;
        double fm = objective(p);
        p[i] = point[i];
        double diff = (fp - fm) / (2.0 * step);
        double rel = std::fabs(diff - analytic_grad[i]) / std::max(std::fabs(diff), 1e-8);
        worst = std::max(worst, rel);
    }
    return worst;
}

}  // namespace ssg::optim
