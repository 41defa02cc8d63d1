#pragma once

#include <cstdint>
#include <vector>

#include "ssg/game.hpp"
#include "ssg/optim.hpp"

namespace ssg {

// Non-parametric Lipschitz adversary model, built in two steps:
//   1. anchor MLE: the most likely exponent values h*_{ij} at the s unique
//      training strategies, subject to |h_{ij} - h_{ij'}| <= Khat ||x^j - x^{j'}||_1
//      and the box [-M/2, M/2], with the reference row h_{Tj} = 0;
//   2. extension of each component to the function of least Lipschitz
//      constant through the anchors:
//         h_i(x) = min_j { h*_{ij} + K*_i ||x - x^j||_1 },
//         K*_i   = max_{j != j'} |h*_{ij} - h*_{ij'}| / ||x^j - x^{j'}||_1.
// The extension interpolates the anchors exactly and is K*_i-Lipschitz.
struct NplModel {
    std::vector<MixedStrategy> anchors;       // s unique strategies
    std::vector<std::vector<double>> values;  // (T-1) rows x s columns, h*_{ij}
    std::vector<double> kstar;                // per-component Lipschitz constant
    double khat = 5.0;
    double big_m = 20.0;
    bool clamp = true;

    int num_targets() const { return static_cast<int>(values.size()) + 1; }
    int num_anchors() const { return static_cast<int>(anchors.size()); }

    double h_component(int i, const MixedStrategy& x) const;
    std::vector<double> exponents(const MixedStrategy& x) const;
    AttackDistribution predict(const MixedStrategy& x) const;

    // Checks the Lipschitz feasibility of the anchor values, the box, and
    // that kstar matches the defining max ratio.
    void validate() const;
};

struct AnchorFit {
    std::vector<std::vector<double>> values;  // (T-1) x s
    double objective = 0.0;
    optim::AscentResult diagnostics;
};

// Step 1: constrained anchor MLE over the aggregated dataset.
AnchorFit npl_fit_anchors(const AttackDataset& data, double khat, double big_m,
                          const optim::SolverConfig& config = {});

// Step 2: least-Lipschitz extension of fitted anchor values.
NplModel minlip_extend(std::vector<std::vector<double>> values,
                       std::vector<MixedStrategy> anchors, double khat, double big_m,
                       bool clamp = true);

NplModel npl_fit(const AttackDataset& data, double khat = 5.0, double big_m = 20.0,
                 bool clamp = true, const optim::SolverConfig& config = {});

// Anchor objective over the flattened (T-1) x s matrix (row-major), used by
// the solver and by the gradient checks.
optim::ObjectiveFn npl_anchor_objective(const AttackDataset& data);

// Projects a flattened values matrix onto the anchor-MLE feasible set.
void project_npl_feasible(std::vector<double>& flat, const std::vector<MixedStrategy>& anchors,
                          int num_targets, double khat, double big_m,
                          const optim::SolverConfig& config = {});

// Picks Khat from a grid by per-anchor cross-validation: anchors are split
// into folds, the model is fitted without a fold and scored on its records.
double cross_validate_khat(const AttackDataset& data, const std::vector<double>& grid,
                           int folds, std::uint64_t seed, double big_m = 20.0,
                           const optim::SolverConfig& config = {});

}  // namespace ssg
