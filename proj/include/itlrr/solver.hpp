#pragma once

#include "itlrr/cube.hpp"
#include "itlrr/parallel.hpp"
#include "itlrr/regions.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace itlrr {

struct SolverConfig {
    double p = 1.0;        // Schatten exponent of the per-region norm, (0, 1]
    double alpha = 1.0;    // sparsity scale; lambda_i = alpha / sqrt(max(w_i, b_i) * bands)
    double beta = 0.0;     // weight of the negative global nuclear norm
    double rho = 1.1;      // penalty growth
    double mu0 = 1e-10;
    double mu_max = 1e10;
    double epsilon = 1e-3;  // stop when ||X - L - S||_inf <= epsilon
    std::size_t max_iter = 500;
    bool fixed_point_shrink = false;
    bool track_objective = false;
    // Initial content of every complement block (cells inside a region's bounding
    // box but outside the region).
    double complement_init = 0.0;
    Execution execution = Execution::parallel;

    void validate() const;
};

// Ablation ladder: TRPCA (one region, p = 1, beta = 0), M1 (regions, p = 1,
// beta = 0), M2 (regions, p < 1, beta = 0), full model (regions, p < 1, beta > 0).
enum class Variant { trpca, m1, m2, itlrr };

// Overrides the fields that define `variant` and leaves the rest of `base`.
[[nodiscard]] SolverConfig variant_config(Variant variant, SolverConfig base, double p_nonconvex = 0.5,
                                          double beta = 1e-3);

struct SolverState {
    Cube low_rank;                  // L
    Cube sparse;                    // S
    Cube multiplier;                // Y
    std::vector<Cube> complements;  // per-region filler of the low-rank block
    double mu = 0.0;
    std::size_t iter = 0;
    std::vector<double> residual_trace;
    std::vector<double> mu_trace;  // mu used in each iteration
    std::vector<double> objective_trace;
};

struct Decomposition {
    Cube low_rank;
    Cube sparse;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> residual_trace;
    std::vector<double> mu_trace;
    std::vector<double> objective_trace;  // empty unless track_objective
};

// ||X - L - S||_inf
[[nodiscard]] double residual(const Cube& x, const Cube& low_rank, const Cube& sparse);

// Alternating augmented-Lagrangian iteration over irregular regions. step() runs
// one full pass (linearize, low-rank update, sparse update, multiplier update)
// and returns true once the residual is within epsilon.
class RegionSolver {
public:
    RegionSolver(const Cube& x, const LabelMap& labels, SolverConfig config);

    bool step();
    [[nodiscard]] Decomposition run();

    [[nodiscard]] const SolverState& state() const noexcept { return state_; }
    [[nodiscard]] const std::vector<Region>& regions() const noexcept { return regions_; }
    [[nodiscard]] const std::vector<double>& lambdas() const noexcept { return lambdas_; }
    [[nodiscard]] const SolverConfig& config() const noexcept { return config_; }

    // Objective value at the current iterate: sum_i (||N_i||_p + lambda_i ||S_i||_1)
    // - beta * ||L_(3)||_*, N_i being the padded low-rank block of region i.
    [[nodiscard]] double objective() const;

private:
    void update_low_rank(const Cube& shifted);
    void update_sparse();

    Cube x_;
    SolverConfig config_;
    std::vector<Region> regions_;
    std::vector<double> lambdas_;
    SolverState state_;
    bool converged_ = false;
};

[[nodiscard]] Decomposition solve(const Cube& x, const LabelMap& labels, const SolverConfig& config);

struct MatrixDecomposition {
    Eigen::MatrixXd low_rank;
    Eigen::MatrixXd sparse;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> residual_trace;
};

// Matrix RPCA by inexact ALM: SVT on L, soft threshold on S, the same multiplier
// and penalty schedule as the tensor solver (p, alpha, beta are ignored).
[[nodiscard]] MatrixDecomposition rpca_matrix(const Eigen::MatrixXd& m, double lambda, const SolverConfig& config);

}  // namespace itlrr
