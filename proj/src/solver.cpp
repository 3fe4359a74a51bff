#include "itlrr/solver.hpp"

#include "itlrr/error.hpp"
#include "itlrr/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace itlrr {

void SolverConfig::validate() const {
    if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::validation, "solver: p must lie in (0, 1]");
    if (!(alpha > 0.0)) fail(ErrorKind::validation, "solver: alpha must be > 0");
    if (!(beta >= 0.0)) fail(ErrorKind::validation, "solver: beta must be >= 0");
    if (!(rho > 1.0)) fail(ErrorKind::validation, "solver: rho must be > 1");
    if (!(mu0 > 0.0)) fail(ErrorKind::validation, "solver: mu0 must be > 0");
    if (!(mu_max >= mu0)) fail(ErrorKind::validation, "solver: mu_max must be >= mu0");
    if (!(epsilon > 0.0)) fail(ErrorKind::validation, "solver: epsilon must be > 0");
    if (max_iter < 1) fail(ErrorKind::validation, "solver: max_iter must be >= 1");
    if (!std::isfinite(complement_init)) fail(ErrorKind::validation, "solver: complement_init must be finite");
}

SolverConfig variant_config(Variant variant, SolverConfig base, double p_nonconvex, double beta) {
    switch (variant) {
        case Variant::trpca:
        case Variant::m1:
            base.p = 1.0;
            base.beta = 0.0;
            break;
        case Variant::m2:
            base.p = p_nonconvex;
            base.beta = 0.0;
            break;
        case Variant::itlrr:
            base.p = p_nonconvex;
            base.beta = beta;
            break;
    }
    return base;
}

double residual(const Cube& x, const Cube& low_rank, const Cube& sparse) {
    if (!x.same_shape(low_rank) || !x.same_shape(sparse)) fail(ErrorKind::validation, "residual: shape mismatch");
    const auto xd = x.data(), ld = low_rank.data(), sd = sparse.data();
    double m = 0.0;
    for (std::size_t i = 0; i < xd.size(); ++i) m = std::max(m, std::abs(xd[i] - ld[i] - sd[i]));
    return m;
}

RegionSolver::RegionSolver(const Cube& x, const LabelMap& labels, SolverConfig config)
    : x_(x), config_(config) {
    config_.validate();
    if (!all_finite(x)) fail(ErrorKind::validation, "solver: input cube contains non-finite values");
    if (labels.rows() != x.rows() || labels.cols() != x.cols()) {
        fail(ErrorKind::validation, "solver: label map " + std::to_string(labels.rows()) + "x" +
                                        std::to_string(labels.cols()) + " does not match cube " +
                                        std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
    }
    regions_ = regions_from_labels(labels);
    lambdas_.reserve(regions_.size());
    state_.complements.reserve(regions_.size());
    for (const Region& r : regions_) {
        lambdas_.push_back(lambda_for(r, config_.alpha, x.bands()));
        Cube filler(r.bbox.height, r.bbox.width, x.bands());
        if (config_.complement_init != 0.0) std::fill(filler.data().begin(), filler.data().end(), config_.complement_init);
        state_.complements.push_back(std::move(filler));
    }
    state_.low_rank = Cube(x.rows(), x.cols(), x.bands());
    state_.sparse = Cube(x.rows(), x.cols(), x.bands());
    state_.multiplier = Cube(x.rows(), x.cols(), x.bands());
    state_.mu = config_.mu0;
}

void RegionSolver::update_low_rank(const Cube& shifted) {
    const ShrinkParams shrink{config_.p, state_.mu, config_.fixed_point_shrink};
    const auto count = static_cast<long>(regions_.size());
    // Parallelize over regions when there are enough of them, otherwise over the
    // frequency slices inside each region.
    const bool parallel = config_.execution == Execution::parallel;
    const bool outer = parallel && count >= max_threads() && count > 1;
    const Execution inner = (parallel && !outer) ? Execution::parallel : Execution::serial;

    ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic) if (outer)
    for (long i = 0; i < count; ++i) {
        errors.capture([&] {
            const Region& r = regions_[i];
            const Cube block = extract(shifted, r, state_.complements[i]);
            const Cube shrunk = p_shrink_tensor(block, shrink, inner);
            state_.complements[i] = scatter(shrunk, r, state_.low_rank);
        });
    }
    errors.rethrow();
}

void RegionSolver::update_sparse() {
    const double mu = state_.mu;
    const std::size_t bands = x_.bands();
    const auto count = static_cast<long>(regions_.size());

#pragma omp parallel for schedule(dynamic) if (config_.execution == Execution::parallel && count > 1)
    for (long i = 0; i < count; ++i) {
        const double tau = lambdas_[i] / mu;
        for (const PixelCoord& px : regions_[i].pixels) {
            const auto xt = x_.tube(px.row, px.col);
            const auto lt = state_.low_rank.tube(px.row, px.col);
            const auto yt = state_.multiplier.tube(px.row, px.col);
            auto st = state_.sparse.tube(px.row, px.col);
            for (std::size_t b = 0; b < bands; ++b) st[b] = xt[b] - lt[b] + yt[b] / mu;
            soft_threshold_inplace(st, tau);
        }
    }
}

bool RegionSolver::step() {
    if (converged_) return true;
    const double mu = state_.mu;
    const std::size_t iteration = state_.iter + 1;

    // A = X - S + (Y + beta * T) / mu
    Cube shifted(x_.rows(), x_.cols(), x_.bands());
    {
        auto a = shifted.data();
        const auto xd = x_.data(), sd = state_.sparse.data(), yd = state_.multiplier.data();
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = xd[k] - sd[k] + yd[k] / mu;
        if (config_.beta > 0.0) {
            const Cube t = nuclear_subgradient(state_.low_rank);
            const auto td = t.data();
            const double w = config_.beta / mu;
            for (std::size_t k = 0; k < a.size(); ++k) a[k] += w * td[k];
        }
    }

    update_low_rank(shifted);
    update_sparse();

    double res = 0.0;
    {
        auto yd = state_.multiplier.data();
        const auto xd = x_.data(), ld = state_.low_rank.data(), sd = state_.sparse.data();
        for (std::size_t k = 0; k < yd.size(); ++k) {
            const double r = xd[k] - ld[k] - sd[k];
            res = std::max(res, std::abs(r));
            yd[k] += mu * r;
        }
    }
    if (!std::isfinite(res) || !all_finite(state_.multiplier)) {
        fail(ErrorKind::numerical, "solver: non-finite values at iteration " + std::to_string(iteration));
    }

    state_.iter = iteration;
    state_.residual_trace.push_back(res);
    state_.mu_trace.push_back(mu);
    if (config_.track_objective) state_.objective_trace.push_back(objective());
    state_.mu = std::min(config_.rho * mu, config_.mu_max);

    converged_ = res <= config_.epsilon;
    return converged_;
}

double RegionSolver::objective() const {
    double total = 0.0;
    const std::size_t bands = x_.bands();
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        const Region& r = regions_[i];
        const Cube block = extract(state_.low_rank, r, state_.complements[i]);
        total += schatten_p_norm(block, config_.p, Execution::serial);
        double l1 = 0.0;
        for (const PixelCoord& px : r.pixels) {
            for (std::size_t b = 0; b < bands; ++b) l1 += std::abs(state_.sparse(px.row, px.col, b));
        }
        total += lambdas_[i] * l1;
    }
    if (config_.beta > 0.0) total -= config_.beta * unfolded_nuclear_norm(state_.low_rank);
    return total;
}

Decomposition RegionSolver::run() {
    while (state_.iter < config_.max_iter && !step()) {
    }
    Decomposition d;
    d.low_rank = state_.low_rank;
    d.sparse = state_.sparse;
    d.converged = converged_;
    d.iterations = state_.iter;
    d.residual_trace = state_.residual_trace;
    d.mu_trace = state_.mu_trace;
    d.objective_trace = state_.objective_trace;
    return d;
}

Decomposition solve(const Cube& x, const LabelMap& labels, const SolverConfig& config) {
    RegionSolver solver(x, labels, config);
    return solver.run();
}

namespace {

Eigen::MatrixXd singular_value_threshold(const Eigen::MatrixXd& m, double tau) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) fail(ErrorKind::numerical, "rpca_matrix: SVD did not converge");
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index kept = 0;
    while (kept < sv.size() && sv(kept) > tau) ++kept;
    if (kept == 0) return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    const Eigen::VectorXd shrunk = sv.head(kept).array() - tau;
    return svd.matrixU().leftCols(kept) * shrunk.asDiagonal() * svd.matrixV().leftCols(kept).transpose();
}

}  // namespace

MatrixDecomposition rpca_matrix(const Eigen::MatrixXd& m, double lambda, const SolverConfig& config) {
    config.validate();
    if (!(lambda > 0.0)) fail(ErrorKind::validation, "rpca_matrix: lambda must be > 0");
    if (!m.allFinite()) fail(ErrorKind::validation, "rpca_matrix: non-finite input");

    MatrixDecomposition out;
    out.low_rank = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    out.sparse = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    double mu = config.mu0;

    while (out.iterations < config.max_iter) {
        out.low_rank = singular_value_threshold(m - out.sparse + y / mu, 1.0 / mu);
        const double tau = lambda / mu;
        out.sparse = (m - out.low_rank + y / mu).unaryExpr([tau](double v) {
            const double mag = std::abs(v) - tau;
            return mag > 0.0 ? std::copysign(mag, v) : 0.0;
        });
        const Eigen::MatrixXd r = m - out.low_rank - out.sparse;
        y += mu * r;
        const double res = r.cwiseAbs().maxCoeff();
        ++out.iterations;
        if (!std::isfinite(res)) {
            fail(ErrorKind::numerical, "rpca_matrix: non-finite values at iteration " + std::to_string(out.iterations));
        }
        out.residual_trace.push_back(res);
        mu = std::min(config.rho * mu, config.mu_max);
        if (res <= config.epsilon) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace itlrr
