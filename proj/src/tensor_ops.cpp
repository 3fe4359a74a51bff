#include "itlrr/tensor_ops.hpp"

#include "itlrr/error.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <vector>

namespace itlrr {

namespace {

constexpr double kRankCutoff = 1e-12;
constexpr int kFixedPointMaxIter = 1000;

bool is_parallel(Execution exec) { return exec == Execution::parallel; }

std::size_t conjugate_partner(std::size_t j, std::size_t bands) { return (bands - j) % bands; }

// Per-slice sum of sigma^p for the independent frequency slices, weighted by the
// number of slices sharing those singular values.
double schatten_sum(const Cube& c, double p, Execution exec) {
    const SpectrumStack spec = fft_mode3(c, exec);
    const std::size_t bands = c.bands();
    const auto half = static_cast<long>(independent_slices(bands));
    std::vector<double> per_slice(half, 0.0);

#pragma omp parallel for schedule(dynamic) if (is_parallel(exec))
    for (long j = 0; j < half; ++j) {
        const Eigen::MatrixXcd slice = spec.frontal_slice(static_cast<std::size_t>(j));
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(slice);
        const Eigen::VectorXd& sv = svd.singularValues();
        double sum = 0.0;
        for (Eigen::Index k = 0; k < sv.size(); ++k) sum += (p == 1.0) ? sv(k) : std::pow(sv(k), p);
        per_slice[j] = sum;
    }

    double total = 0.0;
    for (long j = 0; j < half; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        total += (conjugate_partner(uj, bands) != uj ? 2.0 : 1.0) * per_slice[j];
    }
    return total;
}

}  // namespace

SpectrumStack fft_mode3(const Cube& c, Execution exec) {
    SpectrumStack out(c.rows(), c.cols(), c.bands());
    const auto rows = static_cast<long>(c.rows());

#pragma omp parallel if (is_parallel(exec))
    {
        Eigen::FFT<double> fft;
        std::vector<double> in(c.bands());
        std::vector<std::complex<double>> freq;
#pragma omp for schedule(static)
        for (long r = 0; r < rows; ++r) {
            for (std::size_t col = 0; col < c.cols(); ++col) {
                const auto tube = c.tube(static_cast<std::size_t>(r), col);
                auto dst = out.tube(static_cast<std::size_t>(r), col);
                if (tube.size() == 1) {  // length-1 DFT is the identity; kissfft cannot plan it
                    dst[0] = tube[0];
                    continue;
                }
                std::copy(tube.begin(), tube.end(), in.begin());
                fft.fwd(freq, in);
                std::copy(freq.begin(), freq.end(), dst.begin());
            }
        }
    }
    return out;
}

Cube ifft_mode3(const SpectrumStack& s, double symmetry_tol, Execution exec) {
    double scale = 1.0;
    for (const auto& v : s.data()) scale = std::max(scale, std::abs(v));
    const double bound = symmetry_tol * scale;
    const std::size_t bands = s.bands();

    Cube out(s.rows(), s.cols(), bands);
    std::atomic<bool> asymmetric{false};
    const auto rows = static_cast<long>(s.rows());

#pragma omp parallel if (is_parallel(exec))
    {
        Eigen::FFT<double> fft;
        std::vector<std::complex<double>> in(bands);
        std::vector<std::complex<double>> time;
#pragma omp for schedule(static)
        for (long r = 0; r < rows; ++r) {
            for (std::size_t col = 0; col < s.cols(); ++col) {
                const auto tube = s.tube(static_cast<std::size_t>(r), col);
                for (std::size_t k = 0; k < bands; ++k) {
                    if (std::abs(tube[k] - std::conj(tube[conjugate_partner(k, bands)])) > bound) {
                        asymmetric.store(true, std::memory_order_relaxed);
                    }
                }
                auto dst = out.tube(static_cast<std::size_t>(r), col);
                if (bands == 1) {
                    dst[0] = tube[0].real();
                    continue;
                }
                std::copy(tube.begin(), tube.end(), in.begin());
                fft.inv(time, in);
                for (std::size_t k = 0; k < bands; ++k) dst[k] = time[k].real();
            }
        }
    }
    if (asymmetric.load()) {
        fail(ErrorKind::numerical, "spectrum is not conjugate-symmetric along mode 3 (corrupted spectrum)");
    }
    return out;
}

ComplexSvd complex_svd(const Eigen::MatrixXcd& m) {
    if (!m.allFinite()) fail(ErrorKind::numerical, "complex_svd: non-finite input");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) fail(ErrorKind::numerical, "complex_svd: decomposition did not converge");
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

double matrix_nuclear_norm(const Eigen::MatrixXcd& m) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().sum();
}

double matrix_nuclear_norm(const Eigen::MatrixXd& m) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().sum();
}

double tensor_nuclear_norm(const Cube& c, Execution exec) { return schatten_sum(c, 1.0, exec); }

double schatten_p_norm(const Cube& c, double p, Execution exec) {
    if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::validation, "schatten_p_norm: p must lie in (0, 1]");
    return schatten_sum(c, p, exec);
}

void ShrinkParams::validate() const {
    if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::validation, "shrinkage exponent p must lie in (0, 1]");
    if (!(mu > 0.0) || !std::isfinite(mu)) fail(ErrorKind::validation, "shrinkage penalty mu must be > 0");
}

double shrink_singular_value(double sigma, const ShrinkParams& params) {
    if (!(sigma > 0.0)) return 0.0;
    if (params.p == 1.0) return std::max(sigma - 1.0 / params.mu, 0.0);

    const double one_step = sigma - params.p * std::pow(sigma, params.p - 1.0) / params.mu;
    if (!params.fixed_point || one_step <= 0.0) return std::max(one_step, 0.0);

    // Starting from sigma the iterates decrease monotonically toward the largest
    // stationary point, or reach zero when none exists.
    double x = one_step;
    for (int it = 0; it < kFixedPointMaxIter; ++it) {
        const double next = sigma - params.p * std::pow(x, params.p - 1.0) / params.mu;
        if (next <= 0.0) return 0.0;
        if (std::abs(next - x) <= 1e-15 * sigma) return next;
        x = next;
    }
    return x;
}

Eigen::MatrixXcd p_shrink_slice(const Eigen::MatrixXcd& m, const ShrinkParams& params) {
    params.validate();
    const ComplexSvd svd = complex_svd(m);
    Eigen::VectorXd shrunk(svd.sigma.size());
    Eigen::Index kept = 0;
    for (Eigen::Index k = 0; k < svd.sigma.size(); ++k) {
        shrunk(k) = shrink_singular_value(svd.sigma(k), params);
        if (shrunk(k) > 0.0) kept = k + 1;
    }
    if (kept == 0) return Eigen::MatrixXcd::Zero(m.rows(), m.cols());
    return svd.u.leftCols(kept) * shrunk.head(kept).asDiagonal() * svd.v.leftCols(kept).adjoint();
}

Cube p_shrink_tensor(const Cube& c, const ShrinkParams& params, Execution exec) {
    params.validate();
    const SpectrumStack spec = fft_mode3(c, exec);
    const std::size_t bands = c.bands();
    const auto half = static_cast<long>(independent_slices(bands));
    SpectrumStack shrunk(c.rows(), c.cols(), bands);
    ExceptionSlot errors;

#pragma omp parallel for schedule(dynamic) if (is_parallel(exec))
    for (long j = 0; j < half; ++j) {
        errors.capture([&] {
            const auto uj = static_cast<std::size_t>(j);
            const Eigen::MatrixXcd slice = p_shrink_slice(spec.frontal_slice(uj), params);
            shrunk.set_frontal_slice(uj, slice);
            const std::size_t partner = conjugate_partner(uj, bands);
            if (partner != uj) shrunk.set_frontal_slice(partner, slice.conjugate());
        });
    }
    errors.rethrow();
    return ifft_mode3(shrunk, 1e-8, exec);
}

void soft_threshold_inplace(std::span<double> values, double tau) {
    if (!(tau >= 0.0)) fail(ErrorKind::validation, "soft_threshold: tau must be >= 0");
    for (double& v : values) {
        const double mag = std::abs(v) - tau;
        v = mag > 0.0 ? std::copysign(mag, v) : 0.0;
    }
}

Cube soft_threshold(const Cube& c, double tau) {
    Cube out = c;
    soft_threshold_inplace(out.data(), tau);
    return out;
}

Cube nuclear_subgradient(const Cube& c) {
    Cube out(c.rows(), c.cols(), c.bands());
    if (max_abs(c) == 0.0) return out;

    const Eigen::MatrixXd unfolded = c.unfold3();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(unfolded, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) fail(ErrorKind::numerical, "nuclear_subgradient: SVD did not converge");
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = kRankCutoff * sv(0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) >= cutoff) ++rank;

    out.unfold3() = svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).transpose();
    return out;
}

double unfolded_nuclear_norm(const Cube& c) {
    const Eigen::MatrixXd unfolded = c.unfold3();
    return matrix_nuclear_norm(unfolded);
}

}  // namespace itlrr
