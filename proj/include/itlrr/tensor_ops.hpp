#pragma once

#include "itlrr/cube.hpp"
#include "itlrr/parallel.hpp"

#include <Eigen/Dense>

namespace itlrr {

// Mode-3 transforms. Forward is the unnormalized DFT of every tube; the inverse
// carries the 1/bands factor, so the tensor nuclear norm is a plain sum over
// frequency slices.
[[nodiscard]] SpectrumStack fft_mode3(const Cube& c, Execution exec = Execution::parallel);

// Throws ErrorKind::numerical when the stack is not conjugate-symmetric along mode 3
// within `symmetry_tol` (relative to the largest magnitude, floor 1). The imaginary
// residue of the inverse is discarded.
[[nodiscard]] Cube ifft_mode3(const SpectrumStack& s, double symmetry_tol = 1e-8,
                              Execution exec = Execution::parallel);

// Number of frequency slices whose SVDs determine all others under conjugate symmetry.
[[nodiscard]] constexpr std::size_t independent_slices(std::size_t bands) noexcept { return bands / 2 + 1; }

struct ComplexSvd {
    Eigen::MatrixXcd u;     // m x k, orthonormal columns
    Eigen::VectorXd sigma;  // k = min(m, n), non-increasing
    Eigen::MatrixXcd v;     // n x k, orthonormal columns
};

[[nodiscard]] ComplexSvd complex_svd(const Eigen::MatrixXcd& m);

[[nodiscard]] double matrix_nuclear_norm(const Eigen::MatrixXcd& m);
[[nodiscard]] double matrix_nuclear_norm(const Eigen::MatrixXd& m);

// Sum of singular values of every frequency slice of fft_mode3(c).
[[nodiscard]] double tensor_nuclear_norm(const Cube& c, Execution exec = Execution::parallel);

// Sum of sigma^p over every frequency slice; p in (0, 1]. Identical to
// tensor_nuclear_norm at p = 1.
[[nodiscard]] double schatten_p_norm(const Cube& c, double p, Execution exec = Execution::parallel);

struct ShrinkParams {
    double p = 1.0;   // Schatten exponent in (0, 1]
    double mu = 1.0;  // penalty; the per-slice weight is p * sigma^(p-1) / mu
    // Iterate the weight to its fixed point x = (sigma - p x^(p-1) / mu)_+ instead of
    // evaluating it once at the observed singular values.
    bool fixed_point = false;

    void validate() const;
};

// Shrinks one singular value; zero input (or a weight that exceeds it) yields zero.
[[nodiscard]] double shrink_singular_value(double sigma, const ShrinkParams& params);

// Weighted singular value thresholding of a single (frequency) slice.
[[nodiscard]] Eigen::MatrixXcd p_shrink_slice(const Eigen::MatrixXcd& m, const ShrinkParams& params);

// fft_mode3 -> p_shrink_slice on each independent slice (mirrored onto its
// conjugate partner) -> ifft_mode3.
[[nodiscard]] Cube p_shrink_tensor(const Cube& c, const ShrinkParams& params, Execution exec = Execution::parallel);

// Elementwise sign(x) * max(|x| - tau, 0).
[[nodiscard]] Cube soft_threshold(const Cube& c, double tau);
void soft_threshold_inplace(std::span<double> values, double tau);

// U * V^T of the thin SVD of the mode-3 unfolding, folded back to a cube. Singular
// triplets with sigma < 1e-12 * sigma_max are dropped; the zero cube maps to zero.
[[nodiscard]] Cube nuclear_subgradient(const Cube& c);

// Nuclear norm of the mode-3 unfolding.
[[nodiscard]] double unfolded_nuclear_norm(const Cube& c);

}  // namespace itlrr
