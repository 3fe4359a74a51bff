#pragma once

// Independent reference computations for tests. Nothing here calls the library's
// transforms or SVD routines: DFTs are direct O(n^2) sums, singular values come
// from Hermitian eigendecompositions, thresholding uses JacobiSVD.

#include "itlrr/cube.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using itlrr::Cube;
using itlrr::SpectrumStack;

inline Cube random_cube(std::size_t rows, std::size_t cols, std::size_t bands, std::mt19937_64& rng,
                        double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    std::vector<double> data(rows * cols * bands);
    for (auto& v : data) v = g(rng);
    return Cube(rows, cols, bands, std::move(data));
}

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = {g(rng), g(rng)};
    return m;
}

inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, bool inverse) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

inline SpectrumStack naive_fft3(const Cube& c) {
    SpectrumStack s(c.rows(), c.cols(), c.bands());
    for (std::size_t r = 0; r < c.rows(); ++r) {
        for (std::size_t col = 0; col < c.cols(); ++col) {
            const auto t = c.tube(r, col);
            const auto f = dft(std::vector<std::complex<double>>(t.begin(), t.end()), false);
            std::copy(f.begin(), f.end(), s.tube(r, col).begin());
        }
    }
    return s;
}

inline Cube naive_ifft3_real(const SpectrumStack& s) {
    Cube c(s.rows(), s.cols(), s.bands());
    for (std::size_t r = 0; r < s.rows(); ++r) {
        for (std::size_t col = 0; col < s.cols(); ++col) {
            const auto t = s.tube(r, col);
            const auto f = dft(std::vector<std::complex<double>>(t.begin(), t.end()), true);
            for (std::size_t k = 0; k < f.size(); ++k) c(r, col, k) = f[k].real();
        }
    }
    return c;
}

// Singular values as square roots of the eigenvalues of the smaller Gram matrix.
inline Eigen::VectorXd gram_singular_values(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd gram = m.rows() >= m.cols() ? Eigen::MatrixXcd(m.adjoint() * m)
                                                       : Eigen::MatrixXcd(m * m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd sv = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(sv.data(), sv.data() + sv.size(), std::greater<>());
    return sv;
}

inline Eigen::VectorXd gram_singular_values(const Eigen::MatrixXd& m) {
    return gram_singular_values(Eigen::MatrixXcd(m.cast<std::complex<double>>()));
}

// Two-sided Jacobi singular values; accurate for rank-deficient input where the Gram route loses
// half the digits of the small values.
inline Eigen::VectorXd jacobi_singular_values(const Eigen::MatrixXd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

inline double brute_force_schatten(const Cube& c, double p) {
    const SpectrumStack s = naive_fft3(c);
    double total = 0.0;
    for (std::size_t j = 0; j < c.bands(); ++j) {
        const Eigen::VectorXd sv = gram_singular_values(Eigen::MatrixXcd(s.frontal_slice(j)));
        for (Eigen::Index k = 0; k < sv.size(); ++k) total += std::pow(sv(k), p);
    }
    return total;
}

inline Eigen::MatrixXcd jacobi_svt(const Eigen::MatrixXcd& m, double tau) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = (svd.singularValues().array() - tau).cwiseMax(0.0);
    return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

// Tensor SVT over every frequency slice, direct DFTs throughout.
inline Cube tensor_svt(const Cube& c, double tau) {
    const SpectrumStack s = naive_fft3(c);
    SpectrumStack out(c.rows(), c.cols(), c.bands());
    for (std::size_t j = 0; j < c.bands(); ++j) out.set_frontal_slice(j, jacobi_svt(s.frontal_slice(j), tau));
    return naive_ifft3_real(out);
}

// t-product by explicit circular convolution along mode 3.
inline Cube tprod(const Cube& a, const Cube& b) {
    const std::size_t n3 = a.bands();
    Cube out(a.rows(), b.cols(), n3);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            for (std::size_t k = 0; k < n3; ++k) {
                double acc = 0.0;
                for (std::size_t l = 0; l < a.cols(); ++l)
                    for (std::size_t m = 0; m < n3; ++m) acc += a(i, l, m) * b(l, j, (k + n3 - m) % n3);
                out(i, j, k) = acc;
            }
    return out;
}

// argmin_s tau*|s| + (s - x)^2 / 2 over a grid of step h on [-2|x|, 2|x|].
inline double grid_prox(double x, double tau, double h = 1e-3) {
    const double half = 2.0 * std::abs(x);
    double best_s = 0.0;
    double best = tau * 0.0 + 0.5 * x * x;
    const auto steps = static_cast<long>(std::ceil(2.0 * half / h));
    for (long i = 0; i <= steps; ++i) {
        const double s = -half + static_cast<double>(i) * h;
        const double f = tau * std::abs(s) + 0.5 * (s - x) * (s - x);
        if (f < best) {
            best = f;
            best_s = s;
        }
    }
    return best_s;
}

// Constant-tube cube: every frontal slice equals `a`.
inline Cube constant_tube_cube(const Eigen::MatrixXd& a, std::size_t bands) {
    Cube c(a.rows(), a.cols(), bands);
    for (std::size_t b = 0; b < bands; ++b) c.set_frontal_slice(b, a);
    return c;
}

}  // namespace oracle
