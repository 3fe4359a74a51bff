#include "itlrr/reference.hpp"

#include "itlrr/error.hpp"

#include <cmath>
#include <limits>

namespace itlrr::reference {

Cube p_shrink_tensor(const Cube& c, const ShrinkParams& params) {
    params.validate();
    const SpectrumStack spec = fft_mode3(c, Execution::serial);
    SpectrumStack shrunk(c.rows(), c.cols(), c.bands());
    for (std::size_t j = 0; j < c.bands(); ++j) {
        shrunk.set_frontal_slice(j, p_shrink_slice(spec.frontal_slice(j), params));
    }
    return ifft_mode3(shrunk, 1e-8, Execution::serial);
}

double schatten_p_norm(const Cube& c, double p) {
    if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::validation, "schatten_p_norm: p must lie in (0, 1]");
    const SpectrumStack spec = fft_mode3(c, Execution::serial);
    double total = 0.0;
    for (std::size_t j = 0; j < c.bands(); ++j) {
        const ComplexSvd svd = complex_svd(spec.frontal_slice(j));
        for (Eigen::Index k = 0; k < svd.sigma.size(); ++k) total += std::pow(svd.sigma(k), p);
    }
    return total;
}

std::vector<std::int32_t> knn_classify(const Cube& features, std::span<const std::uint8_t> train_mask,
                                       std::span<const std::int32_t> truth) {
    const std::size_t n = features.pixels();
    const std::size_t bands = features.bands();
    std::vector<std::int32_t> pred(truth.begin(), truth.end());
    const auto data = features.data();
    for (std::size_t i = 0; i < n; ++i) {
        if (train_mask[i]) continue;
        double best = std::numeric_limits<double>::infinity();
        std::int32_t best_class = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (!train_mask[t]) continue;
            double d = 0.0;
            for (std::size_t b = 0; b < bands; ++b) {
                const double diff = data[i * bands + b] - data[t * bands + b];
                d += diff * diff;
            }
            if (d < best || (d == best && truth[t] < best_class)) {
                best = d;
                best_class = truth[t];
            }
        }
        pred[i] = best_class;
    }
    return pred;
}

}  // namespace itlrr::reference
