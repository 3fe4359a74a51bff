#pragma once

// Straightforward serial versions of the hot kernels. They process every
// frequency slice independently (no conjugate mirroring) and run on one thread;
// tests compare the parallel kernels against them and bench_kernels times both.

#include "itlrr/cube.hpp"
#include "itlrr/tensor_ops.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace itlrr::reference {

[[nodiscard]] Cube p_shrink_tensor(const Cube& c, const ShrinkParams& params);

[[nodiscard]] double schatten_p_norm(const Cube& c, double p);

// 1-nearest-neighbour over all training pixels, lowest class id on ties.
[[nodiscard]] std::vector<std::int32_t> knn_classify(const Cube& features, std::span<const std::uint8_t> train_mask,
                                                     std::span<const std::int32_t> truth);

}  // namespace itlrr::reference
