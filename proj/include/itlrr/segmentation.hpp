#pragma once

#include "itlrr/cube.hpp"
#include "itlrr/parallel.hpp"
#include "itlrr/regions.hpp"

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

namespace itlrr {

struct BandImage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major

    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const noexcept { return values[r * cols + c]; }
};

// Projection of every mean-centred pixel spectrum onto the leading eigenvector of
// the band covariance. The eigenvector's largest-magnitude entry is made positive
// (lowest band index on ties). Throws ErrorKind::validation for a constant cube.
[[nodiscard]] BandImage pca_first_component(const Cube& c);

struct SlicOptions {
    double compactness = 0.1;  // weight of (spatial distance / grid step) against |value difference|
    int iterations = 10;
    Execution execution = Execution::parallel;
};

// Superpixels on a single band: k-means in (value, row, col) with grid-seeded
// centres, then connectivity enforcement. Values are normalized to [0, 1] first.
// Produces between 1 and 2n connected regions, ids assigned in scan order.
[[nodiscard]] LabelMap slic_segment(const BandImage& img, std::size_t n, const SlicOptions& options = {});

// Label files: CSV of non-negative integers (one line per image row) or the binary
// "ITL1" layout. Ids are compacted to 0..n-1.
[[nodiscard]] LabelMap load_labelmap(const std::filesystem::path& path);
[[nodiscard]] LabelMap parse_labelmap_csv(std::string_view text);

}  // namespace itlrr
