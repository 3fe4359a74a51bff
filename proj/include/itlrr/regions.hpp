#pragma once

#include "itlrr/cube.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace itlrr {

// Per-pixel region ids, row-major. Ids are non-negative; regions_from_labels
// additionally requires every id in 0..n-1 to occur.
class LabelMap {
public:
    LabelMap() = default;
    LabelMap(std::size_t rows, std::size_t cols, std::vector<std::int32_t> labels);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] std::int32_t operator()(std::size_t r, std::size_t c) const noexcept {
        return labels_[r * cols_ + c];
    }
    [[nodiscard]] std::span<const std::int32_t> labels() const noexcept { return labels_; }
    // max id + 1
    [[nodiscard]] std::size_t label_count() const noexcept;

    bool operator==(const LabelMap&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int32_t> labels_;
};

// Relabels arbitrary non-negative ids to 0..n-1 in ascending order of the original id.
[[nodiscard]] LabelMap compact_labels(std::size_t rows, std::size_t cols, std::span<const std::int64_t> raw);

// Every pixel in one region (the TRPCA configuration).
[[nodiscard]] LabelMap single_region(std::size_t rows, std::size_t cols);

struct PixelCoord {
    std::size_t row = 0;
    std::size_t col = 0;
    bool operator==(const PixelCoord&) const = default;
};

struct BoundingBox {
    std::size_t row0 = 0;
    std::size_t col0 = 0;
    std::size_t height = 0;  // w
    std::size_t width = 0;   // b
    bool operator==(const BoundingBox&) const = default;
};

struct Region {
    std::int32_t id = 0;
    std::vector<PixelCoord> pixels;  // row-major scan order
    BoundingBox bbox;
    std::vector<std::uint8_t> mask;  // height x width, row-major, 1 = occupied

    [[nodiscard]] bool occupied(std::size_t local_row, std::size_t local_col) const noexcept {
        return mask[local_row * bbox.width + local_col] != 0;
    }
};

// One Region per id, ascending. Throws ErrorKind::validation when some id in
// 0..max is missing.
[[nodiscard]] std::vector<Region> regions_from_labels(const LabelMap& lm);

// Padded block (bbox x bands): occupied cells from `c`, the rest from `complement`.
[[nodiscard]] Cube extract(const Cube& c, const Region& r, const Cube& complement);

// Writes the occupied cells of `block` into `target` and returns the complement
// cells (occupied cells zeroed) for reuse as the next iteration's filler.
Cube scatter(const Cube& block, const Region& r, Cube& target);

// alpha / sqrt(max(height, width) * bands)
[[nodiscard]] double lambda_for(const Region& r, double alpha, std::size_t bands);

}  // namespace itlrr
