#include "itlrr/regions.hpp"

#include "itlrr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace itlrr {

LabelMap::LabelMap(std::size_t rows, std::size_t cols, std::vector<std::int32_t> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
    if (rows_ * cols_ != labels_.size()) fail(ErrorKind::validation, "label map size does not match its dimensions");
    if (labels_.empty()) fail(ErrorKind::validation, "label map is empty");
    if (std::any_of(labels_.begin(), labels_.end(), [](std::int32_t v) { return v < 0; })) {
        fail(ErrorKind::validation, "label map contains a negative label");
    }
}

std::size_t LabelMap::label_count() const noexcept {
    if (labels_.empty()) return 0;
    return static_cast<std::size_t>(*std::max_element(labels_.begin(), labels_.end())) + 1;
}

LabelMap compact_labels(std::size_t rows, std::size_t cols, std::span<const std::int64_t> raw) {
    if (rows * cols != raw.size()) fail(ErrorKind::validation, "label grid size does not match its dimensions");
    std::map<std::int64_t, std::int32_t> ids;
    for (std::int64_t v : raw) {
        if (v < 0) fail(ErrorKind::validation, "label map contains a negative label");
        ids.emplace(v, 0);
    }
    std::int32_t next = 0;
    for (auto& [raw_id, id] : ids) id = next++;
    std::vector<std::int32_t> labels(raw.size());
    std::transform(raw.begin(), raw.end(), labels.begin(), [&](std::int64_t v) { return ids.at(v); });
    return LabelMap(rows, cols, std::move(labels));
}

LabelMap single_region(std::size_t rows, std::size_t cols) {
    return LabelMap(rows, cols, std::vector<std::int32_t>(rows * cols, 0));
}

std::vector<Region> regions_from_labels(const LabelMap& lm) {
    const std::size_t n = lm.label_count();
    std::vector<Region> regions(n);
    std::vector<std::size_t> r_min(n, std::numeric_limits<std::size_t>::max()), c_min(r_min);
    std::vector<std::size_t> r_max(n, 0), c_max(n, 0);

    for (std::size_t r = 0; r < lm.rows(); ++r) {
        for (std::size_t c = 0; c < lm.cols(); ++c) {
            const auto id = static_cast<std::size_t>(lm(r, c));
            regions[id].pixels.push_back({r, c});
            r_min[id] = std::min(r_min[id], r);
            r_max[id] = std::max(r_max[id], r);
            c_min[id] = std::min(c_min[id], c);
            c_max[id] = std::max(c_max[id], c);
        }
    }

    for (std::size_t id = 0; id < n; ++id) {
        Region& region = regions[id];
        if (region.pixels.empty()) {
            fail(ErrorKind::validation, "label map is missing region id " + std::to_string(id) +
                                            " (ids must cover 0.." + std::to_string(n - 1) + ")");
        }
        region.id = static_cast<std::int32_t>(id);
        region.bbox = {r_min[id], c_min[id], r_max[id] - r_min[id] + 1, c_max[id] - c_min[id] + 1};
        region.mask.assign(region.bbox.height * region.bbox.width, 0);
        for (const auto& px : region.pixels) {
            region.mask[(px.row - region.bbox.row0) * region.bbox.width + (px.col - region.bbox.col0)] = 1;
        }
    }
    return regions;
}

namespace {

void require_block_shape(const Cube& block, const Region& r, std::size_t bands, const char* op) {
    if (block.rows() != r.bbox.height || block.cols() != r.bbox.width || block.bands() != bands) {
        fail(ErrorKind::validation, std::string(op) + ": block shape does not match region bounding box");
    }
}

void require_inside(const Cube& c, const Region& r, const char* op) {
    if (r.bbox.row0 + r.bbox.height > c.rows() || r.bbox.col0 + r.bbox.width > c.cols()) {
        fail(ErrorKind::validation, std::string(op) + ": region lies outside the cube");
    }
}

}  // namespace

Cube extract(const Cube& c, const Region& r, const Cube& complement) {
    require_block_shape(complement, r, c.bands(), "extract");
    require_inside(c, r, "extract");
    Cube block = complement;
    for (const auto& px : r.pixels) {
        const auto src = c.tube(px.row, px.col);
        std::copy(src.begin(), src.end(), block.tube(px.row - r.bbox.row0, px.col - r.bbox.col0).begin());
    }
    return block;
}

Cube scatter(const Cube& block, const Region& r, Cube& target) {
    require_block_shape(block, r, target.bands(), "scatter");
    require_inside(target, r, "scatter");
    Cube complement = block;
    for (const auto& px : r.pixels) {
        const std::size_t lr = px.row - r.bbox.row0;
        const std::size_t lc = px.col - r.bbox.col0;
        const auto src = block.tube(lr, lc);
        std::copy(src.begin(), src.end(), target.tube(px.row, px.col).begin());
        auto dst = complement.tube(lr, lc);
        std::fill(dst.begin(), dst.end(), 0.0);
    }
    return complement;
}

double lambda_for(const Region& r, double alpha, std::size_t bands) {
    const auto side = static_cast<double>(std::max(r.bbox.height, r.bbox.width));
    return alpha / std::sqrt(side * static_cast<double>(bands));
}

}  // namespace itlrr
