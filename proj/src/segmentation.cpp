#include "itlrr/segmentation.hpp"

#include "itlrr/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

namespace itlrr {

BandImage pca_first_component(const Cube& c) {
    if (c.bands() == 0 || c.pixels() == 0) fail(ErrorKind::validation, "pca_first_component: empty cube");

    const Eigen::MatrixXd spectra = c.unfold3();
    const Eigen::RowVectorXd mean = spectra.colwise().mean();
    const Eigen::MatrixXd centered = spectra.rowwise() - mean;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(c.pixels());
    if (cov.cwiseAbs().maxCoeff() == 0.0) {
        fail(ErrorKind::validation, "pca_first_component: spectral covariance is identically zero");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) fail(ErrorKind::numerical, "pca_first_component: eigensolver failed");
    Eigen::VectorXd leading = eig.eigenvectors().col(cov.rows() - 1);

    Eigen::Index pivot = 0;
    for (Eigen::Index k = 1; k < leading.size(); ++k) {
        if (std::abs(leading(k)) > std::abs(leading(pivot))) pivot = k;
    }
    if (leading(pivot) < 0.0) leading = -leading;

    const Eigen::VectorXd projection = centered * leading;
    BandImage img{c.rows(), c.cols(), std::vector<double>(projection.data(), projection.data() + projection.size())};
    return img;
}

namespace {

struct Center {
    double value;
    double row;
    double col;
};

std::vector<std::int32_t> kmeans_assign(const std::vector<double>& values, std::size_t rows, std::size_t cols,
                                        std::size_t n, const SlicOptions& options) {
    const double step = std::sqrt(static_cast<double>(rows * cols) / static_cast<double>(n));
    const auto ny = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n * rows) / static_cast<double>(cols)))), 1,
        std::min(rows, n));
    const auto nx = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(static_cast<double>(n) / static_cast<double>(ny))), 1, cols);

    std::vector<Center> centers;
    centers.reserve(ny * nx);
    for (std::size_t gy = 0; gy < ny; ++gy) {
        for (std::size_t gx = 0; gx < nx; ++gx) {
            const double r = (static_cast<double>(gy) + 0.5) * static_cast<double>(rows) / static_cast<double>(ny);
            const double c = (static_cast<double>(gx) + 0.5) * static_cast<double>(cols) / static_cast<double>(nx);
            const auto ri = std::min(rows - 1, static_cast<std::size_t>(r));
            const auto ci = std::min(cols - 1, static_cast<std::size_t>(c));
            centers.push_back({values[ri * cols + ci], r, c});
        }
    }

    const auto total = static_cast<long>(rows * cols);
    const double spatial_weight = options.compactness / step;
    std::vector<std::int32_t> assignment(rows * cols, 0);

    for (int it = 0; it < options.iterations; ++it) {
#pragma omp parallel for schedule(static) if (options.execution == Execution::parallel)
        for (long i = 0; i < total; ++i) {
            const auto r = static_cast<double>(static_cast<std::size_t>(i) / cols) + 0.5;
            const auto c = static_cast<double>(static_cast<std::size_t>(i) % cols) + 0.5;
            double best = std::numeric_limits<double>::infinity();
            std::int32_t best_k = 0;
            for (std::size_t k = 0; k < centers.size(); ++k) {
                const double d = std::abs(values[i] - centers[k].value) +
                                 spatial_weight * std::hypot(r - centers[k].row, c - centers[k].col);
                if (d < best) {
                    best = d;
                    best_k = static_cast<std::int32_t>(k);
                }
            }
            assignment[i] = best_k;
        }

        std::vector<Center> sums(centers.size(), {0.0, 0.0, 0.0});
        std::vector<std::size_t> counts(centers.size(), 0);
        for (long i = 0; i < total; ++i) {
            const auto k = static_cast<std::size_t>(assignment[i]);
            sums[k].value += values[i];
            sums[k].row += static_cast<double>(static_cast<std::size_t>(i) / cols) + 0.5;
            sums[k].col += static_cast<double>(static_cast<std::size_t>(i) % cols) + 0.5;
            ++counts[k];
        }
        for (std::size_t k = 0; k < centers.size(); ++k) {
            if (counts[k] == 0) continue;
            const auto cnt = static_cast<double>(counts[k]);
            centers[k] = {sums[k].value / cnt, sums[k].row / cnt, sums[k].col / cnt};
        }
    }
    return assignment;
}

// Keeps the largest 4-connected component of every cluster; the remaining
// components are absorbed, repeatedly, into the largest adjacent kept region.
std::vector<std::int32_t> enforce_connectivity(const std::vector<std::int32_t>& assignment, std::size_t rows,
                                               std::size_t cols) {
    const std::size_t total = rows * cols;
    std::vector<std::int32_t> comp(total, -1);
    std::vector<std::size_t> comp_size;
    std::vector<std::int32_t> comp_cluster;

    std::deque<std::size_t> queue;
    for (std::size_t start = 0; start < total; ++start) {
        if (comp[start] >= 0) continue;
        const auto id = static_cast<std::int32_t>(comp_size.size());
        comp_size.push_back(0);
        comp_cluster.push_back(assignment[start]);
        comp[start] = id;
        queue.push_back(start);
        while (!queue.empty()) {
            const std::size_t p = queue.front();
            queue.pop_front();
            ++comp_size[id];
            const std::size_t r = p / cols, c = p % cols;
            const std::size_t nbrs[4] = {r > 0 ? p - cols : total, r + 1 < rows ? p + cols : total,
                                         c > 0 ? p - 1 : total, c + 1 < cols ? p + 1 : total};
            for (std::size_t q : nbrs) {
                if (q == total || comp[q] >= 0 || assignment[q] != assignment[start]) continue;
                comp[q] = id;
                queue.push_back(q);
            }
        }
    }

    const std::size_t ncomp = comp_size.size();
    std::vector<std::set<std::int32_t>> adjacent(ncomp);
    for (std::size_t p = 0; p < total; ++p) {
        const std::size_t r = p / cols, c = p % cols;
        if (r + 1 < rows && comp[p] != comp[p + cols]) {
            adjacent[comp[p]].insert(comp[p + cols]);
            adjacent[comp[p + cols]].insert(comp[p]);
        }
        if (c + 1 < cols && comp[p] != comp[p + 1]) {
            adjacent[comp[p]].insert(comp[p + 1]);
            adjacent[comp[p + 1]].insert(comp[p]);
        }
    }

    // Largest component per cluster (earliest in scan order on ties) survives.
    std::vector<std::int32_t> keeper_of_cluster;
    for (std::size_t k = 0; k < ncomp; ++k) {
        const auto cl = static_cast<std::size_t>(comp_cluster[k]);
        if (cl >= keeper_of_cluster.size()) keeper_of_cluster.resize(cl + 1, -1);
        const std::int32_t cur = keeper_of_cluster[cl];
        if (cur < 0 || comp_size[k] > comp_size[cur]) keeper_of_cluster[cl] = static_cast<std::int32_t>(k);
    }

    std::vector<std::int32_t> region_of(ncomp, -1);
    std::vector<std::size_t> region_size;
    for (std::size_t k = 0; k < ncomp; ++k) {
        if (keeper_of_cluster[comp_cluster[k]] == static_cast<std::int32_t>(k)) {
            region_of[k] = static_cast<std::int32_t>(region_size.size());
            region_size.push_back(comp_size[k]);
        }
    }

    bool pending = true;
    while (pending) {
        pending = false;
        for (std::size_t k = 0; k < ncomp; ++k) {
            if (region_of[k] >= 0) continue;
            std::int32_t target = -1;
            for (std::int32_t nb : adjacent[k]) {
                const std::int32_t reg = region_of[nb];
                if (reg < 0) continue;
                if (target < 0 || region_size[reg] > region_size[target] ||
                    (region_size[reg] == region_size[target] && reg < target)) {
                    target = reg;
                }
            }
            if (target < 0) {
                pending = true;
                continue;
            }
            region_of[k] = target;
            region_size[target] += comp_size[k];
        }
    }

    // Renumber in order of first appearance.
    std::vector<std::int32_t> renumber(region_size.size(), -1);
    std::int32_t next = 0;
    std::vector<std::int32_t> labels(total);
    for (std::size_t p = 0; p < total; ++p) {
        const std::int32_t reg = region_of[comp[p]];
        if (renumber[reg] < 0) renumber[reg] = next++;
        labels[p] = renumber[reg];
    }
    return labels;
}

}  // namespace

LabelMap slic_segment(const BandImage& img, std::size_t n, const SlicOptions& options) {
    const std::size_t total = img.rows * img.cols;
    if (total == 0 || img.values.size() != total) fail(ErrorKind::validation, "slic_segment: malformed image");
    if (n < 1 || n > total) {
        fail(ErrorKind::validation, "slic_segment: region count must lie in 1..rows*cols");
    }
    if (!(options.compactness > 0.0)) fail(ErrorKind::validation, "slic_segment: compactness must be > 0");

    const auto [lo, hi] = std::minmax_element(img.values.begin(), img.values.end());
    const double range = *hi - *lo;
    std::vector<double> values(total, 0.0);
    if (range > 0.0) {
        std::transform(img.values.begin(), img.values.end(), values.begin(),
                       [&](double v) { return (v - *lo) / range; });
    }

    const auto assignment = kmeans_assign(values, img.rows, img.cols, n, options);
    return LabelMap(img.rows, img.cols, enforce_connectivity(assignment, img.rows, img.cols));
}

LabelMap parse_labelmap_csv(std::string_view text) {
    std::vector<std::int64_t> raw;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
            while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
            while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
            std::int64_t v = 0;
            const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
                fail(ErrorKind::validation, "label file: non-integer label '" + std::string(field) + "' on row " +
                                                std::to_string(rows + 1));
            }
            raw.push_back(v);
            ++count;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (rows == 0) {
            cols = count;
        } else if (count != cols) {
            fail(ErrorKind::validation, "label file: ragged rows (row " + std::to_string(rows + 1) + " has " +
                                            std::to_string(count) + " labels, expected " + std::to_string(cols) + ")");
        }
        ++rows;
        if (eol == text.size()) break;
    }
    if (rows == 0) fail(ErrorKind::validation, "label file: no rows");
    return compact_labels(rows, cols, raw);
}

}  // namespace itlrr
