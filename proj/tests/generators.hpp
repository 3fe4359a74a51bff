#pragma once

// Random inputs shared by the unit tests and the acceptance suite.

#include "itlrr/cube.hpp"
#include "itlrr/regions.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace gen {

using itlrr::Cube;
using itlrr::LabelMap;

// Arbitrary partition: each pixel gets one of `ids` raw ids, then ids are compacted.
// Regions may be disconnected, which the region machinery must still handle.
inline LabelMap random_labelmap(std::size_t rows, std::size_t cols, std::size_t ids, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> pick(0, static_cast<std::int64_t>(ids) - 1);
    std::vector<std::int64_t> raw(rows * cols);
    for (auto& v : raw) v = pick(rng) * 5 + 3;
    return itlrr::compact_labels(rows, cols, raw);
}

// Connected-looking partition: nearest of a few random seeds.
inline LabelMap random_voronoi(std::size_t rows, std::size_t cols, std::size_t seeds, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> rr(0, rows - 1), cc(0, cols - 1);
    std::vector<std::pair<double, double>> centres(seeds);
    for (auto& c : centres) c = {static_cast<double>(rr(rng)), static_cast<double>(cc(rng))};
    std::vector<std::int64_t> raw(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            std::size_t best = 0;
            double best_d = 1e300;
            for (std::size_t i = 0; i < seeds; ++i) {
                const double dr = static_cast<double>(r) - centres[i].first;
                const double dc = static_cast<double>(c) - centres[i].second;
                if (dr * dr + dc * dc < best_d) {
                    best_d = dr * dr + dc * dc;
                    best = i;
                }
            }
            raw[r * cols + c] = static_cast<std::int64_t>(best);
        }
    return itlrr::compact_labels(rows, cols, raw);
}

// Sum of `rank` t-products P_k * Q_k with P: n1 x 1 x n3, Q: 1 x n2 x n3 entries drawn from N(0, scale^2).
inline Cube low_tubal_rank(std::size_t n1, std::size_t n2, std::size_t n3, std::size_t rank, double scale,
                           std::mt19937_64& rng) {
    Cube out(n1, n2, n3);
    for (std::size_t k = 0; k < rank; ++k) {
        const Cube p = oracle::random_cube(n1, 1, n3, rng, scale);
        const Cube q = oracle::random_cube(1, n2, n3, rng, scale);
        out = out + oracle::tprod(p, q);
    }
    return out;
}

// Exactly round(rate * size) entries set to +-magnitude, the rest zero.
inline Cube sparse_corruption(std::size_t n1, std::size_t n2, std::size_t n3, double rate, double magnitude,
                              std::mt19937_64& rng) {
    Cube s(n1, n2, n3);
    std::vector<std::size_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto count = static_cast<std::size_t>(std::llround(rate * static_cast<double>(s.size())));
    std::bernoulli_distribution sign(0.5);
    for (std::size_t i = 0; i < count; ++i) s.data()[idx[i]] = sign(rng) ? magnitude : -magnitude;
    return s;
}

}  // namespace gen
