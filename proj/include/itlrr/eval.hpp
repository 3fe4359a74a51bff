#pragma once

#include "itlrr/cube.hpp"
#include "itlrr/parallel.hpp"
#include "itlrr/regions.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace itlrr {

struct SceneSpec {
    std::size_t rows = 40;
    std::size_t cols = 40;
    std::size_t bands = 16;
    std::size_t materials = 3;
    // Irregular (Voronoi) cells; each cell holds one material. 0 selects 3 * materials.
    std::size_t regions = 0;
    double corruption_rate = 0.05;
    double corruption_magnitude = 1.0;
    std::uint64_t seed = 0;
    // Unit-norm material spectra; generated from the seed when empty.
    std::vector<Eigen::VectorXd> signatures;

    void validate() const;
};

// Flat "key = value" text; '#' starts a comment. Keys: rows, cols, bands,
// materials, regions, corruption_rate, corruption_magnitude, seed.
[[nodiscard]] SceneSpec parse_scene_spec(std::string_view text);

struct Scene {
    Cube observed;
    Cube clean;
    LabelMap truth;    // material id per pixel
    LabelMap regions;  // Voronoi cell per pixel
};

// clean(pixel) = signature of its material; observed = clean plus exactly
// round(rate * rows*cols*bands) entries offset by +/- magnitude. Deterministic in seed.
[[nodiscard]] Scene synth_scene(const SceneSpec& spec);

// Stratified draw without replacement: round(fraction * count) training pixels
// per class. Throws ErrorKind::protocol when a class would get none.
[[nodiscard]] std::vector<std::uint8_t> stratified_train_mask(const LabelMap& truth, double fraction,
                                                              std::uint64_t seed);

// Each non-training pixel takes the class of its Euclidean-nearest training
// spectrum (lowest class id on ties); training pixels keep their own class.
[[nodiscard]] std::vector<std::int32_t> knn_classify(const Cube& features, std::span<const std::uint8_t> train_mask,
                                                     const LabelMap& truth, Execution exec = Execution::parallel);

struct Metrics {
    Eigen::MatrixXi confusion;  // rows = true class, cols = predicted class
    double oa = 0.0;
    double aa = 0.0;
    double kappa = 0.0;
    bool kappa_degenerate = false;  // expected agreement was 1; kappa reported as 0
};

[[nodiscard]] Metrics metrics_from_confusion(const Eigen::MatrixXi& confusion);

// Confusion over pixels with test_mask set; class count = max id + 1 over truth and pred.
[[nodiscard]] Metrics compute_metrics(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth,
                                      std::span<const std::uint8_t> test_mask);

// ||estimate - clean||_F / ||clean||_F
[[nodiscard]] double recovery_error(const Cube& estimate, const Cube& clean);

// Repeated train/test protocol: repeat k uses stratified_train_mask(seed + k).
[[nodiscard]] std::vector<Metrics> evaluate_repeats(const Cube& features, const LabelMap& truth, double train_fraction,
                                                    std::size_t repeats, std::uint64_t seed,
                                                    Execution exec = Execution::parallel);

}  // namespace itlrr
