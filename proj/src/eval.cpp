#include "itlrr/eval.hpp"

#include "itlrr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace itlrr {

void SceneSpec::validate() const {
    if (rows == 0 || cols == 0 || bands == 0) fail(ErrorKind::validation, "scene: dimensions must be positive");
    if (materials == 0) fail(ErrorKind::validation, "scene: materials must be >= 1");
    const std::size_t cells = regions == 0 ? 3 * materials : regions;
    if (cells < materials) fail(ErrorKind::validation, "scene: regions must be >= materials");
    if (cells > rows * cols) fail(ErrorKind::validation, "scene: more regions than pixels");
    if (!(corruption_rate >= 0.0 && corruption_rate <= 1.0)) {
        fail(ErrorKind::validation, "scene: corruption_rate must lie in [0, 1]");
    }
    if (!std::isfinite(corruption_magnitude)) fail(ErrorKind::validation, "scene: corruption_magnitude must be finite");
    if (!signatures.empty()) {
        if (signatures.size() != materials) fail(ErrorKind::validation, "scene: one signature per material required");
        for (std::size_t i = 0; i < signatures.size(); ++i) {
            if (static_cast<std::size_t>(signatures[i].size()) != bands) {
                fail(ErrorKind::validation, "scene: signature length must equal bands");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (signatures[i] == signatures[j]) fail(ErrorKind::validation, "scene: signatures must differ");
            }
        }
    }
}

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
        fail(ErrorKind::validation, "scene spec: bad value '" + std::string(text) + "' for key " + std::string(key));
    }
    return value;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// First `count` entries of a uniformly shuffled 0..n-1 (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(count);
    return idx;
}

}  // namespace

SceneSpec parse_scene_spec(std::string_view text) {
    SceneSpec spec;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorKind::validation, "scene spec: line " + std::to_string(line_no) + " is not key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key == "rows") spec.rows = parse_number<std::size_t>(key, value);
        else if (key == "cols") spec.cols = parse_number<std::size_t>(key, value);
        else if (key == "bands") spec.bands = parse_number<std::size_t>(key, value);
        else if (key == "materials") spec.materials = parse_number<std::size_t>(key, value);
        else if (key == "regions") spec.regions = parse_number<std::size_t>(key, value);
        else if (key == "corruption_rate") spec.corruption_rate = parse_number<double>(key, value);
        else if (key == "corruption_magnitude") spec.corruption_magnitude = parse_number<double>(key, value);
        else if (key == "seed") spec.seed = parse_number<std::uint64_t>(key, value);
        else fail(ErrorKind::validation, "scene spec: unknown key '" + std::string(key) + "'");
    }
    spec.validate();
    return spec;
}

Scene synth_scene(const SceneSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    const std::size_t k = spec.materials;
    const std::size_t pixels = spec.rows * spec.cols;

    std::vector<Eigen::VectorXd> signatures = spec.signatures;
    if (signatures.empty()) {
        std::uniform_real_distribution<double> reflectance(0.1, 1.0);
        while (signatures.size() < k) {
            Eigen::VectorXd s(spec.bands);
            for (Eigen::Index b = 0; b < s.size(); ++b) s(b) = reflectance(rng);
            s.normalize();
            const bool distinct = std::all_of(signatures.begin(), signatures.end(),
                                              [&](const Eigen::VectorXd& o) { return (o - s).norm() > 1e-3; });
            if (distinct || spec.bands == 1) signatures.push_back(std::move(s));
        }
    }

    // Voronoi cells around distinct seed pixels; cell i < k carries material i.
    const std::size_t cells = spec.regions == 0 ? 3 * k : spec.regions;
    const auto seeds = sample_without_replacement(pixels, cells, rng);
    std::vector<std::int32_t> cell_material(cells);
    std::uniform_int_distribution<std::int32_t> any_material(0, static_cast<std::int32_t>(k) - 1);
    for (std::size_t i = 0; i < cells; ++i) {
        cell_material[i] = i < k ? static_cast<std::int32_t>(i) : any_material(rng);
    }

    std::vector<std::int32_t> cell_of(pixels);
    for (std::size_t p = 0; p < pixels; ++p) {
        const auto r = static_cast<double>(p / spec.cols), c = static_cast<double>(p % spec.cols);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cells; ++i) {
            const double dr = r - static_cast<double>(seeds[i] / spec.cols);
            const double dc = c - static_cast<double>(seeds[i] % spec.cols);
            const double d = dr * dr + dc * dc;
            if (d < best) {
                best = d;
                cell_of[p] = static_cast<std::int32_t>(i);
            }
        }
    }

    Scene scene;
    scene.clean = Cube(spec.rows, spec.cols, spec.bands);
    std::vector<std::int32_t> material(pixels);
    for (std::size_t p = 0; p < pixels; ++p) {
        material[p] = cell_material[cell_of[p]];
        const Eigen::VectorXd& s = signatures[material[p]];
        auto tube = scene.clean.tube(p / spec.cols, p % spec.cols);
        for (std::size_t b = 0; b < spec.bands; ++b) tube[b] = s(b);
    }

    scene.observed = scene.clean;
    const std::size_t entries = scene.observed.size();
    const auto corrupted = static_cast<std::size_t>(std::llround(spec.corruption_rate * static_cast<double>(entries)));
    const auto where = sample_without_replacement(entries, corrupted, rng);
    std::bernoulli_distribution positive(0.5);
    auto obs = scene.observed.data();
    for (std::size_t idx : where) obs[idx] += positive(rng) ? spec.corruption_magnitude : -spec.corruption_magnitude;

    scene.truth = LabelMap(spec.rows, spec.cols, std::move(material));
    scene.regions = LabelMap(spec.rows, spec.cols, std::move(cell_of));
    return scene;
}

std::vector<std::uint8_t> stratified_train_mask(const LabelMap& truth, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) fail(ErrorKind::validation, "train fraction must lie in (0, 1]");
    const std::size_t classes = truth.label_count();
    std::vector<std::vector<std::size_t>> members(classes);
    const auto labels = truth.labels();
    for (std::size_t p = 0; p < labels.size(); ++p) members[labels[p]].push_back(p);

    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> mask(labels.size(), 0);
    for (std::size_t c = 0; c < classes; ++c) {
        if (members[c].empty()) continue;
        const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(members[c].size())));
        if (take == 0) {
            fail(ErrorKind::protocol, "class " + std::to_string(c) + " gets zero training samples (" +
                                          std::to_string(members[c].size()) + " pixels)");
        }
        for (std::size_t i = 0; i < take; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, members[c].size() - 1);
            std::swap(members[c][i], members[c][pick(rng)]);
            mask[members[c][i]] = 1;
        }
    }
    return mask;
}

std::vector<std::int32_t> knn_classify(const Cube& features, std::span<const std::uint8_t> train_mask,
                                       const LabelMap& truth, Execution exec) {
    const std::size_t n = features.pixels();
    if (truth.rows() != features.rows() || truth.cols() != features.cols() || train_mask.size() != n) {
        fail(ErrorKind::validation, "knn_classify: features, mask and truth are not aligned");
    }
    const auto labels = truth.labels();
    std::vector<std::size_t> train;
    std::vector<std::uint8_t> has_class(truth.label_count(), 0);
    for (std::size_t p = 0; p < n; ++p) {
        if (train_mask[p]) {
            train.push_back(p);
            has_class[labels[p]] = 1;
        }
    }
    for (std::size_t c = 0; c < has_class.size(); ++c) {
        if (!has_class[c]) fail(ErrorKind::protocol, "class " + std::to_string(c) + " has no training pixel");
    }

    const std::size_t bands = features.bands();
    const auto data = features.data();
    std::vector<std::int32_t> pred(labels.begin(), labels.end());
    const auto total = static_cast<long>(n);

#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (long i = 0; i < total; ++i) {
        if (train_mask[i]) continue;
        const double* xi = data.data() + static_cast<std::size_t>(i) * bands;
        double best = std::numeric_limits<double>::infinity();
        std::int32_t best_class = std::numeric_limits<std::int32_t>::max();
        for (std::size_t t : train) {
            const double* xt = data.data() + t * bands;
            double d = 0.0;
            for (std::size_t b = 0; b < bands; ++b) {
                const double diff = xi[b] - xt[b];
                d += diff * diff;
            }
            if (d < best || (d == best && labels[t] < best_class)) {
                best = d;
                best_class = labels[t];
            }
        }
        pred[i] = best_class;
    }
    return pred;
}

Metrics metrics_from_confusion(const Eigen::MatrixXi& confusion) {
    Metrics m;
    m.confusion = confusion;
    const double total = confusion.cast<double>().sum();
    if (!(total > 0.0)) fail(ErrorKind::validation, "metrics: empty confusion matrix");

    const Eigen::VectorXd rows = confusion.cast<double>().rowwise().sum();
    const Eigen::RowVectorXd cols = confusion.cast<double>().colwise().sum();
    m.oa = confusion.cast<double>().trace() / total;

    double recall_sum = 0.0;
    int present = 0;
    double pe = 0.0;
    for (Eigen::Index c = 0; c < confusion.rows(); ++c) {
        if (rows(c) > 0.0) {
            recall_sum += confusion(c, c) / rows(c);
            ++present;
        }
        pe += rows(c) * cols(c);
    }
    pe /= total * total;
    m.aa = present > 0 ? recall_sum / present : 0.0;
    if (pe >= 1.0) {
        m.kappa = 0.0;
        m.kappa_degenerate = true;
    } else {
        m.kappa = (m.oa - pe) / (1.0 - pe);
    }
    return m;
}

Metrics compute_metrics(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth,
                        std::span<const std::uint8_t> test_mask) {
    if (pred.size() != truth.size() || test_mask.size() != truth.size()) {
        fail(ErrorKind::validation, "compute_metrics: grids are not aligned");
    }
    std::int32_t top = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!test_mask[i]) continue;
        if (pred[i] < 0 || truth[i] < 0) fail(ErrorKind::validation, "compute_metrics: negative class id");
        top = std::max({top, pred[i], truth[i]});
    }
    Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(top + 1, top + 1);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (test_mask[i]) ++confusion(truth[i], pred[i]);
    }
    return metrics_from_confusion(confusion);
}

double recovery_error(const Cube& estimate, const Cube& clean) {
    if (!estimate.same_shape(clean)) fail(ErrorKind::validation, "recovery_error: shape mismatch");
    const double denom = frobenius_norm(clean);
    if (denom == 0.0) fail(ErrorKind::validation, "recovery_error: clean cube is zero");
    return frobenius_norm(estimate - clean) / denom;
}

std::vector<Metrics> evaluate_repeats(const Cube& features, const LabelMap& truth, double train_fraction,
                                      std::size_t repeats, std::uint64_t seed, Execution exec) {
    std::vector<Metrics> out;
    out.reserve(repeats);
    for (std::size_t k = 0; k < repeats; ++k) {
        const auto train = stratified_train_mask(truth, train_fraction, seed + k);
        const auto pred = knn_classify(features, train, truth, exec);
        std::vector<std::uint8_t> test(train.size());
        std::transform(train.begin(), train.end(), test.begin(), [](std::uint8_t t) -> std::uint8_t { return !t; });
        out.push_back(compute_metrics(pred, truth.labels(), test));
    }
    return out;
}

}  // namespace itlrr
