#include "itlrr/cli.hpp"

#include "itlrr/error.hpp"
#include "itlrr/eval.hpp"
#include "itlrr/io.hpp"
#include "itlrr/segmentation.hpp"
#include "itlrr/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace itlrr::cli {

namespace {

constexpr std::array<Preset, 4> kPresets{{
    {"indian-pines", 0.1, 30, 1e-7, 1e-5},
    {"salinas", 0.1, 20, 1e-6, 1e-2},
    {"pavia", 0.1, 10, 5e-6, 1e-6},
    {"longkou", 0.7, 10, 5e-4, 1e-5},
}};

struct SegmentArgs {
    std::string in;
    std::string out;
    std::size_t regions = 1;
    double compactness = 0.1;
};

struct DecomposeArgs {
    std::string in;
    std::string labels;
    std::string out_low;
    std::string out_sparse;
    std::string trace;
    std::string preset;
    std::optional<double> p, alpha, beta, rho, mu0, mu_max, epsilon;
    std::optional<std::size_t> max_iter, regions, regions_override;
    double compactness = 0.1;
    bool fixed_point_shrink = false;
    bool objective = false;
};

struct SynthArgs {
    std::string spec;
    std::string out_observed;
    std::string out_clean;
    std::string out_truth;
    std::string out_regions;
};

struct EvalArgs {
    std::string in;
    std::string truth;
    std::string out;
    double train_fraction = 0.1;
    std::size_t repeats = 20;
    std::uint64_t seed = 0;
};

LabelMap segment_cube(const Cube& x, std::size_t regions, double compactness) {
    if (regions == 1) return single_region(x.rows(), x.cols());
    return slic_segment(pca_first_component(x), regions, {.compactness = compactness});
}

void cmd_segment(const SegmentArgs& a) {
    const Cube x = read_cube(a.in);
    write_labels(a.out, segment_cube(x, a.regions, a.compactness));
}

void cmd_decompose(const DecomposeArgs& a) {
    SolverConfig cfg;
    std::optional<std::size_t> regions;
    if (!a.preset.empty()) {
        const auto preset = find_preset(a.preset);
        if (!preset) fail(ErrorKind::validation, "unknown preset '" + a.preset + "'");
        cfg.p = preset->p;
        cfg.alpha = preset->alpha;
        cfg.beta = preset->beta;
        regions = preset->regions;
    }
    if (a.p) cfg.p = *a.p;
    if (a.alpha) cfg.alpha = *a.alpha;
    if (a.beta) cfg.beta = *a.beta;
    if (a.rho) cfg.rho = *a.rho;
    if (a.mu0) cfg.mu0 = *a.mu0;
    if (a.mu_max) cfg.mu_max = *a.mu_max;
    if (a.epsilon) cfg.epsilon = *a.epsilon;
    if (a.max_iter) cfg.max_iter = *a.max_iter;
    if (a.regions) regions = a.regions;
    cfg.fixed_point_shrink = a.fixed_point_shrink;
    cfg.track_objective = a.objective;
    cfg.validate();

    const Cube x = read_cube(a.in);
    LabelMap labels;
    if (a.regions_override) {
        labels = segment_cube(x, *a.regions_override, a.compactness);
    } else if (!a.labels.empty()) {
        labels = load_labelmap(a.labels);
    } else {
        labels = segment_cube(x, regions.value_or(1), a.compactness);
    }

    const Decomposition d = solve(x, labels, cfg);
    write_cube(a.out_low, d.low_rank);
    write_cube(a.out_sparse, d.sparse);
    if (!a.trace.empty()) write_file(a.trace, encode_trace_csv(d));
}

void cmd_synth(const SynthArgs& a) {
    const SceneSpec spec = parse_scene_spec(read_file(a.spec));
    const Scene scene = synth_scene(spec);
    write_cube(a.out_observed, scene.observed);
    write_cube(a.out_clean, scene.clean);
    write_labels(a.out_truth, scene.truth);
    if (!a.out_regions.empty()) write_labels(a.out_regions, scene.regions);
}

void cmd_eval(const EvalArgs& a, std::ostream& err) {
    const Cube features = read_cube(a.in);
    const LabelMap truth = load_labelmap(a.truth);
    if (truth.rows() != features.rows() || truth.cols() != features.cols()) {
        fail(ErrorKind::validation, "truth grid does not match the cube's spatial size");
    }
    if (a.repeats == 0) fail(ErrorKind::validation, "--repeats must be >= 1");
    const auto runs = evaluate_repeats(features, truth, a.train_fraction, a.repeats, a.seed);

    std::string csv = "repeat,oa,aa,kappa\n";
    char buf[160];
    double oa = 0.0, aa = 0.0, kappa = 0.0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const Metrics& m = runs[k];
        if (m.kappa_degenerate) err << "warning: repeat " << k << ": expected agreement is 1, kappa set to 0\n";
        const int n = std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", k, m.oa, m.aa, m.kappa);
        csv.append(buf, static_cast<std::size_t>(n));
        oa += m.oa;
        aa += m.aa;
        kappa += m.kappa;
    }
    const auto count = static_cast<double>(runs.size());
    const int n = std::snprintf(buf, sizeof buf, "mean,%.17g,%.17g,%.17g\n", oa / count, aa / count, kappa / count);
    csv.append(buf, static_cast<std::size_t>(n));
    write_file(a.out, csv);
}

void apply_thread_env() {
    const char* env = std::getenv("ITLRR_THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long threads = std::strtol(env, &end, 10);
    if (*end != '\0' || threads < 0) fail(ErrorKind::validation, "ITLRR_THREADS must be a non-negative integer");
    set_thread_limit(static_cast<int>(threads));
}

}  // namespace

std::span<const Preset> presets() noexcept { return kPresets; }

std::optional<Preset> find_preset(std::string_view name) noexcept {
    const auto it = std::find_if(kPresets.begin(), kPresets.end(), [&](const Preset& p) { return p.name == name; });
    if (it == kPresets.end()) return std::nullopt;
    return *it;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Irregular tensor low-rank representation of hyperspectral cubes", "itlrr"};
    app.require_subcommand(1);

    SegmentArgs seg;
    auto* segment = app.add_subcommand("segment", "PCA + superpixel segmentation of a cube into a label file");
    segment->add_option("--in", seg.in, "input cube file")->required();
    segment->add_option("--out", seg.out, "output label file (.itl for binary, CSV otherwise)")->required();
    segment->add_option("--regions,-n", seg.regions, "target number of superpixels")->check(CLI::PositiveNumber);
    segment->add_option("--compactness", seg.compactness, "spatial weight of the superpixel distance");

    DecomposeArgs dec;
    auto* decompose = app.add_subcommand("decompose", "low-rank + sparse decomposition over irregular regions");
    decompose->add_option("--in", dec.in, "input cube file")->required();
    decompose->add_option("--labels", dec.labels, "region label file");
    decompose->add_option("--out-low", dec.out_low, "output low-rank cube")->required();
    decompose->add_option("--out-sparse", dec.out_sparse, "output sparse cube")->required();
    decompose->add_option("--trace", dec.trace, "output CSV trace (iter,residual,mu[,objective])");
    decompose->add_option("--preset", dec.preset, "indian-pines | salinas | pavia | longkou");
    decompose->add_option("--p", dec.p, "Schatten exponent in (0, 1]");
    decompose->add_option("--alpha", dec.alpha, "sparsity scale");
    decompose->add_option("--beta", dec.beta, "weight of the negative global nuclear norm");
    decompose->add_option("--rho", dec.rho, "penalty growth factor");
    decompose->add_option("--mu0", dec.mu0, "initial penalty");
    decompose->add_option("--mu-max", dec.mu_max, "penalty cap");
    decompose->add_option("--epsilon", dec.epsilon, "stopping tolerance on ||X - L - S||_inf");
    decompose->add_option("--max-iter", dec.max_iter, "iteration cap");
    decompose->add_option("--regions", dec.regions, "superpixel count when no label file is given");
    decompose->add_option("--regions-override", dec.regions_override,
                          "ignore --labels and segment into this many regions (1 = whole image)");
    decompose->add_option("--compactness", dec.compactness, "spatial weight of the superpixel distance");
    decompose->add_flag("--fixed-point-shrink", dec.fixed_point_shrink, "solve the reweighted shrinkage to its fixed point");
    decompose->add_flag("--objective", dec.objective, "record the objective value per iteration");

    SynthArgs syn;
    auto* synth = app.add_subcommand("synth", "generate a synthetic corrupted scene");
    synth->add_option("--spec", syn.spec, "key=value scene description")->required();
    synth->add_option("--out-observed", syn.out_observed, "observed cube")->required();
    synth->add_option("--out-clean", syn.out_clean, "clean cube")->required();
    synth->add_option("--out-truth", syn.out_truth, "material class grid")->required();
    synth->add_option("--out-regions", syn.out_regions, "true irregular region labels");

    EvalArgs ev;
    auto* evaluate = app.add_subcommand("eval", "1-NN classification accuracy (OA, AA, kappa) of a representation");
    evaluate->add_option("--in", ev.in, "feature cube (e.g. the low-rank output)")->required();
    evaluate->add_option("--truth", ev.truth, "class grid")->required();
    evaluate->add_option("--out", ev.out, "metrics CSV")->required();
    evaluate->add_option("--train-fraction", ev.train_fraction, "training fraction per class");
    evaluate->add_option("--repeats", ev.repeats, "number of random training draws");
    evaluate->add_option("--seed", ev.seed, "seed of the first training draw");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "E_USAGE: " << e.what() << '\n';
        return 2;
    }

    try {
        apply_thread_env();
        if (segment->parsed()) cmd_segment(seg);
        else if (decompose->parsed()) cmd_decompose(dec);
        else if (synth->parsed()) cmd_synth(syn);
        else if (evaluate->parsed()) cmd_eval(ev, err);
        return 0;
    } catch (const Error& e) {
        err << error_code(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "E_NUMERIC: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace itlrr::cli
