// Serial reference vs OpenMP kernels: wall-clock timings and agreement.
//
//   bench_kernels [repeats]
//
// ITLRR_THREADS limits the thread count of the parallel path.

#include "itlrr/eval.hpp"
#include "itlrr/parallel.hpp"
#include "itlrr/reference.hpp"
#include "itlrr/solver.hpp"
#include "itlrr/tensor_ops.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

using namespace itlrr;

namespace {

double best_of(int repeats, const std::function<void()>& body) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto start = std::chrono::steady_clock::now();
        body();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

Cube random_cube(std::size_t rows, std::size_t cols, std::size_t bands, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> v(rows * cols * bands);
    for (auto& x : v) x = g(rng);
    return Cube(rows, cols, bands, std::move(v));
}

void report(const char* name, double serial, double parallel, double max_diff) {
    std::printf("%-28s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  max|diff| %.2g\n", name, serial, parallel,
                serial / parallel, max_diff);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
    if (const char* env = std::getenv("ITLRR_THREADS")) set_thread_limit(std::atoi(env));
    std::printf("threads: %d, best of %d\n", max_threads(), repeats);

    {
        const Cube c = random_cube(60, 60, 32, 1);
        const ShrinkParams params{0.5, 0.2};
        Cube a, b;
        const double ts = best_of(repeats, [&] { a = reference::p_shrink_tensor(c, params); });
        const double tp = best_of(repeats, [&] { b = p_shrink_tensor(c, params, Execution::parallel); });
        report("p_shrink_tensor 60x60x32", ts, tp, max_abs(a - b));
    }
    {
        const Cube c = random_cube(60, 60, 32, 2);
        double a = 0.0, b = 0.0;
        const double ts = best_of(repeats, [&] { a = reference::schatten_p_norm(c, 0.5); });
        const double tp = best_of(repeats, [&] { b = schatten_p_norm(c, 0.5, Execution::parallel); });
        report("schatten_p_norm 60x60x32", ts, tp, std::abs(a - b));
    }
    {
        SceneSpec spec;
        spec.rows = 48;
        spec.cols = 48;
        const Scene scene = synth_scene(spec);
        SolverConfig cfg = variant_config(Variant::itlrr, {}, 0.5, 1e-3);
        cfg.alpha = 0.5;
        cfg.max_iter = 60;
        Decomposition a, b;
        cfg.execution = Execution::serial;
        const double ts = best_of(repeats, [&] { a = solve(scene.observed, scene.regions, cfg); });
        cfg.execution = Execution::parallel;
        const double tp = best_of(repeats, [&] { b = solve(scene.observed, scene.regions, cfg); });
        report("solve 48x48x16, 60 iters", ts, tp, max_abs(a.low_rank - b.low_rank));
    }
    {
        SceneSpec spec;
        spec.rows = 80;
        spec.cols = 80;
        spec.bands = 32;
        const Scene scene = synth_scene(spec);
        const auto mask = stratified_train_mask(scene.truth, 0.1, 0);
        std::vector<std::int32_t> a, b;
        const double ts = best_of(repeats, [&] { a = reference::knn_classify(scene.observed, mask, scene.truth.labels()); });
        const double tp = best_of(repeats, [&] { b = knn_classify(scene.observed, mask, scene.truth); });
        report("knn_classify 80x80x32", ts, tp, a == b ? 0.0 : 1.0);
    }
    return 0;
}
