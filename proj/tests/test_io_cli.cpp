#include "itlrr/cli.hpp"
#include "itlrr/error.hpp"
#include "itlrr/eval.hpp"
#include "itlrr/io.hpp"
#include "itlrr/segmentation.hpp"
#include "itlrr/solver.hpp"
#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace itlrr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("itlrr_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    [[nodiscard]] std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("cube binary format") {
    std::mt19937_64 rng(501);
    const Cube c = oracle::random_cube(3, 5, 7, rng);
    const std::string bytes = encode_cube(c);
    CHECK(bytes.size() == 4 + 24 + 8 * c.size());
    CHECK(bytes.substr(0, 4) == "ITC1");
    CHECK(bytes[4] == 3);  // little-endian row count
    const Cube back = decode_cube(bytes);
    CHECK(back == c);
    CHECK(encode_cube(back) == bytes);

    CHECK_THROWS_AS((void)decode_cube(bytes.substr(0, bytes.size() - 1)), Error);
    CHECK_THROWS_AS((void)decode_cube("ITC1"), Error);
}

TEST_CASE("cube CSV fallback") {
    const Cube c = decode_cube("# r,c,b,value\n0,0,0,1.5\n0,1,0,-2\n0,0,1,3\n0,1,1,4e-3\n");
    CHECK(c.rows() == 1);
    CHECK(c.cols() == 2);
    CHECK(c.bands() == 2);
    CHECK(c(0, 0, 0) == 1.5);
    CHECK(c(0, 1, 0) == -2.0);
    CHECK(c(0, 0, 1) == 3.0);
    CHECK(c(0, 1, 1) == 4e-3);
    CHECK_THROWS_AS((void)parse_cube_csv("0,0,0,1\n1,1,0,2\n"), Error);
    CHECK_THROWS_AS((void)parse_cube_csv("0,0,x,1\n"), Error);
    CHECK_THROWS_AS((void)parse_cube_csv("0,0,0,nan\n"), Error);
}

TEST_CASE("label formats") {
    std::mt19937_64 rng(503);
    const LabelMap lm = gen::random_labelmap(6, 4, 5, rng);
    const std::string bin = encode_labels_binary(lm);
    CHECK(bin.substr(0, 4) == "ITL1");
    CHECK(decode_labels(bin) == lm);
    CHECK(encode_labels_binary(decode_labels(bin)) == bin);
    const std::string csv = encode_labels_csv(lm);
    CHECK(decode_labels(csv) == lm);
    CHECK(encode_labels_csv(decode_labels(csv)) == csv);
}

TEST_CASE("files") {
    const TempDir dir;
    std::mt19937_64 rng(505);
    const Cube c = oracle::random_cube(4, 4, 3, rng);
    write_cube(dir / "c.itc", c);
    CHECK(read_file(dir / "c.itc") == encode_cube(c));
    CHECK(read_cube(dir / "c.itc") == c);

    const LabelMap lm = gen::random_labelmap(4, 4, 3, rng);
    write_labels(dir / "l.itl", lm);
    write_labels(dir / "l.csv", lm);
    CHECK(read_file(dir / "l.itl") == encode_labels_binary(lm));
    CHECK(read_file(dir / "l.csv") == encode_labels_csv(lm));
    CHECK(load_labelmap(dir / "l.itl") == lm);
    CHECK(load_labelmap(dir / "l.csv") == lm);

    try {
        (void)read_cube(dir / "missing.itc");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
    }
}

TEST_CASE("trace CSV") {
    Decomposition d;
    d.converged = false;
    d.iterations = 2;
    d.residual_trace = {0.5, 0.25};
    d.mu_trace = {1.0, 1.1};
    CHECK(encode_trace_csv(d) == "# converged=false iterations=2\niter,residual,mu\n1,0.5,1\n2,0.25,1.1000000000000001\n");
    d.objective_trace = {3.0, 2.0};
    CHECK(encode_trace_csv(d).find("iter,residual,mu,objective\n1,0.5,1,3\n") != std::string::npos);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("presets") {
    const auto all = cli::presets();
    REQUIRE(all.size() == 4);
    const auto ip = cli::find_preset("indian-pines");
    REQUIRE(ip);
    CHECK(ip->p == 0.1);
    CHECK(ip->regions == 30);
    CHECK(ip->alpha == 1e-7);
    CHECK(ip->beta == 1e-5);
    const auto lk = cli::find_preset("longkou");
    REQUIRE(lk);
    CHECK(lk->p == 0.7);
    CHECK(lk->alpha == 5e-4);
    CHECK_FALSE(cli::find_preset("houston"));
}

TEST_CASE("usage and input errors") {
    CHECK(run_cli({}).code == 2);
    const CliResult bad = run_cli({"decompose", "--in"});
    CHECK(bad.code == 2);
    CHECK(bad.err.rfind("E_USAGE", 0) == 0);

    const TempDir dir;
    const CliResult missing = run_cli({"segment", "--in", dir / "nope.itc", "--out", dir / "l.csv"});
    CHECK(missing.code == 2);
    CHECK(missing.err.rfind("E_IO", 0) == 0);

    write_cube(dir / "x.itc", Cube(2, 2, 2));
    const CliResult preset = run_cli({"decompose", "--in", dir / "x.itc", "--out-low", dir / "l.itc", "--out-sparse",
                                  dir / "s.itc", "--preset", "houston"});
    CHECK(preset.code == 2);
    CHECK(preset.err.rfind("E_INPUT", 0) == 0);
}

TEST_CASE("segment") {
    const TempDir dir;
    std::mt19937_64 rng(507);
    write_cube(dir / "x.itc", oracle::random_cube(8, 6, 3, rng));
    REQUIRE(run_cli({"segment", "--in", dir / "x.itc", "--out", dir / "one.csv", "-n", "1"}).code == 0);
    CHECK(load_labelmap(dir / "one.csv") == single_region(8, 6));

    REQUIRE(run_cli({"segment", "--in", dir / "x.itc", "--out", dir / "four.itl", "--regions", "4"}).code == 0);
    const LabelMap four = load_labelmap(dir / "four.itl");
    CHECK(four == slic_segment(pca_first_component(read_cube(dir / "x.itc")), 4));
}

TEST_CASE("decompose") {
    const TempDir dir;
    SUBCASE("zero cube") {
        write_cube(dir / "z.itc", Cube(5, 5, 4));
        REQUIRE(run_cli({"decompose", "--in", dir / "z.itc", "--out-low", dir / "l.itc", "--out-sparse", dir / "s.itc",
                     "--trace", dir / "t.csv"})
                    .code == 0);
        CHECK(max_abs(read_cube(dir / "l.itc")) == 0.0);
        CHECK(max_abs(read_cube(dir / "s.itc")) == 0.0);
        const std::string trace = read_file(dir / "t.csv");
        CHECK(trace.rfind("# converged=true iterations=1\niter,residual,mu\n", 0) == 0);
        CHECK(count_lines(trace) == 3);
    }
    SUBCASE("TRPCA flags reproduce the library result bit for bit") {
        std::mt19937_64 rng(509);
        const Cube x = gen::low_tubal_rank(10, 10, 6, 1, 1.0, rng) + gen::sparse_corruption(10, 10, 6, 0.05, 1.0, rng);
        write_cube(dir / "x.itc", x);
        REQUIRE(run_cli({"decompose", "--in", dir / "x.itc", "--out-low", dir / "l.itc", "--out-sparse", dir / "s.itc",
                     "--p", "1", "--beta", "0", "--regions-override", "1", "--max-iter", "60"})
                    .code == 0);
        SolverConfig cfg;
        cfg.max_iter = 60;
        const Decomposition d = solve(x, single_region(10, 10), cfg);
        CHECK(read_file(dir / "l.itc") == encode_cube(d.low_rank));
        CHECK(read_file(dir / "s.itc") == encode_cube(d.sparse));
    }
    SUBCASE("labels file, preset with overrides, objective trace, repeatable output") {
        SceneSpec spec;
        spec.rows = 12;
        spec.cols = 12;
        spec.bands = 6;
        const Scene scene = synth_scene(spec);
        write_cube(dir / "x.itc", scene.observed);
        write_labels(dir / "r.csv", scene.regions);
        const std::vector<std::string> args{"decompose", "--in", dir / "x.itc", "--labels", dir / "r.csv",
                                            "--out-low", dir / "l.itc", "--out-sparse", dir / "s.itc",
                                            "--trace", dir / "t.csv", "--preset", "longkou",
                                            "--alpha", "0.5", "--objective", "--max-iter", "25"};
        REQUIRE(run_cli(args).code == 0);
        const std::string low = read_file(dir / "l.itc"), trace = read_file(dir / "t.csv");
        CHECK(trace.find("iter,residual,mu,objective\n") != std::string::npos);
        REQUIRE(run_cli(args).code == 0);
        CHECK(read_file(dir / "l.itc") == low);
        CHECK(read_file(dir / "t.csv") == trace);

        SolverConfig cfg;
        cfg.p = 0.7;
        cfg.alpha = 0.5;
        cfg.beta = 1e-5;
        cfg.max_iter = 25;
        CHECK(low == encode_cube(solve(scene.observed, scene.regions, cfg).low_rank));
    }
}

TEST_CASE("synth") {
    const TempDir dir;
    write_file(dir / "spec.txt", "rows=10\ncols=10\nbands=5\nseed=3\n");
    const std::vector<std::string> args{"synth", "--spec", dir / "spec.txt", "--out-observed", dir / "o.itc",
                                        "--out-clean", dir / "c.itc", "--out-truth", dir / "t.csv"};
    REQUIRE(run_cli(args).code == 0);
    const std::string observed = read_file(dir / "o.itc");
    REQUIRE(run_cli(args).code == 0);
    CHECK(read_file(dir / "o.itc") == observed);

    write_file(dir / "clean.txt", "rows=10\ncols=10\nbands=5\ncorruption_rate=0\n");
    REQUIRE(run_cli({"synth", "--spec", dir / "clean.txt", "--out-observed", dir / "o2.itc", "--out-clean", dir / "c2.itc",
                 "--out-truth", dir / "t2.csv"})
                .code == 0);
    CHECK(read_file(dir / "o2.itc") == read_file(dir / "c2.itc"));

    write_file(dir / "bad.txt", "rows=ten\n");
    const CliResult bad = run_cli({"synth", "--spec", dir / "bad.txt", "--out-observed", dir / "o3.itc", "--out-clean",
                               dir / "c3.itc", "--out-truth", dir / "t3.csv"});
    CHECK(bad.code == 2);
}

TEST_CASE("eval") {
    const TempDir dir;
    SceneSpec spec;
    spec.corruption_rate = 0.0;
    const Scene scene = synth_scene(spec);
    write_cube(dir / "c.itc", scene.clean);
    write_labels(dir / "t.csv", scene.truth);

    REQUIRE(run_cli({"eval", "--in", dir / "c.itc", "--truth", dir / "t.csv", "--out", dir / "m.csv"}).code == 0);
    const std::string csv = read_file(dir / "m.csv");
    CHECK(csv.rfind("repeat,oa,aa,kappa\n", 0) == 0);
    CHECK(count_lines(csv) == 22);
    CHECK(csv.find("\nmean,1,1,1\n") != std::string::npos);

    write_labels(dir / "tiny.csv", LabelMap(1, 3, {0, 0, 1}));
    write_cube(dir / "tiny.itc", Cube(1, 3, 2));
    const CliResult zero = run_cli({"eval", "--in", dir / "tiny.itc", "--truth", dir / "tiny.csv", "--out", dir / "z.csv"});
    CHECK(zero.code == 3);
    CHECK(zero.err.rfind("E_PROTOCOL", 0) == 0);
}

}  // TEST_SUITE
