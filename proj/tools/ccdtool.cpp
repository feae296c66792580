#include "ccd/cli.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Cluster catch digraph clustering and outlier detection"};
    app.require_subcommand(1);

    ccd::cli::GenerateConfig gen;
    auto* cg = app.add_subcommand("generate", "generate a synthetic dataset CSV");
    cg->add_option("--preset", gen.preset,
                   "uni-general | gau-general | matern | thomas | mixed");
    cg->add_option("--d", gen.d, "dimension")->check(CLI::PositiveNumber);
    cg->add_option("--n", gen.n, "dataset size (cluster presets)");
    cg->add_option("--clusters", gen.clusters, "number of clusters");
    cg->add_option("--contamination", gen.contamination, "outlier fraction");
    cg->add_option("--outlier-rule", gen.outlier_rule, "big-sphere | annulus | collective");
    cg->add_option("--collective-shift", gen.collective_shift, "collective-rule center shift");
    cg->add_option("--noise-level", gen.noise_level, "Gaussian tail mass outside R");
    cg->add_option("--seed", gen.seed, "RNG seed")->required();
    cg->add_option("--out", gen.out_path, "output CSV path")->required();

    ccd::cli::DetectConfig det;
    auto* cd = app.add_subcommand("detect", "run an outlier detector on a CSV dataset");
    cd->add_option("--in", det.in_path, "input CSV")->required();
    cd->add_option("--detector", det.detector, "ru-mccd | su-mccd | un-mccd | sun-mccd");
    cd->add_option("--alpha", det.params.alpha, "CSR test level (0 = per-dimension default)");
    cd->add_option("--delta0", det.params.delta0, "initial density parameter (0 = auto)");
    cd->add_option("--delta-step", det.params.delta_step, "density decrement (0 = auto)");
    cd->add_option("--s-min", det.params.s_min, "minimum cluster size (0 = auto)");
    cd->add_option("--contamination", det.params.contamination, "expected outlier fraction");
    cd->add_option("--k-env-sims", det.params.k_env_sims, "Ripley envelope simulations");
    cd->add_option("--nnd-sims", det.params.nnd_sims, "NND reference simulations");
    cd->add_option("--out", det.out_path, "labels CSV path");
    cd->add_option("--json", det.json_path, "diagnostics JSON path (default: stdout)");

    ccd::cli::BenchConfig bench;
    auto* cb = app.add_subcommand("bench", "Monte Carlo benchmark over a setting grid");
    cb->add_option("--preset", bench.presets, "setting presets (repeatable)");
    cb->add_option("--d", bench.dims, "dimensions (repeatable)");
    cb->add_option("--n", bench.sizes, "dataset sizes (repeatable)");
    cb->add_option("--detector", bench.detectors, "detectors (repeatable)");
    cb->add_option("--reps", bench.reps, "replications per setting");
    cb->add_option("--seed", bench.seed, "RNG seed")->required();
    cb->add_option("--jobs", bench.jobs, "worker threads");
    cb->add_option("--contamination", bench.contamination, "outlier fraction");
    cb->add_option("--clusters", bench.clusters, "number of clusters");
    cb->add_option("--beta", bench.beta, "F-score beta");
    cb->add_option("--out", bench.out_path, "metrics CSV path (default: stdout)");
    cb->add_option("--svg", bench.svg_path, "optional SVG bar chart path");

    ccd::cli::NormalizeConfig norm;
    auto* cn = app.add_subcommand("normalize", "robust per-feature scaling (median / MADN)");
    cn->add_option("--in", norm.in_path, "input CSV")->required();
    cn->add_option("--out", norm.out_path, "output CSV")->required();

    ccd::cli::CsrTestConfig csr;
    auto* cc = app.add_subcommand("csr-test", "spatial randomness test on points in a ball");
    cc->add_option("--in", csr.in_path, "input CSV (default: generate a CSR ball)");
    cc->add_option("--statistic", csr.statistic, "ripley | nnd");
    cc->add_option("--alpha", csr.alpha, "test level");
    cc->add_option("--d", csr.d, "dimension (generated ball)");
    cc->add_option("--n", csr.n, "point count (generated ball)");
    cc->add_option("--seed", csr.seed, "RNG seed");
    cc->add_option("--out", csr.out_path, "verdict JSON path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    return ccd::cli::dispatch_errors([&]() -> int {
        if (cg->parsed()) return ccd::cli::cmd_generate(gen);
        if (cd->parsed()) return ccd::cli::cmd_detect(det);
        if (cb->parsed()) return ccd::cli::cmd_bench(bench);
        if (cn->parsed()) return ccd::cli::cmd_normalize(norm);
        if (cc->parsed()) return ccd::cli::cmd_csr_test(csr);
        return 1;
    });
}
