// Benchmark: OpenMP path fan-out vs the serial reference runner on the
// first-arm experiment.  Asserts identical results before reporting speedup.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "armlab/estimator.hpp"

using namespace armlab;

namespace {

EstimateConfig bench_config(long paths, bool serial) {
    EstimateConfig cfg;
    cfg.event.variant = EventVariant::H_odd;
    cfg.event.n = 1;
    cfg.event.kappa = 6.0;
    cfg.event.x = 1.0;
    cfg.event.y = 0.0;
    cfg.grid = {0.25, 0.125, 0.0625};
    cfg.paths = paths;
    cfg.seed = 20240913;
    cfg.serial = serial;
    return cfg;
}

double run_timed(const EstimateConfig& cfg, ExperimentResult& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = estimate_probability(cfg);
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    long paths = 4000;
    if (argc > 1) paths = std::atol(argv[1]);

    ExperimentResult serial_res, parallel_res;
    double ts = run_timed(bench_config(paths, true), serial_res);
    double tp = run_timed(bench_config(paths, false), parallel_res);

    bool identical = serial_res.points.size() == parallel_res.points.size();
    for (std::size_t i = 0; identical && i < serial_res.points.size(); ++i) {
        identical = serial_res.points[i].hits == parallel_res.points[i].hits &&
                    serial_res.points[i].p_hat == parallel_res.points[i].p_hat &&
                    serial_res.points[i].se == parallel_res.points[i].se;
    }
    std::printf("paths per grid point: %ld\n", paths);
    std::printf("serial reference: %.3f s\n", ts);
    std::printf("openmp parallel:  %.3f s\n", tp);
    std::printf("speedup: %.2fx\n", ts / tp);
    std::printf("results identical: %s\n", identical ? "yes" : "NO");
    if (!identical) return 1;
    std::printf("slope %.5f +/- %.5f (predicted %.5f)\n", parallel_res.fit.slope,
                parallel_res.fit.se_slope, parallel_res.predicted);
    return 0;
}
