#include "hdgc/design.hpp"
#include "hdgc/estimators.hpp"
#include "hdgc/forecast.hpp"
#include "hdgc/inference.hpp"
#include "hdgc/simulation.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hdgc;

namespace {

struct Problem {
    SimulationDesign design;
    Eigen::VectorXd y;
    Eigen::MatrixXd x;
};

Problem make_problem(int number) {
    Problem p{builtin_design(number), {}, {}};
    const auto panel = simulate(p.design, Hypothesis::alternative, 1);
    p.y = center(panel.y).first.values().col(0);
    p.x = center(panel.x).first.values();
    return p;
}

// One lasso path with fixed unit weights (coordinate descent only).
void BM_LassoPath(benchmark::State& state) {
    const Problem p = make_problem(static_cast<int>(state.range(0)));
    const ArxDesign design = build_design(p.y, p.x, 1, p.design.blocks());
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(design.cols()));
    const auto grid = lambda_grid(lambda_max(design, w), 50, 1e-3);
    for (auto _ : state) benchmark::DoNotOptimize(bic_path(design, grid, w));
}
BENCHMARK(BM_LassoPath)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

// Ridge weights plus BIC-selected path: the refit done once per bootstrap replicate.
void BM_PipelineFit(benchmark::State& state) {
    const Problem p = make_problem(static_cast<int>(state.range(0)));
    const ArxDesign design = build_design(p.y, p.x, static_cast<int>(state.range(1)), p.design.blocks());
    for (auto _ : state) benchmark::DoNotOptimize(fit_adaptive_lasso(design));
}
BENCHMARK(BM_PipelineFit)->ArgsProduct({{1, 2, 3, 4}, {1, 2}})->Unit(benchmark::kMillisecond);

// A single null-bootstrap replicate: resample, rebuild the response, refit.
void BM_BootstrapReplicate(benchmark::State& state) {
    const Problem p = make_problem(static_cast<int>(state.range(0)));
    const ArxDesign full = build_design(p.y, p.x, 1, p.design.blocks());
    const ArxDesign restricted = drop_block(full, p.design.tested_block);
    const PenalizedFit fit = fit_adaptive_lasso(restricted);
    Eigen::VectorXd centered = fit.residuals;
    centered.array() -= centered.mean();
    Rng rng = make_rng(3);
    for (auto _ : state) {
        const Eigen::VectorXd y_star = simulate_response(restricted, fit.beta, resample_residuals(centered, rng));
        benchmark::DoNotOptimize(fit_adaptive_lasso(replace_response(full, y_star)));
    }
}
BENCHMARK(BM_BootstrapReplicate)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_GrangerTest(benchmark::State& state) {
    const Problem p = make_problem(1);
    GrangerTestOptions options;
    options.replicates = static_cast<std::size_t>(state.range(0));
    options.covariance_replicates = 50;
    for (auto _ : state) {
        benchmark::DoNotOptimize(granger_lasso_test(p.y, p.x, p.design.blocks(), BlockId{1}, options, 7));
    }
}
BENCHMARK(BM_GrangerTest)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ForecastGridWindow(benchmark::State& state) {
    const Problem p = make_problem(1);
    ForecastConfig config;
    config.replicates = 50;
    config.covariance_replicates = 50;
    const std::size_t S = static_cast<std::size_t>(p.y.size()) - 1;  // a single window
    for (auto _ : state) benchmark::DoNotOptimize(forecast_grid(p.y, p.x, p.design.blocks(), S, config, 1));
}
BENCHMARK(BM_ForecastGridWindow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
