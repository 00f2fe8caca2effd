#include "hdgc/simulation.hpp"

#include "hdgc/design.hpp"
#include "hdgc/error.hpp"
#include "hdgc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hdgc {
namespace {

SimulationDesign small_design(std::size_t k, int number) {
    SimulationDesign d;
    d.name = "design" + std::to_string(number);
    d.T = 100;
    d.k = k;
    d.block_sizes = {5, 5, 5, k - 15};
    d.a1_null = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    d.a1_null.head(5).setConstant(0.2);
    d.a1_alt = d.a1_null;
    d.a1_alt.segment(5, 5).setConstant(0.2);
    return d;
}

SimulationDesign wide_design() {
    SimulationDesign d;
    d.name = "design4";
    d.T = 40;
    d.k = 150;
    d.block_sizes.assign(10, 9);
    d.block_sizes.insert(d.block_sizes.end(), 10, 6);
    d.a1_null = Eigen::VectorXd::Zero(150);
    d.a1_null.head(9).setConstant(0.4);
    d.a1_alt = d.a1_null;
    d.a1_alt.segment(9, 9).setConstant(0.4);
    return d;
}

}  // namespace

std::vector<SimulationDesign> builtin_designs() {
    return {small_design(25, 1), small_design(50, 2), small_design(75, 3), wide_design()};
}

SimulationDesign builtin_design(int number) {
    if (number < 1 || number > 4) throw ArgumentError("design number must be 1..4");
    return builtin_designs()[static_cast<std::size_t>(number - 1)];
}

SimulatedPanel simulate(const SimulationDesign& design, Hypothesis hypothesis, Seed seed, std::size_t burn_in) {
    const auto k = static_cast<Eigen::Index>(design.k);
    const auto T = static_cast<Eigen::Index>(design.T);
    const Eigen::VectorXd& a1 = design.coefficients(hypothesis);
    if (a1.size() != k) throw DimensionError("coefficient vector length does not match k");

    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(design.noise_var);
    auto draw = [&] { return sd > 0.0 ? sd * normal(rng) : 0.0; };

    Eigen::MatrixXd x(T, k);
    Eigen::VectorXd y(T);
    Eigen::VectorXd x_prev = Eigen::VectorXd::Zero(k);
    double y_prev = 0.0;
    const auto total = static_cast<Eigen::Index>(burn_in) + T;
    Eigen::VectorXd x_now(k);
    for (Eigen::Index t = 0; t < total; ++t) {
        for (Eigen::Index j = 0; j < k; ++j) x_now(j) = design.predictor_coef * x_prev(j) + draw();
        const double y_now = design.own_coef * y_prev + a1.dot(x_prev) + draw();
        if (t >= static_cast<Eigen::Index>(burn_in)) {
            const Eigen::Index row = t - static_cast<Eigen::Index>(burn_in);
            x.row(row) = x_now.transpose();
            y(row) = y_now;
        }
        x_prev = x_now;
        y_prev = y_now;
    }

    std::vector<std::string> labels;
    labels.reserve(design.k);
    for (std::size_t j = 0; j < design.k; ++j) labels.push_back("x" + std::to_string(j + 1));
    return SimulatedPanel{TimeSeriesPanel::from_series(y, "y"), TimeSeriesPanel(std::move(x), std::move(labels))};
}

std::vector<double> simulate_pvalues(const SimulationDesign& design, Hypothesis hypothesis, TestKind test,
                                     std::size_t runs, const MonteCarloOptions& options, Seed seed) {
    const BlockStructure blocks = design.blocks();
    const std::uint64_t hyp_tag = hypothesis == Hypothesis::null ? tag::hypothesis_null : tag::hypothesis_alt;
    GrangerTestOptions test_options = options.test;
    test_options.jobs = 1;

    if (test == TestKind::wald) {
        // Least squares existence depends only on the shapes.
        const auto d_min = 1 + design.k;
        if (design.T <= 1 + d_min) {
            throw NotComputableError("Wald test needs least squares, which does not exist for T=" +
                                     std::to_string(design.T) + ", k=" + std::to_string(design.k));
        }
    }

    std::vector<double> p_values(runs, 1.0);
    parallel_for(runs, options.jobs, [&](std::size_t j) {
        const Seed run_seed = derive_seed(seed, {tag::simulate, hyp_tag, j});
        const SimulatedPanel panel = simulate(design, hypothesis, run_seed);
        const Eigen::VectorXd y = center(panel.y).first.values().col(0);
        const Eigen::MatrixXd x = center(panel.x).first.values();
        if (test == TestKind::wald) {
            const WaldSelection wald = wald_test_selection(y, x, blocks, 0.0, test_options.p_max);
            p_values[j] = wald.tests[design.tested_block.value].p_value;
        } else {
            const GrangerTestResult result = granger_lasso_test(y, x, blocks, design.tested_block, test_options,
                                                                derive_seed(run_seed, {tag::test_command}));
            p_values[j] = result.mid_p;
        }
    });
    return p_values;
}

double rejection_rate(std::span<const double> p_values, double alpha) {
    if (p_values.empty()) throw ArgumentError("no p-values");
    const auto rejected = std::count_if(p_values.begin(), p_values.end(), [&](double p) { return p < alpha; });
    return static_cast<double>(rejected) / static_cast<double>(p_values.size());
}

double simulated_size(const SimulationDesign& design, TestKind test, double alpha, std::size_t runs,
                      const MonteCarloOptions& options, Seed seed) {
    if (runs < 1) throw ArgumentError("need at least one simulation run");
    const auto p = simulate_pvalues(design, Hypothesis::null, test, runs, options, seed);
    return rejection_rate(p, alpha);
}

std::vector<CurvePoint> size_power_curve(std::span<const double> p_null, std::span<const double> p_alt,
                                         std::size_t m) {
    if (m < 2) throw ArgumentError("size-power curve needs m >= 2 grid points");
    if (p_null.empty() || p_alt.empty()) throw ArgumentError("size-power curve needs p-values");
    auto ecdf = [](std::span<const double> sample, double x) {
        const auto below = std::count_if(sample.begin(), sample.end(), [&](double p) { return p <= x; });
        return static_cast<double>(below) / static_cast<double>(sample.size());
    };
    std::vector<CurvePoint> curve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = i + 1 == m ? 1.0 : static_cast<double>(i) / static_cast<double>(m - 1);
        curve[i] = CurvePoint{x, ecdf(p_null, x), ecdf(p_alt, x)};
    }
    return curve;
}

std::vector<CurvePoint> size_power_curve(const SimulationDesign& design, TestKind test, std::size_t runs,
                                         const MonteCarloOptions& options, std::size_t m, Seed seed) {
    if (m < 2) throw ArgumentError("size-power curve needs m >= 2 grid points");
    const auto p_null = simulate_pvalues(design, Hypothesis::null, test, runs, options, seed);
    const auto p_alt = simulate_pvalues(design, Hypothesis::alternative, test, runs, options, seed);
    return size_power_curve(p_null, p_alt, m);
}

double power_at_size(std::span<const CurvePoint> curve, double size) {
    if (curve.empty()) throw ArgumentError("empty curve");
    if (size <= curve.front().f_null) return curve.front().f_alt;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const CurvePoint& a = curve[i - 1];
        const CurvePoint& b = curve[i];
        if (size <= b.f_null) {
            if (b.f_null == a.f_null) return b.f_alt;
            const double t = (size - a.f_null) / (b.f_null - a.f_null);
            return a.f_alt + t * (b.f_alt - a.f_alt);
        }
    }
    return curve.back().f_alt;
}

double ks_distance_uniform(std::span<const double> sample) {
    if (sample.empty()) throw ArgumentError("empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double u = std::clamp(sorted[i], 0.0, 1.0);
        d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace hdgc
