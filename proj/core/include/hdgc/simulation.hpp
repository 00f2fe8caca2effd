#pragma once

#include "hdgc/inference.hpp"
#include "hdgc/panel.hpp"
#include "hdgc/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hdgc {

enum class Hypothesis { null, alternative };
enum class TestKind { wald, granger_lasso };

/// Data generating process
///   y_t = own_coef * y_{t-1} + a1 x_{t-1} + e_t,  e_t ~ N(0, noise_var)
///   x_t = predictor_coef * x_{t-1} + u_t,         u_t ~ N_k(0, noise_var I)
/// with a1 depending on the hypothesis. Under both hypotheses the first block
/// is causal; the tested block is causal only under the alternative.
struct SimulationDesign {
    std::string name;
    std::size_t T = 100;
    std::size_t k = 25;
    double own_coef = 0.5;
    double noise_var = 0.1;
    double predictor_coef = 0.5;
    Eigen::VectorXd a1_null;
    Eigen::VectorXd a1_alt;
    std::vector<std::size_t> block_sizes;
    BlockId tested_block{1};

    [[nodiscard]] BlockStructure blocks() const { return BlockStructure::from_sizes(block_sizes); }
    [[nodiscard]] const Eigen::VectorXd& coefficients(Hypothesis h) const {
        return h == Hypothesis::null ? a1_null : a1_alt;
    }
};

/// The four reference designs: (T=100, k=25|50|75) with blocks (5, 5, 5, k-15)
/// and coefficient 0.2, and (T=40, k=150) with ten blocks of 9 then ten of 6
/// and coefficient 0.4.
[[nodiscard]] std::vector<SimulationDesign> builtin_designs();

/// Design number 1..4 of builtin_designs().
[[nodiscard]] SimulationDesign builtin_design(int number);

struct SimulatedPanel {
    TimeSeriesPanel y;
    TimeSeriesPanel x;
};

/// Generates T observations after `burn_in` discarded steps from a zero start.
[[nodiscard]] SimulatedPanel simulate(const SimulationDesign& design, Hypothesis hypothesis, Seed seed,
                                      std::size_t burn_in = 50);

struct MonteCarloOptions {
    GrangerTestOptions test;  // B, B_cov, p_max and fit options; test.jobs is ignored
    std::size_t jobs = 1;     // parallel simulation runs
};

/// p-value of the tested block for N independent panels. Run j uses
/// derive_seed(seed, {simulate, hypothesis, j}); panels are mean centered
/// before testing. Wald p-values are chi-square; Granger lasso ones are mid
/// p-values. Throws NotComputableError for Wald when least squares does not exist.
[[nodiscard]] std::vector<double> simulate_pvalues(const SimulationDesign& design, Hypothesis hypothesis,
                                                   TestKind test, std::size_t runs,
                                                   const MonteCarloOptions& options, Seed seed);

/// Fraction of p-values strictly below alpha.
[[nodiscard]] double rejection_rate(std::span<const double> p_values, double alpha);

[[nodiscard]] double simulated_size(const SimulationDesign& design, TestKind test, double alpha,
                                    std::size_t runs, const MonteCarloOptions& options, Seed seed);

struct CurvePoint {
    double x = 0.0;
    double f_null = 0.0;
    double f_alt = 0.0;
};

/// Empirical CDFs of both p-value samples on the uniform grid x_i = i/(m-1).
[[nodiscard]] std::vector<CurvePoint> size_power_curve(std::span<const double> p_null,
                                                       std::span<const double> p_alt, std::size_t m);

[[nodiscard]] std::vector<CurvePoint> size_power_curve(const SimulationDesign& design, TestKind test,
                                                       std::size_t runs, const MonteCarloOptions& options,
                                                       std::size_t m, Seed seed);

/// Power read off a size-power curve at the given size, interpolating
/// linearly between consecutive curve points.
[[nodiscard]] double power_at_size(std::span<const CurvePoint> curve, double size);

/// Kolmogorov-Smirnov distance between the sample and Uniform(0, 1).
[[nodiscard]] double ks_distance_uniform(std::span<const double> sample);

}  // namespace hdgc
