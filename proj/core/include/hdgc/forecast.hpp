#pragma once

#include "hdgc/estimators.hpp"
#include "hdgc/panel.hpp"
#include "hdgc/rng.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hdgc {

/// First step: which predictor blocks enter the forecasting model.
enum class Selection { all, wald, glasso_selection, glasso_test };
/// Second step: how the model on the retained blocks is estimated.
enum class Estimator { ols, adaptive_lasso, minnesota, factor };

inline constexpr std::array<Selection, 4> all_selections{Selection::all, Selection::wald,
                                                         Selection::glasso_selection, Selection::glasso_test};
inline constexpr std::array<Estimator, 4> all_estimators{Estimator::ols, Estimator::adaptive_lasso,
                                                         Estimator::minnesota, Estimator::factor};

[[nodiscard]] std::string_view to_string(Selection s);
[[nodiscard]] std::string_view to_string(Estimator e);
/// Throws ArgumentError for unknown names.
[[nodiscard]] Selection parse_selection(std::string_view name);
[[nodiscard]] Estimator parse_estimator(std::string_view name);

struct ForecastConfig {
    int p_max = 2;
    double alpha = 0.01;                      // level of the block tests
    std::size_t replicates = 200;             // B per window
    std::size_t covariance_replicates = 200;  // B_cov per window
    FitOptions fit;
    MinnesotaPrior prior;
    bool select_once = false;  // select on the first window only and reuse it
    std::size_t jobs = 1;      // windows evaluated in parallel
};

struct ForecastCell {
    Selection selection = Selection::all;
    Estimator estimator = Estimator::ols;
    std::optional<double> mafe;  // empty when some window was not computable
    std::vector<double> path;    // one forecast per window, NaN where not computable
};

struct SelectionLog {
    Selection selection = Selection::all;
    /// Retained blocks per window; empty optional where the selection itself
    /// was not computable.
    std::vector<std::optional<std::vector<BlockId>>> windows;
};

struct ForecastReport {
    std::string target;
    std::size_t S = 0;
    std::vector<std::size_t> target_rows;  // row index of each forecast target
    std::vector<double> actual;            // y at target_rows
    std::vector<ForecastCell> cells;
    std::vector<SelectionLog> selections;

    /// Throws ArgumentError when the cell was not evaluated.
    [[nodiscard]] const ForecastCell& cell(Selection s, Estimator e) const;
    [[nodiscard]] const SelectionLog& log(Selection s) const;
};

/// Rolling one-step-ahead forecasts. The window ending at row t (t = S-1 ..
/// T-2) uses rows t-S+1..t only, is centered with its own means, runs the
/// selection, fits the estimator on the retained blocks and forecasts row t+1.
/// Randomness for window w and selection s comes from
/// derive_seed(seed, {forecast_window, w, selection, s}).
[[nodiscard]] ForecastReport rolling_forecast(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                              const BlockStructure& blocks, Selection selection,
                                              Estimator estimator, std::size_t S, const ForecastConfig& config,
                                              Seed seed, std::string target = "y");

/// All selection x estimator cells, sharing the per-window selections.
[[nodiscard]] ForecastReport forecast_grid(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                           const BlockStructure& blocks, std::size_t S,
                                           const ForecastConfig& config, Seed seed, std::string target = "y");

/// Mean absolute error of a forecast path; empty if any entry is NaN.
[[nodiscard]] std::optional<double> mean_absolute_error(std::span<const double> forecasts,
                                                        std::span<const double> actual);

/// Default window size floor(0.9 T).
[[nodiscard]] std::size_t default_window(std::size_t T);

}  // namespace hdgc
