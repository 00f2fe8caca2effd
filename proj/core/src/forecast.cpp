#include "hdgc/forecast.hpp"

#include "hdgc/design.hpp"
#include "hdgc/error.hpp"
#include "hdgc/inference.hpp"
#include "hdgc/parallel.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace hdgc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Retained = std::optional<std::vector<BlockId>>;

struct Window {
    Eigen::VectorXd y;  // centered
    Eigen::MatrixXd x;  // centered
    double y_mean = 0.0;
};

Window make_window(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, std::size_t first, std::size_t S) {
    Window w;
    const auto start = static_cast<Eigen::Index>(first);
    const auto len = static_cast<Eigen::Index>(S);
    w.y = y.segment(start, len);
    w.y_mean = w.y.mean();
    w.y.array() -= w.y_mean;
    w.x = x.middleRows(start, len);
    if (w.x.cols() > 0) w.x.rowwise() -= w.x.colwise().mean();
    return w;
}

Retained run_selection(Selection selection, const Window& w, const BlockStructure& blocks,
                       const ForecastConfig& config, Seed seed) {
    try {
        switch (selection) {
            case Selection::all:
                return blocks.ids();
            case Selection::wald:
                return wald_test_selection(w.y, w.x, blocks, config.alpha, config.p_max).selected;
            case Selection::glasso_selection:
                return granger_lasso_selection(w.y, w.x, blocks, config.p_max, config.fit).selected;
            case Selection::glasso_test: {
                GrangerTestOptions options;
                options.replicates = config.replicates;
                options.covariance_replicates = config.covariance_replicates;
                options.p_max = config.p_max;
                options.fit = config.fit;
                const auto ids = blocks.ids();
                std::vector<BlockId> kept;
                for (const GrangerTestResult& r : granger_lasso_tests(w.y, w.x, blocks, ids, options, seed)) {
                    if (r.mid_p < config.alpha) kept.push_back(r.block);
                }
                return kept;
            }
        }
    } catch (const NotComputableError&) {
        return std::nullopt;
    }
    return std::nullopt;
}

double linear_forecast(const ArxDesign& design, const Eigen::VectorXd& beta, const Window& w,
                       const Eigen::MatrixXd& x) {
    const Eigen::RowVectorXd row = regressor_row(w.y, x, design.columns(), static_cast<std::size_t>(w.y.size()));
    return row.dot(beta);
}

double ols_forecast(const Window& w, const Eigen::MatrixXd& x, const BlockStructure& blocks, int p_max) {
    const int p = select_ols_lag(w.y, x, blocks, p_max);
    const ArxDesign design = build_design(w.y, x, p, blocks, std::nullopt, true);
    return linear_forecast(design, ols_fit(design).beta, w, x);
}

double factor_model_forecast(const Window& w, const Eigen::MatrixXd& x, const BlockStructure& blocks,
                             int p_max) {
    // With fewer than two retained series there is nothing to compress.
    if (x.cols() < 2) return ols_forecast(w, x, blocks, p_max);
    const FactorFit first = factor_fit(w.y, x, 1);
    int p = 1;
    if (p_max > 1) {
        const std::size_t sizes[] = {first.r};
        try {
            p = select_ols_lag(w.y, first.factors, BlockStructure::from_sizes(sizes), p_max);
        } catch (const NotComputableError&) {
            p = 1;
        }
    }
    const FactorFit fit = p == 1 ? first : factor_fit(w.y, x, p);
    return factor_forecast(fit, w.y, x);
}

double estimate(Estimator estimator, const Window& w, const Eigen::MatrixXd& x, const BlockStructure& blocks,
                const ForecastConfig& config) {
    switch (estimator) {
        case Estimator::ols:
            return ols_forecast(w, x, blocks, config.p_max);
        case Estimator::adaptive_lasso: {
            const int p = select_arx(w.y, x, blocks, config.p_max, config.fit).p;
            const ArxDesign design = build_design(w.y, x, p, blocks, std::nullopt, true);
            return linear_forecast(design, fit_adaptive_lasso(design, config.fit).beta, w, x);
        }
        case Estimator::minnesota: {
            const ArxDesign design = build_design(w.y, x, config.p_max, blocks, std::nullopt, true);
            return linear_forecast(design, minnesota_fit(design, config.prior), w, x);
        }
        case Estimator::factor:
            return factor_model_forecast(w, x, blocks, config.p_max);
    }
    return kNaN;
}

struct WindowResult {
    std::vector<Retained> retained;           // per requested selection
    std::vector<std::vector<double>> values;  // [selection][estimator], forecast of y (uncentered)
};

ForecastReport run_engine(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const BlockStructure& blocks,
                          std::size_t S, const ForecastConfig& config, Seed seed, std::string target,
                          std::span<const Selection> selections, std::span<const Estimator> estimators) {
    const auto T = static_cast<std::size_t>(y.size());
    if (static_cast<std::size_t>(x.rows()) != T) throw DimensionError("response and predictors have different lengths");
    if (blocks.num_columns() != static_cast<std::size_t>(x.cols())) {
        throw StructureError("block structure does not match the predictor panel");
    }
    if (S >= T) throw ArgumentError("window size S must be smaller than T");
    if (config.p_max < 1) throw ArgumentError("p_max must be >= 1");
    if (S <= static_cast<std::size_t>(config.p_max) + 1) throw ArgumentError("window too short for p_max");

    const std::size_t windows = T - S;
    auto select_in = [&](std::size_t w, std::size_t s, const Window& data) {
        const auto selection_code = static_cast<std::uint64_t>(selections[s]);
        const Seed window_seed = derive_seed(seed, {tag::forecast_window, w, tag::selection, selection_code});
        return run_selection(selections[s], data, blocks, config, window_seed);
    };

    std::vector<Retained> fixed;
    if (config.select_once) {
        const Window first = make_window(y, x, 0, S);
        for (std::size_t s = 0; s < selections.size(); ++s) fixed.push_back(select_in(0, s, first));
    }

    std::vector<WindowResult> results(windows);
    parallel_for(windows, config.jobs, [&](std::size_t w) {
        const Window data = make_window(y, x, w, S);
        WindowResult& out = results[w];
        // Cells sharing a retained set share their forecasts.
        std::map<std::vector<BlockId>, std::vector<double>> by_set;
        for (std::size_t s = 0; s < selections.size(); ++s) {
            Retained kept = config.select_once ? fixed[s] : select_in(w, s, data);
            std::vector<double> values(estimators.size(), kNaN);
            if (kept) {
                auto it = by_set.find(*kept);
                if (it == by_set.end()) {
                    std::vector<std::size_t> columns;
                    const BlockStructure sub = blocks.subset(*kept, columns);
                    Eigen::MatrixXd xs(data.x.rows(), static_cast<Eigen::Index>(columns.size()));
                    for (std::size_t c = 0; c < columns.size(); ++c) {
                        xs.col(static_cast<Eigen::Index>(c)) = data.x.col(static_cast<Eigen::Index>(columns[c]));
                    }
                    std::vector<double> fresh(estimators.size(), kNaN);
                    for (std::size_t e = 0; e < estimators.size(); ++e) {
                        try {
                            fresh[e] = data.y_mean + estimate(estimators[e], data, xs, sub, config);
                        } catch (const NotComputableError&) {
                        } catch (const DegeneratePanelError&) {
                        }
                    }
                    it = by_set.emplace(*kept, std::move(fresh)).first;
                }
                values = it->second;
            }
            out.retained.push_back(std::move(kept));
            out.values.push_back(std::move(values));
        }
    });

    ForecastReport report;
    report.target = std::move(target);
    report.S = S;
    for (std::size_t w = 0; w < windows; ++w) {
        report.target_rows.push_back(w + S);
        report.actual.push_back(y(static_cast<Eigen::Index>(w + S)));
    }
    for (std::size_t s = 0; s < selections.size(); ++s) {
        SelectionLog log{selections[s], {}};
        for (std::size_t w = 0; w < windows; ++w) log.windows.push_back(results[w].retained[s]);
        report.selections.push_back(std::move(log));
        for (std::size_t e = 0; e < estimators.size(); ++e) {
            ForecastCell cell{selections[s], estimators[e], std::nullopt, {}};
            for (std::size_t w = 0; w < windows; ++w) cell.path.push_back(results[w].values[s][e]);
            cell.mafe = mean_absolute_error(cell.path, report.actual);
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

}  // namespace

std::string_view to_string(Selection s) {
    switch (s) {
        case Selection::all: return "all";
        case Selection::wald: return "wald";
        case Selection::glasso_selection: return "glasso_selection";
        case Selection::glasso_test: return "glasso_test";
    }
    return "?";
}

std::string_view to_string(Estimator e) {
    switch (e) {
        case Estimator::ols: return "ols";
        case Estimator::adaptive_lasso: return "adaptive_lasso";
        case Estimator::minnesota: return "minnesota";
        case Estimator::factor: return "factor";
    }
    return "?";
}

Selection parse_selection(std::string_view name) {
    for (Selection s : all_selections) {
        if (to_string(s) == name) return s;
    }
    throw ArgumentError("unknown selection technique '" + std::string(name) + "'");
}

Estimator parse_estimator(std::string_view name) {
    for (Estimator e : all_estimators) {
        if (to_string(e) == name) return e;
    }
    throw ArgumentError("unknown estimator '" + std::string(name) + "'");
}

const ForecastCell& ForecastReport::cell(Selection s, Estimator e) const {
    for (const ForecastCell& c : cells) {
        if (c.selection == s && c.estimator == e) return c;
    }
    throw ArgumentError("cell (" + std::string(to_string(s)) + ", " + std::string(to_string(e)) +
                        ") was not evaluated");
}

const SelectionLog& ForecastReport::log(Selection s) const {
    for (const SelectionLog& l : selections) {
        if (l.selection == s) return l;
    }
    throw ArgumentError("selection " + std::string(to_string(s)) + " was not evaluated");
}

ForecastReport rolling_forecast(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const BlockStructure& blocks,
                                Selection selection, Estimator estimator, std::size_t S,
                                const ForecastConfig& config, Seed seed, std::string target) {
    const Selection s[] = {selection};
    const Estimator e[] = {estimator};
    return run_engine(y, x, blocks, S, config, seed, std::move(target), s, e);
}

ForecastReport forecast_grid(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const BlockStructure& blocks,
                             std::size_t S, const ForecastConfig& config, Seed seed, std::string target) {
    return run_engine(y, x, blocks, S, config, seed, std::move(target), all_selections, all_estimators);
}

std::optional<double> mean_absolute_error(std::span<const double> forecasts, std::span<const double> actual) {
    if (forecasts.size() != actual.size()) throw DimensionError("forecast and actual paths differ in length");
    if (forecasts.empty()) throw ArgumentError("empty forecast path");
    double total = 0.0;
    for (std::size_t i = 0; i < forecasts.size(); ++i) {
        if (std::isnan(forecasts[i])) return std::nullopt;
        total += std::abs(forecasts[i] - actual[i]);
    }
    return total / static_cast<double>(forecasts.size());
}

std::size_t default_window(std::size_t T) { return (T * 9) / 10; }

}  // namespace hdgc
