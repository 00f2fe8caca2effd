#include "hdgc/error.hpp"
#include "hdgc/estimators.hpp"

#include <optional>

namespace hdgc {

SelectedModel select_arx(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const BlockStructure& blocks,
                         int p_max, const FitOptions& options, std::span<const BlockId> excluded) {
    if (p_max < 1) throw ArgumentError("p_max must be >= 1");
    if (static_cast<Eigen::Index>(p_max) >= y.size()) {
        throw DimensionError("sample of length " + std::to_string(y.size()) + " too short for p_max " +
                             std::to_string(p_max));
    }
    const auto common_start = static_cast<std::size_t>(p_max);

    std::optional<SelectedModel> best;
    for (int p = 1; p <= p_max; ++p) {
        ArxDesign design = build_design(y, x, p, blocks, common_start);
        for (BlockId id : excluded) design = drop_block(design, id);
        PenalizedFit fit = fit_adaptive_lasso(design, options);
        if (!best || fit.bic < best->fit.bic) {
            best.emplace(SelectedModel{p, std::move(design), std::move(fit)});
        }
    }
    return std::move(*best);
}

}  // namespace hdgc
