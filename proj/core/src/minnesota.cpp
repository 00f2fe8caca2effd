#include "hdgc/error.hpp"
#include "hdgc/estimators.hpp"

#include <cmath>

namespace hdgc {
namespace {

double column_sd(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
}

}  // namespace

Eigen::VectorXd minnesota_prior_stds(const ArxDesign& design, const MinnesotaPrior& prior) {
    if (!(prior.tightness > 0.0) || !(prior.cross_shrink > 0.0) || prior.cross_shrink > 1.0) {
        throw ArgumentError("Minnesota prior needs tightness > 0 and cross_shrink in (0, 1]");
    }
    const double s_y = column_sd(design.y());
    if (!(s_y > 0.0)) throw ScaleError("response has zero variance");
    Eigen::VectorXd stds(design.X().cols());
    for (std::size_t c = 0; c < design.cols(); ++c) {
        const ColumnInfo& info = design.columns()[c];
        const double lag = static_cast<double>(info.lag);
        if (info.kind == ColumnKind::own_lag) {
            stds(static_cast<Eigen::Index>(c)) = prior.tightness / lag;
        } else {
            const double s_x = column_sd(design.X().col(static_cast<Eigen::Index>(c)));
            if (!(s_x > 0.0)) throw ScaleError("predictor column " + std::to_string(info.source) + " has zero variance");
            stds(static_cast<Eigen::Index>(c)) = prior.tightness * prior.cross_shrink * (s_y / s_x) / lag;
        }
    }
    return stds;
}

double minnesota_noise_variance(const ArxDesign& design) {
    std::vector<std::size_t> own;
    for (std::size_t c = 0; c < design.cols(); ++c) {
        if (design.columns()[c].kind == ColumnKind::own_lag) own.push_back(c);
    }
    const ArxDesign ar = select_design_columns(design, own);
    try {
        return ols_fit(ar).sigma2;
    } catch (const NotComputableError&) {
        const double sd = column_sd(design.y());
        return sd * sd;
    }
}

Eigen::VectorXd minnesota_posterior_mean(const ArxDesign& design, const Eigen::VectorXd& prior_stds,
                                         double noise_var) {
    if (prior_stds.size() != design.X().cols()) throw DimensionError("prior std vector has the wrong length");
    if (!(noise_var >= 0.0)) throw ArgumentError("noise variance must be nonnegative");
    const double n = static_cast<double>(design.rows());
    const Eigen::VectorXd penalty = (noise_var / n) * prior_stds.array().square().inverse().matrix();
    return generalized_ridge_fit(design, penalty);
}

Eigen::VectorXd minnesota_fit(const ArxDesign& design, const MinnesotaPrior& prior) {
    return minnesota_posterior_mean(design, minnesota_prior_stds(design, prior),
                                    minnesota_noise_variance(design));
}

}  // namespace hdgc
