#pragma once

// Box dimension and Assouad spectrum estimators for the measure models, from
// scale regressions over a finite grid of centres.

#include "horocount/counting.hpp"

#include <string>
#include <vector>

namespace horo {

/// mu_delta (no s) or the atomic s-conformal model.
struct MeasureModel {
    const GroupPreset* group = nullptr;
    std::optional<double> s;
    /// Certified interval width allowed, relative to the lower bound.
    double rel_tol = 0.05;
    std::int64_t max_q_cut = std::int64_t(1) << 22;

    static MeasureModel lebesgue(const GroupPreset& g) { return {&g, std::nullopt}; }
    static MeasureModel conformal(const GroupPreset& g, double s) { return {&g, s}; }

    /// Lower bound for mu(B); Q_cut doubles until the interval is tight enough,
    /// IncreaseQcut past max_q_cut.
    double mass(const Ball& ball) const;
};

/// Points (log r, log value), or (log r^(theta-1), log ratio) in spectrum mode.
struct ScaleRegression {
    std::vector<double> x, y;
    LineFit fit;
    double theta = 0;

    /// Needs >= 4 points with strictly decreasing scales (increasing x) and a finite slope.
    static ScaleRegression make(std::vector<double> x, std::vector<double> y, double theta = 0);
};

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (log r, log value)
};

struct CenterGrid {
    std::vector<std::pair<std::string, ExactPoint>> fixed;
    /// Each cusp p contributes the moving centre p + offset * r at scale r.
    std::vector<BoundaryPoint> witnesses;
    Rational offset{201, 200};

    /// Badly approximable constants, a few cusps, and witness families at 0, 1/2, 1/3.
    static CenterGrid standard(const GroupPreset& g);
};

/// 2^-from, ..., 2^-to.
std::vector<Rational> dyadic_scales(int from, int to);

struct BoxEstimate {
    double lower = 0;
    double upper = 0;
    ScaleRegression fit;
    std::vector<std::string> argmin;  // minimizing centre per scale
    std::vector<Series> series;       // one per fixed centre or witness family
};

/// upper: slope of log min_x mu(B(x,r)) against log r. lower: smallest slope
/// over contiguous sub-runs of >= 4 scales. Needs >= 6 geometric scales.
BoxEstimate box_dim_estimate(const MeasureModel& model, const std::vector<Rational>& r_list,
                             const CenterGrid& grid);

struct SpectrumEstimate {
    double theta = 0;
    double estimate = 0;        // best per-centre regression slope
    double pointwise_max = 0;   // max single-scale log ratio / log r^(theta-1)
    double target = 0;
    std::string witness;        // centre or family attaining the estimate
    double witness_r = 0;       // scale attaining pointwise_max
    std::vector<Series> series; // (log r, log ratio)
};

SpectrumEstimate assouad_spectrum_estimate(const MeasureModel& model, double theta,
                                           const std::vector<Rational>& r_list, const CenterGrid& grid);

/// 2s - k_min (box) and (2s - k_min)/(1 - theta) (spectrum), valid when delta = k_min.
double box_dim_target(const GroupPreset& g, double s);
double spectrum_target(const GroupPreset& g, double s, double theta);

}  // namespace horo
