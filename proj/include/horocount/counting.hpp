#pragma once

// Counting experiments: exact horoball counts per scale window against the
// comparability predictions, band fitting, and calibration of tau, C, c1, c2.

#include "horocount/measures.hpp"

#include <string>
#include <vector>

namespace horo {

enum class Regime { Local, Theoretical, Intermediate, Proximity, Global };
std::string_view to_string(Regime r);

/// Diameters tau^(k+1) <= |H_p| < tau^k inside B(z, R).
struct CountQuery {
    const GroupPreset* group = nullptr;
    ExactPoint z;
    Rational R;
    Rational tau;
    int k = 1;

    /// Throws InvalidArgument for R <= 0, tau outside (0,1) or k < 1.
    static CountQuery make(const GroupPreset& g, ExactPoint z, Rational R, Rational tau, int k);
    Ball ball() const { return {z, R}; }
    /// R at or below the preset's small-scale threshold.
    bool small_scale() const { return R <= group->small_scale_threshold; }
};

struct CountRecord {
    CountQuery query;
    std::uint64_t count = 0;
    double prediction = 0;
    Regime regime = Regime::Local;
    /// false when R lies above the small-scale threshold; such records never enter a band.
    bool in_regime = true;

    double ratio() const { return static_cast<double>(count) / prediction; }
};

struct ComparabilityBand {
    double c_lo = 0;
    double c_hi = 0;
    std::size_t n_records = 0;

    double spread() const { return c_hi / c_lo; }
};

/// min/max of count/prediction over in-regime records. Throws EmptyInput when
/// no record qualifies, InvalidArgument on a non-positive prediction.
ComparabilityBand band_fit(const std::vector<CountRecord>& records);
ComparabilityBand band_fit_ratios(const std::vector<double>& ratios);

/// Ratios stay within `factor` of the reference band on both sides.
bool within_band(const ComparabilityBand& observed, const ComparabilityBand& reference, double factor = 2.0);

/// Exact count; prediction tau^(-k delta) mu_delta(B(z,R)); local when
/// tau^k < R^2, theoretical otherwise.
CountRecord count_in_ball(const CountQuery& q);

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0;  // rms
};

/// Least squares y = slope * x + intercept; throws TooFewSamples below `min_points`.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points = 4);

struct GlobalCount {
    std::vector<CountRecord> records;
    LineFit fit;  // log count against k log(1/tau); slope estimates delta
    ComparabilityBand band;
};

/// Counts over the fundamental window for k_lo..k_hi (needs >= 4 scales).
/// Picard uses the half-open square [0,1)^2.
GlobalCount global_count(const GroupPreset& g, const Rational& tau, int k_lo, int k_hi);

struct LocalExperiment {
    std::vector<CountRecord> records;      // local regime, tau^k < C R^2
    std::vector<CountRecord> theoretical;  // R^2 <= tau^k <= R
    ComparabilityBand band;
    /// max count/prediction over every record with tau^k <= R.
    double c_upper = 0;
};

/// For each (z, R): the first `scales` k with tau^k < C R^2, plus every k with
/// tau^k in [C R^2, R] for the upper-bound check.
LocalExperiment local_count_experiment(const GroupPreset& g, const std::vector<ExactPoint>& zs,
                                       const std::vector<Rational>& Rs, const Rational& tau,
                                       const Rational& C, int scales = 3);

/// Family z = f^n(z0), f(z) = z/(z+1), approaching the cusp 0.
ExactPoint parabolic_iterate(const ExactPoint& z0, int n);

struct IntermediateQuery {
    CountQuery count;
    BoundaryPoint p0 = BoundaryPoint::infinity();
    Rational c1, c2;

    /// Throws HypothesisViolated unless R^2 < tau^k < R, c1 > 1, 0 < c2 < 1 and
    /// c1 tau^(k/2) <= |z - p0| <= c2 sqrt(R |H_p0|).
    static IntermediateQuery make(const GroupPreset& g, ExactPoint z, Rational R, Rational tau, int k,
                                  BoundaryPoint p0, Rational c1, Rational c2);
};

/// Exact count with prediction (R / tau^k)^delta.
CountRecord intermediate_experiment(const IntermediateQuery& q);

/// All (z0, n, R, k) combinations near p0 = 0 that satisfy the hypothesis window.
std::vector<IntermediateQuery> intermediate_family(const GroupPreset& g, const std::vector<ExactPoint>& z0s,
                                                   const std::vector<int>& ns, const std::vector<Rational>& Rs,
                                                   const Rational& tau, const Rational& c1, const Rational& c2);

struct ProximityQuery {
    const GroupPreset* group = nullptr;
    Rational lambda;
    Rational c;
    ExactPoint z;
    Rational R;
    BoundaryPoint p0 = BoundaryPoint::infinity();

    /// Throws HypothesisViolated for lambda outside (1,2], c < 1, R <= 0, an
    /// infinite p0, or lambda = 2 with c <= 1/|H_p0|.
    static ProximityQuery make(const GroupPreset& g, Rational lambda, Rational c, ExactPoint z, Rational R,
                               BoundaryPoint p0);
};

struct ProximityVerdict {
    bool hypothesis_met = false;
    std::uint64_t count = 0;
    std::vector<BoundaryPoint> witnesses;
    std::int64_t qnorm_bound = 0;  // enumeration covered |q|^2 <= qnorm_bound

    bool ok() const { return !hypothesis_met || count <= 1; }
};

/// Enumerates every cusp in B(z,R) with |H_p| >= c R^lambda.
ProximityVerdict proximity_check(const ProximityQuery& q);

struct ContinuityRow {
    double s = 0;
    MassInterval mass;
    double atom = 0;           // weight of the removed atom, 0 if none
    double raw = 0;            // mu_s(B) / mu_delta(B)
    double atom_removed = 0;
    double raw_normalized = 0;  // same, divided by the total mass over one period
    double atom_removed_normalized = 0;
};

struct ContinuityResult {
    std::vector<ContinuityRow> rows;
    std::optional<BoundaryPoint> atom;  // cusp in B with |H_p| > 2R
    ComparabilityBand raw_band, atom_removed_band;
    ComparabilityBand raw_normalized_band, atom_removed_normalized_band;
    bool raw_increasing = false;
    bool raw_normalized_increasing = false;
};

/// s_list strictly decreasing, every s > delta; d=1 uses the zeta-refined mass.
ContinuityResult continuity_experiment(const GroupPreset& g, const Ball& ball, const std::vector<double>& s_list,
                                       std::int64_t q_cut);

struct CalibrationGrid {
    std::vector<ExactPoint> zs;
    std::vector<Rational> Rs;
    std::vector<Rational> Cs;
    int scales = 3;
    double target = 50;
    // intermediate window search
    std::vector<ExactPoint> z0s;
    std::vector<int> ns;
    std::vector<Rational> intermediate_Rs;
    std::vector<Rational> c1s, c2s;
    std::size_t min_intermediate = 50;

    /// Default grid for a preset.
    static CalibrationGrid standard(const GroupPreset& g);
};

struct Calibration {
    std::string group;
    Rational tau;
    Rational C;
    Rational c1, c2;
    ComparabilityBand local_band;
    ComparabilityBand intermediate_band;
    double c_upper = 0;
    /// Every (tau, C) tried with its local spread (inf when undefined).
    std::vector<std::tuple<Rational, Rational, double>> tried;
};

/// Minimizes the local spread over tau candidates and C <= 1 subject to the
/// target, then picks the widest admissible (c1, c2). Throws TooFewSamples for
/// grids with fewer than two centres or radii, CalibrationFailure otherwise.
Calibration calibrate(const GroupPreset& g, const std::vector<Rational>& tau_candidates,
                      const CalibrationGrid& grid);

}  // namespace horo
