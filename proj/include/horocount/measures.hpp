#pragma once

// Model measures: Lebesgue as the Patterson-Sullivan measure of the presets,
// purely atomic s-conformal models with weights |H_p|^s, horoball penetration
// depth along vertical geodesics, and the two global measure formulae.

#include "horocount/farey.hpp"

#include <cmath>
#include <optional>

namespace horo {

struct MassInterval {
    double lower = 0;
    double upper = 0;

    double mid() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
};

/// Lebesgue length (d=1) or area (d=2) of the ball, optionally clipped to the
/// fundamental window. Throws UnsupportedMeasure for dim outside {1,2}.
double mu_delta_ball(const GroupPreset& g, const Ball& ball, bool clip = false);

/// |H_p|^s = |q|^(-2s). Throws DivergentModel for s <= delta.
double atom_weight(const GroupPreset& g, const BoundaryPoint& p, double s);

/// Atoms with |q| <= q_cut summed exactly; the tail is bounded by
/// sum_{|q|>q_cut} (2R|q|^d + c_d)|q|^(-2s), c_1 = 1, c_2 = 4, in closed form.
/// Requires q_cut >= ceil(1/R). Throws IncreaseQcut when width exceeds
/// rel_tol * upper.
MassInterval mu_s_ball(const GroupPreset& g, const Ball& ball, double s, std::int64_t q_cut,
                       double rel_tol = HUGE_VAL);

/// d=1 only: tail split as 2R * sum_{q>Q} phi(q) q^(-2s), evaluated from
/// zeta(2s-1)/zeta(2s), plus a rigorous bound on the lattice discrepancy.
/// Converges for all s > 1 at practical cutoffs.
MassInterval mu_s_ball_refined(const GroupPreset& g, const Ball& ball, double s, std::int64_t q_cut);

/// Total atomic mass over one period, sum_{p in [0,1)} |H_p|^s = zeta(2s-1)/zeta(2s) (d=1).
double conformal_normalizer(const GroupPreset& g, double s);

/// Exact ratio t*y / (|x-p|^2 + y^2) when (x, y) lies strictly inside H(p, t);
/// for horoballs at infinity y / height.
std::optional<Rational> penetration_ratio(const Horoball& h, const ExactPoint& x, const Rational& y);

struct ProbeResult {
    std::optional<Horoball> cusp;  // containing standard horoball
    Rational ratio = 1;            // 1 when outside every horoball
    double rho = 0;                // log(ratio)
    int k = 0;                     // rank of the containing cusp, else 0
};

/// Locates the standard horoball containing (x, y), y > 0.
ProbeResult probe(const GroupPreset& g, const ExactPoint& x, const Rational& y);

struct GeodesicProbe {
    ExactPoint z;
    double T = 0;
    double rho = 0;
    int k = 0;
    std::optional<BoundaryPoint> containing_cusp;
};

/// Probe point (z, e^-T) on the vertical geodesic ending at z.
GeodesicProbe rho(const GroupPreset& g, const ExactPoint& z, double T);

/// e^(-T delta) * e^(-rho (delta - k)).
double fluctuation_formula(double delta, int k, double rho, double T);
double global_formula_delta(const GroupPreset& g, const ExactPoint& z, double T);

struct FormulaTerms {
    double term1 = 0;
    double term2 = 0;
    double term3 = 0;
    double total = 0;
    std::optional<BoundaryPoint> p_prime;
    /// Scale indices k with C R^2 <= tau^k < R.
    int k_first = 0;
    int k_last = -1;
};

/// Three-term estimate for mu_s(B(z,R)). p' must satisfy |H_p'| >= tau^k0,
/// k0 the smallest integer with tau^k0 < R.
FormulaTerms global_formula_s(const GroupPreset& g, const Ball& ball, double s, const Rational& tau,
                              const Rational& C);

/// Smallest integer k >= 0 with tau^k < R.
int first_scale_below(const Rational& tau, const Rational& R);

struct MeasureRecord {
    ExactPoint z;
    Rational R;
    double s = 0;
    FormulaTerms terms;
    MassInterval mass;
};

}  // namespace horo
