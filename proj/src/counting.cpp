#include "horocount/counting.hpp"

#include "horocount/parallel.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace horo {

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Local: return "local";
        case Regime::Theoretical: return "theoretical";
        case Regime::Intermediate: return "intermediate";
        case Regime::Proximity: return "proximity";
        case Regime::Global: return "global";
    }
    return "?";
}

namespace {

Rational tau_power(const Rational& tau, int k) { return pow_q(tau, static_cast<unsigned>(k)); }

double inverse_power(const Rational& tau, int k, double delta) {
    return std::pow(Rational(1 / tau).get_d(), k * delta);
}

// |z - p0|^2 with p0 finite.
Rational offset2(const ExactPoint& z, const BoundaryPoint& p0) { return dist2(z, p0.value()); }

std::uint64_t exact_count(const GroupPreset& g, const Ball& ball, const Rational& tau, int k) {
    const auto band = scale_band(tau, k);
    if (band.qnorm_max <= band.qnorm_min) return 0;
    return count_in_ball(g.boundary_dimension, ball, band);
}

}  // namespace

CountQuery CountQuery::make(const GroupPreset& g, ExactPoint z, Rational R, Rational tau, int k) {
    if (sgn(R) <= 0) throw Error(ErrorKind::InvalidArgument, "R must be positive");
    if (tau <= 0 || tau >= 1) throw Error(ErrorKind::InvalidArgument, "tau must lie in (0,1)");
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be a positive integer");
    if (g.boundary_dimension == 1 && sgn(z.im) != 0)
        throw Error(ErrorKind::InvalidArgument, "centre must be real for a one-dimensional boundary");
    return {&g, std::move(z), std::move(R), std::move(tau), k};
}

ComparabilityBand band_fit_ratios(const std::vector<double>& ratios) {
    if (ratios.empty()) throw Error(ErrorKind::EmptyInput, "band_fit needs at least one record");
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    return {*lo, *hi, ratios.size()};
}

ComparabilityBand band_fit(const std::vector<CountRecord>& records) {
    std::vector<double> ratios;
    for (const auto& r : records) {
        if (!r.in_regime) continue;
        if (!(r.prediction > 0)) throw Error(ErrorKind::InvalidArgument, "band_fit needs positive predictions");
        ratios.push_back(r.ratio());
    }
    return band_fit_ratios(ratios);
}

bool within_band(const ComparabilityBand& observed, const ComparabilityBand& reference, double factor) {
    return observed.c_lo >= reference.c_lo / factor && observed.c_hi <= reference.c_hi * factor;
}

CountRecord count_in_ball(const CountQuery& q) {
    const GroupPreset& g = *q.group;
    CountRecord rec{q, 0, 0, Regime::Local, q.small_scale()};
    rec.count = exact_count(g, q.ball(), q.tau, q.k);
    rec.prediction = inverse_power(q.tau, q.k, g.delta) * mu_delta_ball(g, q.ball());
    rec.regime = tau_power(q.tau, q.k) < q.R * q.R ? Regime::Local : Regime::Theoretical;
    return rec;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "fit_line: size mismatch");
    if (x.size() < std::max<std::size_t>(min_points, 2))
        throw Error(ErrorKind::TooFewSamples, "regression needs at least " + std::to_string(min_points) + " points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw Error(ErrorKind::TooFewSamples, "regression needs distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.slope * x[i] + f.intercept);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

GlobalCount global_count(const GroupPreset& g, const Rational& tau, int k_lo, int k_hi) {
    if (tau <= 0 || tau >= 1) throw Error(ErrorKind::InvalidArgument, "tau must lie in (0,1)");
    if (k_lo < 1 || k_hi - k_lo + 1 < 4)
        throw Error(ErrorKind::TooFewSamples, "global_count needs k_lo >= 1 and at least 4 scales");
    const Window& w = g.fundamental_window;
    const ExactPoint centre{(w.x.lo + w.x.hi) / 2, g.boundary_dimension == 2 ? (w.y.lo + w.y.hi) / 2 : Rational(0)};
    const Rational half = (w.x.hi - w.x.lo) / 2;

    GlobalCount out;
    out.records = parallel_map(static_cast<std::size_t>(k_hi - k_lo + 1), [&](std::size_t i) {
        const int k = k_lo + static_cast<int>(i);
        CountRecord rec{CountQuery::make(g, centre, half, tau, k), 0, 0, Regime::Global, true};
        const auto band = scale_band(tau, k);
        if (band.qnorm_max > band.qnorm_min)
            rec.count = g.boundary_dimension == 1 ? count_rationals(w.x, band) : count_gaussian_fundamental(band);
        rec.prediction = inverse_power(tau, k, g.delta);
        return rec;
    });
    std::vector<double> xs, ys;
    const double step = std::log(Rational(1 / tau).get_d());
    for (const auto& r : out.records) {
        if (r.count == 0) continue;
        xs.push_back(r.query.k * step);
        ys.push_back(std::log(static_cast<double>(r.count)));
    }
    out.fit = fit_line(xs, ys);
    out.band = band_fit(out.records);
    return out;
}

LocalExperiment local_count_experiment(const GroupPreset& g, const std::vector<ExactPoint>& zs,
                                       const std::vector<Rational>& Rs, const Rational& tau,
                                       const Rational& C, int scales) {
    if (sgn(C) <= 0 || C > 1) throw Error(ErrorKind::InvalidArgument, "C must lie in (0,1]");
    if (scales < 1) throw Error(ErrorKind::InvalidArgument, "scales must be positive");
    struct Job {
        std::size_t zi, ri;
        int k;
        bool local;
    };
    std::vector<Job> jobs;
    for (std::size_t zi = 0; zi < zs.size(); ++zi)
        for (std::size_t ri = 0; ri < Rs.size(); ++ri) {
            const Rational& R = Rs[ri];
            const Rational floor_scale = C * R * R;
            int k = 1;
            Rational tk = tau;
            for (; tk > R; tk *= tau) ++k;
            for (; tk >= floor_scale; tk *= tau, ++k) jobs.push_back({zi, ri, k, false});
            for (int j = 0; j < scales; ++j) jobs.push_back({zi, ri, k + j, true});
        }
    auto records = parallel_map(jobs.size(), [&](std::size_t i) {
        return count_in_ball(CountQuery::make(g, zs[jobs[i].zi], Rs[jobs[i].ri], tau, jobs[i].k));
    });
    LocalExperiment out;
    double c_upper = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (records[i].in_regime) c_upper = std::max(c_upper, records[i].ratio());
        (jobs[i].local ? out.records : out.theoretical).push_back(std::move(records[i]));
    }
    out.band = band_fit(out.records);
    out.c_upper = c_upper;
    return out;
}

ExactPoint parabolic_iterate(const ExactPoint& z0, int n) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "iterate index must be nonnegative");
    // z / (n z + 1)
    const Rational wr = Rational(n) * z0.re + 1, wi = Rational(n) * z0.im;
    const Rational nw = wr * wr + wi * wi;
    if (sgn(nw) == 0) throw Error(ErrorKind::InvalidArgument, "iterate hits the pole");
    return {(z0.re * wr + z0.im * wi) / nw, (z0.im * wr - z0.re * wi) / nw};
}

IntermediateQuery IntermediateQuery::make(const GroupPreset& g, ExactPoint z, Rational R, Rational tau, int k,
                                          BoundaryPoint p0, Rational c1, Rational c2) {
    CountQuery cq = CountQuery::make(g, std::move(z), std::move(R), std::move(tau), k);
    const auto fail = [](const std::string& m) { throw Error(ErrorKind::HypothesisViolated, m); };
    if (p0.is_infinity()) fail("p0 must be a finite cusp");
    if (c1 <= 1) fail("c1 must exceed 1");
    if (sgn(c2) <= 0 || c2 >= 1) fail("c2 must lie in (0,1)");
    const Rational tk = tau_power(cq.tau, k);
    if (tk >= cq.R) fail("intermediate regime needs tau^k < R");
    if (tk <= cq.R * cq.R) fail("intermediate regime needs tau^k > R^2");
    const Rational d2 = offset2(cq.z, p0);
    const Rational H = Rational(1) / Rational(p0.den().norm());
    if (c1 * c1 * tk > d2) fail("|z - p0| below c1 tau^(k/2)");
    if (d2 > c2 * c2 * cq.R * H) fail("|z - p0| above c2 sqrt(R |H_p0|)");
    return {std::move(cq), std::move(p0), std::move(c1), std::move(c2)};
}

CountRecord intermediate_experiment(const IntermediateQuery& q) {
    const CountQuery& c = q.count;
    const GroupPreset& g = *c.group;
    CountRecord rec{c, 0, 0, Regime::Intermediate, c.small_scale()};
    rec.count = exact_count(g, c.ball(), c.tau, c.k);
    rec.prediction = std::pow(Rational(c.R / tau_power(c.tau, c.k)).get_d(), g.delta);
    return rec;
}

std::vector<IntermediateQuery> intermediate_family(const GroupPreset& g, const std::vector<ExactPoint>& z0s,
                                                   const std::vector<int>& ns, const std::vector<Rational>& Rs,
                                                   const Rational& tau, const Rational& c1, const Rational& c2) {
    const BoundaryPoint p0 = BoundaryPoint::rational(0, 1);
    std::vector<IntermediateQuery> out;
    for (const auto& z0 : z0s)
        for (int n : ns) {
            const ExactPoint z = parabolic_iterate(z0, n);
            for (const auto& R : Rs) {
                // tau^k strictly between R^2 and R
                int k = 1;
                Rational tk = tau;
                for (; tk >= R; tk *= tau) ++k;
                for (; tk > R * R; tk *= tau, ++k) {
                    try {
                        out.push_back(IntermediateQuery::make(g, z, R, tau, k, p0, c1, c2));
                    } catch (const Error& e) {
                        if (e.kind() != ErrorKind::HypothesisViolated) throw;
                    }
                }
            }
        }
    return out;
}

ProximityQuery ProximityQuery::make(const GroupPreset& g, Rational lambda, Rational c, ExactPoint z, Rational R,
                                    BoundaryPoint p0) {
    const auto fail = [](const std::string& m) { throw Error(ErrorKind::HypothesisViolated, m); };
    if (lambda <= 1 || lambda > 2) fail("lambda must lie in (1,2]");
    if (c < 1) fail("c must be at least 1");
    if (sgn(R) <= 0) fail("R must be positive");
    if (p0.is_infinity()) fail("p0 must be a finite cusp");
    if (lambda == 2 && c <= Rational(p0.den().norm()))
        fail("lambda = 2 needs c > 1/|H_p0|");
    return {&g, std::move(lambda), std::move(c), std::move(z), std::move(R), std::move(p0)};
}

ProximityVerdict proximity_check(const ProximityQuery& q) {
    const GroupPreset& g = *q.group;
    ProximityVerdict v;
    const Rational H = Rational(1) / Rational(q.p0.den().norm());
    const Rational d2 = offset2(q.z, q.p0);
    const bool integral = q.lambda == 2;
    if (integral) {
        // c H R^2 - c^2 R^4 - d^2 - R^2 >= 2 R d, squared out exactly
        const Rational R2 = q.R * q.R;
        const Rational A = q.c * H * R2 - q.c * q.c * R2 * R2 - d2 - R2;
        v.hypothesis_met = sgn(A) >= 0 && A * A >= 4 * R2 * d2;
        v.qnorm_bound = floor_q(Rational(1) / (q.c * R2)).get_si();
    } else {
        const long double R = q.R.get_d(), lam = q.lambda.get_d(), c = q.c.get_d();
        const long double Rl = std::pow(R, lam);
        const long double lhs = c * H.get_d() * Rl;
        const long double d = std::sqrt(static_cast<long double>(d2.get_d()));
        const long double rhs = c * c * Rl * Rl + (d + R) * (d + R);
        v.hypothesis_met = lhs >= rhs * (1 + 1e-12L);
        // inclusive by a hair: a spurious extra cusp can only raise the count
        const long double X = 1 / (c * Rl);
        v.qnorm_bound = static_cast<std::int64_t>(std::floor(X * (1 + 1e-12L)));
    }
    if (v.qnorm_bound >= 1) {
        v.witnesses =
            enumerate_in_ball(g.boundary_dimension, {q.z, q.R}, DenominatorRange::make(0, v.qnorm_bound));
        v.count = v.witnesses.size();
    }
    return v;
}

ContinuityResult continuity_experiment(const GroupPreset& g, const Ball& ball, const std::vector<double>& s_list,
                                       std::int64_t q_cut) {
    if (s_list.empty()) throw Error(ErrorKind::EmptyInput, "continuity_experiment needs exponents");
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (!(s_list[i] > g.delta))
            throw Error(ErrorKind::InvalidArgument, "every s must exceed delta");
        if (i > 0 && !(s_list[i] < s_list[i - 1]))
            throw Error(ErrorKind::InvalidArgument, "s_list must be strictly decreasing");
    }
    ContinuityResult out;
    // the atom: |H_p| > 2R, i.e. |q|^2 < 1/(2R)
    const Integer bound = ceil_q(Rational(1) / (2 * ball.radius)) - 1;
    if (bound >= 1) {
        auto big = enumerate_in_ball(g.boundary_dimension, ball, DenominatorRange::make(0, bound.get_si()));
        if (!big.empty()) {
            out.atom = *std::min_element(big.begin(), big.end(), [](const auto& a, const auto& b) {
                return a.den().norm() < b.den().norm();
            });
        }
    }
    const double leb = mu_delta_ball(g, ball);
    out.rows = parallel_map(s_list.size(), [&](std::size_t i) {
        ContinuityRow row;
        row.s = s_list[i];
        row.mass = g.boundary_dimension == 1 ? mu_s_ball_refined(g, ball, row.s, q_cut)
                                             : mu_s_ball(g, ball, row.s, q_cut);
        row.atom = out.atom ? atom_weight(g, *out.atom, row.s) : 0.0;
        row.raw = row.mass.mid() / leb;
        row.atom_removed = (row.mass.mid() - row.atom) / leb;
        if (g.boundary_dimension == 1) {
            const double Z = conformal_normalizer(g, row.s);
            row.raw_normalized = row.raw / Z;
            row.atom_removed_normalized = row.atom_removed / Z;
        } else {
            row.raw_normalized = row.atom_removed_normalized = std::numeric_limits<double>::quiet_NaN();
        }
        return row;
    });
    const auto band_of = [&](double ContinuityRow::*field) {
        std::vector<double> v;
        for (const auto& r : out.rows) v.push_back(r.*field);
        return band_fit_ratios(v);
    };
    const auto increasing = [&](double ContinuityRow::*field) {
        for (std::size_t i = 1; i < out.rows.size(); ++i)
            if (!(out.rows[i].*field > out.rows[i - 1].*field)) return false;
        return true;
    };
    out.raw_band = band_of(&ContinuityRow::raw);
    out.atom_removed_band = band_of(&ContinuityRow::atom_removed);
    out.raw_increasing = increasing(&ContinuityRow::raw);
    if (g.boundary_dimension == 1) {
        out.raw_normalized_band = band_of(&ContinuityRow::raw_normalized);
        out.atom_removed_normalized_band = band_of(&ContinuityRow::atom_removed_normalized);
        out.raw_normalized_increasing = increasing(&ContinuityRow::raw_normalized);
    }
    return out;
}

CalibrationGrid CalibrationGrid::standard(const GroupPreset& g) {
    using namespace constants;
    CalibrationGrid grid;
    for (int j = 0; j <= 6; ++j) grid.Cs.push_back(Rational(1, 1 << j));
    grid.c1s = {Rational(3, 2), Rational(2), Rational(3), Rational(4)};
    grid.c2s = {Rational(9, 10), Rational(3, 4), Rational(1, 2), Rational(1, 4)};
    if (g.boundary_dimension == 1) {
        grid.zs = {{silver(), 0}, {golden(), 0}, {inv_e(), 0}};
        for (int j = 4; j <= 8; ++j) grid.Rs.push_back(Rational(1, 1 << j));
        grid.z0s = grid.zs;
        grid.ns = {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256};
        for (int j = 4; j <= 10; ++j) grid.intermediate_Rs.push_back(Rational(1, 1 << j));
    } else {
        // counts grow like 1/(C R)^2 per scale, so the disk grid stays coarse
        grid.Cs.resize(3);
        grid.scales = 2;
        grid.zs = {{silver(), golden()}, {golden(), inv_e()}, {inv_e(), silver()}};
        for (int j = 3; j <= 4; ++j) grid.Rs.push_back(Rational(1, 1 << j));
        grid.z0s = grid.zs;
        grid.ns = {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128};
        for (int j = 3; j <= 8; ++j) grid.intermediate_Rs.push_back(Rational(1, 1 << j));
    }
    return grid;
}

Calibration calibrate(const GroupPreset& g, const std::vector<Rational>& tau_candidates,
                      const CalibrationGrid& grid) {
    if (grid.zs.size() < 2 || grid.Rs.size() < 2)
        throw Error(ErrorKind::TooFewSamples, "calibration grid needs at least two centres and two radii");
    if (tau_candidates.empty() || grid.Cs.empty())
        throw Error(ErrorKind::TooFewSamples, "calibration needs tau and C candidates");
    Calibration cal;
    cal.group = g.name;
    double best = HUGE_VAL;
    std::string diagnostics;
    for (const auto& tau : tau_candidates) {
        for (const auto& C : grid.Cs) {
            const auto ex = local_count_experiment(g, grid.zs, grid.Rs, tau, C, grid.scales);
            const double spread = ex.band.c_lo > 0 ? ex.band.spread() : HUGE_VAL;
            cal.tried.emplace_back(tau, C, spread);
            diagnostics += " tau=" + to_string(tau) + ",C=" + to_string(C) + ":" + std::to_string(spread);
            // strict improvement only, so ties keep the earlier (larger) candidate
            if (spread <= grid.target && spread < best) {
                best = spread;
                cal.tau = tau;
                cal.C = C;
                cal.local_band = ex.band;
                cal.c_upper = ex.c_upper;
            }
        }
    }
    if (best == HUGE_VAL)
        throw Error(ErrorKind::CalibrationFailure,
                    "no (tau, C) with local spread <= " + std::to_string(grid.target) + ";" + diagnostics);

    double widest = 0;
    std::string idiag;
    for (const auto& c1 : grid.c1s)
        for (const auto& c2 : grid.c2s) {
            const auto family = intermediate_family(g, grid.z0s, grid.ns, grid.intermediate_Rs, cal.tau, c1, c2);
            idiag += " c1=" + to_string(c1) + ",c2=" + to_string(c2) + ":n=" + std::to_string(family.size());
            if (family.size() < grid.min_intermediate) continue;
            auto recs = parallel_map(family.size(), [&](std::size_t i) { return intermediate_experiment(family[i]); });
            const auto band = band_fit(recs);
            idiag += ",spread=" + std::to_string(band.c_lo > 0 ? band.spread() : HUGE_VAL);
            if (band.c_lo <= 0 || band.spread() > grid.target) continue;
            const double width = Rational(c2 / c1).get_d();
            if (width > widest) {
                widest = width;
                cal.c1 = c1;
                cal.c2 = c2;
                cal.intermediate_band = band;
            }
        }
    if (widest == 0)
        throw Error(ErrorKind::CalibrationFailure, "no admissible intermediate window (c1, c2);" + idiag);
    return cal;
}

}  // namespace horo
