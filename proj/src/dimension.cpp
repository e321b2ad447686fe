#include "horocount/dimension.hpp"

#include "horocount/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace horo {

double MeasureModel::mass(const Ball& ball) const {
    if (!s) return mu_delta_ball(*group, ball);
    std::int64_t q = std::max<std::int64_t>(256, ceil_q(1 / ball.radius).get_si());
    for (;;) {
        const MassInterval m = mu_s_ball_refined(*group, ball, *s, q);
        if (m.lower > 0 && m.width() <= rel_tol * m.lower) return m.lower;
        if (q >= max_q_cut)
            throw Error(ErrorKind::IncreaseQcut, "tail certification fails at radius " + to_string(ball.radius) +
                                                     " (Q_cut " + std::to_string(q) + ")");
        q = std::min(2 * q, max_q_cut);
    }
}

ScaleRegression ScaleRegression::make(std::vector<double> x, std::vector<double> y, double theta) {
    if (x.size() < 4) throw Error(ErrorKind::TooFewSamples, "scale regression needs at least 4 scales");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw Error(ErrorKind::InvalidArgument, "scales must be strictly decreasing");
    ScaleRegression r;
    r.fit = fit_line(x, y);
    if (!std::isfinite(r.fit.slope)) throw Error(ErrorKind::InvalidArgument, "regression slope is not finite");
    r.x = std::move(x);
    r.y = std::move(y);
    r.theta = theta;
    return r;
}

CenterGrid CenterGrid::standard(const GroupPreset& g) {
    using namespace constants;
    CenterGrid grid;
    if (g.boundary_dimension == 1) {
        grid.fixed = {{"silver", {silver(), 0}}, {"golden", {golden(), 0}}, {"inv_e", {inv_e(), 0}},
                      {"1/2", {Rational(1, 2), 0}}, {"1/3", {Rational(1, 3), 0}}};
    } else {
        grid.fixed = {{"silver+golden*i", {silver(), golden()}}, {"golden+inv_e*i", {golden(), inv_e()}},
                      {"1/2", {Rational(1, 2), 0}}, {"(1+i)/2", {Rational(1, 2), Rational(1, 2)}}};
    }
    grid.witnesses = {BoundaryPoint::rational(0, 1), BoundaryPoint::rational(1, 2), BoundaryPoint::rational(1, 3)};
    return grid;
}

std::vector<Rational> dyadic_scales(int from, int to) {
    std::vector<Rational> out;
    for (int j = from; j <= to; ++j) out.push_back(Rational(1) / pow_q(Rational(2), static_cast<unsigned>(j)));
    return out;
}

namespace {

void require_scales(const std::vector<Rational>& r) {
    if (r.size() < 6) throw Error(ErrorKind::TooFewSamples, "dimension estimates need at least 6 scales");
    const Rational q = r[1] / r[0];
    if (sgn(r.back()) <= 0 || q >= 1 || r.front() >= 1)
        throw Error(ErrorKind::InvalidArgument, "scales must decrease within (0,1)");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i] / r[i - 1] != q) throw Error(ErrorKind::InvalidArgument, "scales must be geometric");
}

struct Centre {
    std::string label;
    const ExactPoint* fixed = nullptr;
    const BoundaryPoint* witness = nullptr;
};

std::vector<Centre> centres(const CenterGrid& grid) {
    std::vector<Centre> out;
    for (const auto& [label, x] : grid.fixed) out.push_back({label, &x, nullptr});
    for (const auto& p : grid.witnesses) out.push_back({"witness@" + p.str(), nullptr, &p});
    return out;
}

ExactPoint centre_at(const Centre& c, const Rational& r, const Rational& offset) {
    if (c.fixed) return *c.fixed;
    ExactPoint x = c.witness->value();
    x.re += offset * r;
    return x;
}

}  // namespace

BoxEstimate box_dim_estimate(const MeasureModel& model, const std::vector<Rational>& r_list,
                             const CenterGrid& grid) {
    require_scales(r_list);
    const auto cs = centres(grid);
    if (cs.empty()) throw Error(ErrorKind::EmptyInput, "centre grid is empty");
    const std::size_t nr = r_list.size(), nc = cs.size();
    const auto values = parallel_map(nr * nc, [&](std::size_t i) {
        const Rational& r = r_list[i / nc];
        return model.mass({centre_at(cs[i % nc], r, grid.offset), r});
    });

    BoxEstimate out;
    for (std::size_t c = 0; c < nc; ++c) {
        Series s{cs[c].label, {}};
        for (std::size_t j = 0; j < nr; ++j)
            if (values[j * nc + c] > 0) s.points.emplace_back(std::log(r_list[j].get_d()), std::log(values[j * nc + c]));
        out.series.push_back(std::move(s));
    }
    // x = -log r increases as r shrinks; slope of log m against log r is -dy/dx
    std::vector<double> x, y;
    for (std::size_t j = 0; j < nr; ++j) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < nc; ++c)
            if (values[j * nc + c] < values[j * nc + best]) best = c;
        const double m = values[j * nc + best];
        if (!(m > 0)) throw Error(ErrorKind::InvalidArgument, "centre grid leaves the support at radius " + to_string(r_list[j]));
        x.push_back(-std::log(r_list[j].get_d()));
        y.push_back(-std::log(m));
        out.argmin.push_back(cs[best].label);
    }
    out.fit = ScaleRegression::make(x, y);
    out.upper = out.fit.fit.slope;
    out.lower = out.upper;
    for (std::size_t a = 0; a < nr; ++a)
        for (std::size_t b = a + 4; b <= nr; ++b) {
            const std::vector<double> xs(x.begin() + a, x.begin() + b), ys(y.begin() + a, y.begin() + b);
            out.lower = std::min(out.lower, fit_line(xs, ys).slope);
        }
    return out;
}

SpectrumEstimate assouad_spectrum_estimate(const MeasureModel& model, double theta,
                                           const std::vector<Rational>& r_list, const CenterGrid& grid) {
    if (!(theta > 0 && theta < 1)) throw Error(ErrorKind::InvalidArgument, "theta must lie in (0,1)");
    require_scales(r_list);
    const auto cs = centres(grid);
    if (cs.empty()) throw Error(ErrorKind::EmptyInput, "centre grid is empty");
    const std::size_t nr = r_list.size(), nc = cs.size();
    // R = r^theta as a dyadic-exact rational
    std::vector<Rational> big;
    for (const auto& r : r_list) big.push_back(from_double(std::pow(r.get_d(), theta)));
    const auto ratios = parallel_map(nr * nc, [&](std::size_t i) {
        const std::size_t j = i / nc;
        const ExactPoint x = centre_at(cs[i % nc], r_list[j], grid.offset);
        const double small = model.mass({x, r_list[j]});
        return small > 0 ? model.mass({x, big[j]}) / small : HUGE_VAL;
    });

    SpectrumEstimate out;
    out.theta = theta;
    out.estimate = -HUGE_VAL;
    out.pointwise_max = -HUGE_VAL;
    if (model.s) out.target = spectrum_target(*model.group, *model.s, theta);
    else out.target = 0;
    for (std::size_t c = 0; c < nc; ++c) {
        Series s{cs[c].label, {}};
        std::vector<double> xs, ys;
        for (std::size_t j = 0; j < nr; ++j) {
            const double ratio = ratios[j * nc + c];
            if (!std::isfinite(ratio)) continue;
            const double lr = std::log(r_list[j].get_d());
            const double scale = (theta - 1) * lr;  // log r^(theta-1) > 0
            s.points.emplace_back(lr, std::log(ratio));
            xs.push_back(scale);
            ys.push_back(std::log(ratio));
            const double v = std::log(ratio) / scale;
            if (v > out.pointwise_max) {
                out.pointwise_max = v;
                out.witness_r = r_list[j].get_d();
            }
        }
        if (xs.size() >= 4) {
            const double slope = ScaleRegression::make(xs, ys, theta).fit.slope;
            if (slope > out.estimate) {
                out.estimate = slope;
                out.witness = cs[c].label;
            }
        }
        out.series.push_back(std::move(s));
    }
    if (out.witness.empty()) throw Error(ErrorKind::TooFewSamples, "no centre produced 4 usable scales");
    return out;
}

double box_dim_target(const GroupPreset& g, double s) { return 2 * s - g.k_min; }

double spectrum_target(const GroupPreset& g, double s, double theta) {
    return (2 * s - g.k_min) / (1 - theta);
}

}  // namespace horo
