#include "horocount/measures.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace horo {

namespace {

void require_dim(const GroupPreset& g) {
    if (g.boundary_dimension != 1 && g.boundary_dimension != 2)
        throw Error(ErrorKind::UnsupportedMeasure, "no model measure for group " + g.name);
}

void require_conformal(const GroupPreset& g, double s) {
    if (!(s > g.delta))
        throw Error(ErrorKind::DivergentModel,
                    "s-conformal model needs s > delta = " + std::to_string(g.delta) + ", got " + std::to_string(s));
}

// Area of a disk intersected with an axis-aligned box.
double disk_box_area(double cx, double cy, double r, double x0, double x1, double y0, double y1) {
    const double a = std::max(x0, cx - r), b = std::min(x1, cx + r);
    if (a >= b || y0 >= y1) return 0.0;
    auto chord = [&](double x) {
        const double h = std::sqrt(std::max(0.0, r * r - (x - cx) * (x - cx)));
        return std::max(0.0, std::min(y1, cy + h) - std::max(y0, cy - h));
    };
    // Split where the chord ends cross the box edges so each piece is smooth.
    std::vector<double> cuts{a, b};
    for (double yb : {y0, y1}) {
        const double d = yb - cy;
        if (std::abs(d) < r) {
            const double w = std::sqrt(r * r - d * d);
            for (double x : {cx - w, cx + w})
                if (x > a && x < b) cuts.push_back(x);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double area = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        area += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(chord, cuts[i], cuts[i + 1], 15, 1e-13);
    return area;
}

}  // namespace

double mu_delta_ball(const GroupPreset& g, const Ball& ball, bool clip) {
    require_dim(g);
    if (sgn(ball.radius) < 0) throw Error(ErrorKind::InvalidArgument, "ball radius must be nonnegative");
    const double r = ball.radius.get_d();
    if (g.boundary_dimension == 1) {
        if (!clip) return 2 * r;
        const Interval& w = g.fundamental_window.x;
        const Rational lo = std::max<Rational>(ball.center.re - ball.radius, w.lo);
        const Rational hi = std::min<Rational>(ball.center.re + ball.radius, w.hi);
        return hi > lo ? Rational(hi - lo).get_d() : 0.0;
    }
    if (!clip) return std::numbers::pi * r * r;
    const Window& w = g.fundamental_window;
    return disk_box_area(ball.center.re.get_d(), ball.center.im.get_d(), r, w.x.lo.get_d(), w.x.hi.get_d(),
                         w.y.lo.get_d(), w.y.hi.get_d());
}

double atom_weight(const GroupPreset& g, const BoundaryPoint& p, double s) {
    require_conformal(g, s);
    if (p.is_infinity()) throw Error(ErrorKind::InvalidArgument, "the model carries no atom at infinity");
    return std::pow(p.den().norm().get_d(), -s);
}

namespace {

void check_cut(const Ball& ball, std::int64_t q_cut) {
    if (q_cut < 1) throw Error(ErrorKind::InvalidArgument, "Q_cut must be positive");
    if (sgn(ball.radius) < 0) throw Error(ErrorKind::InvalidArgument, "ball radius must be nonnegative");
    if (sgn(ball.radius) > 0 && Integer(static_cast<long>(q_cut)) < ceil_q(1 / ball.radius))
        throw Error(ErrorKind::InvalidArgument, "Q_cut must be at least ceil(1/R)");
}

// Atoms with |q|^2 <= q_cut^2, summed in increasing norm order.
double atom_sum(const GroupPreset& g, const Ball& ball, double s, std::int64_t q_cut) {
    long double total = 0;
    for_each_norm_count(g.boundary_dimension, ball, {0, q_cut * q_cut}, [&](std::int64_t n, std::uint64_t c) {
        total += static_cast<long double>(c) * std::pow(static_cast<long double>(n), static_cast<long double>(-s));
    });
    return static_cast<double>(total);
}

}  // namespace

MassInterval mu_s_ball(const GroupPreset& g, const Ball& ball, double s, std::int64_t q_cut, double rel_tol) {
    require_dim(g);
    require_conformal(g, s);
    check_cut(ball, q_cut);
    const double lower = atom_sum(g, ball, s, q_cut);
    const double R = ball.radius.get_d();
    const double Q = static_cast<double>(q_cut);
    double tail;
    if (g.boundary_dimension == 1) {
        // integral over x > Q of (2R x + 1) x^(-2s)
        tail = 2 * R * std::pow(Q, 2 - 2 * s) / (2 * s - 2) + std::pow(Q, 1 - 2 * s) / (2 * s - 1);
    } else {
        // Canonical q off the real axis: one unit cell per q inside the quadrant,
        // outside radius Q - sqrt 2; real q by the one-dimensional integral.
        const double Qp = std::max(Q - std::numbers::sqrt2, 1e-300);
        const double plane = (std::numbers::pi / 2) * (2 * R * std::pow(Qp, 4 - 2 * s) / (2 * s - 4) +
                                                       4 * std::pow(Qp, 2 - 2 * s) / (2 * s - 2));
        const double axis = 2 * R * std::pow(Q, 3 - 2 * s) / (2 * s - 3) + 4 * std::pow(Q, 1 - 2 * s) / (2 * s - 1);
        tail = plane + axis;
    }
    const MassInterval m{lower, lower + tail};
    if (m.width() > rel_tol * m.upper)
        throw Error(ErrorKind::IncreaseQcut, "mass interval width " + std::to_string(m.width()) +
                                                 " exceeds tolerance at Q_cut=" + std::to_string(q_cut));
    return m;
}

double conformal_normalizer(const GroupPreset& g, double s) {
    require_conformal(g, s);
    if (g.boundary_dimension != 1)
        throw Error(ErrorKind::UnsupportedMeasure, "normalizer implemented for the real line only");
    return std::riemann_zeta(2 * s - 1) / std::riemann_zeta(2 * s);
}

MassInterval mu_s_ball_refined(const GroupPreset& g, const Ball& ball, double s, std::int64_t q_cut) {
    if (g.boundary_dimension != 1) return mu_s_ball(g, ball, s, q_cut);
    require_conformal(g, s);
    check_cut(ball, q_cut);
    const double partial = atom_sum(g, ball, s, q_cut);
    long double phi_sum = 0;
    for (std::int64_t q = 1; q <= q_cut; ++q)
        phi_sum += static_cast<long double>(totient(q)) *
                   std::pow(static_cast<long double>(q), static_cast<long double>(-2 * s));
    const double phi_tail = std::max(0.0, conformal_normalizer(g, s) - static_cast<double>(phi_sum));
    const double sigma = 2 * s;
    const double Q = static_cast<double>(q_cut);
    // sum_{q>Q} 2^omega(q) q^-sigma <= sum d(q) q^-sigma, with D(x) <= x(1 + ln x).
    const double disc = sigma * std::pow(Q, 1 - sigma) *
                        ((std::log(Q) + 1) / (sigma - 1) + 1 / ((sigma - 1) * (sigma - 1)));
    const double main = 2 * ball.radius.get_d() * phi_tail;
    const double slack = 1e-12 * (partial + main) + 1e-13 * static_cast<double>(phi_sum) * ball.radius.get_d();
    return {partial + std::max(0.0, main - disc - slack), partial + main + disc + slack};
}

std::optional<Rational> penetration_ratio(const Horoball& h, const ExactPoint& x, const Rational& y) {
    if (sgn(y) <= 0) throw Error(ErrorKind::InvalidArgument, "probe height must be positive");
    Rational ratio;
    if (h.at_infinity()) {
        ratio = y / h.size;
    } else {
        ratio = h.size * y / (dist2(x, h.tangent.value()) + y * y);
    }
    if (ratio > 1) return ratio;
    return std::nullopt;
}

namespace {

void consider(ProbeResult& best, const Horoball& h, const ExactPoint& x, const Rational& y, int k) {
    if (auto r = penetration_ratio(h, x, y); r && *r > best.ratio) {
        best.cusp = h;
        best.ratio = *r;
        best.k = k;
    }
}

}  // namespace

ProbeResult probe(const GroupPreset& g, const ExactPoint& x, const Rational& y) {
    ProbeResult best;
    const int k = g.k_min;  // every cusp of the presets has full rank
    consider(best, g.base_horoball, x, y, k);
    if (!best.cusp) {
        // Inside H(p/q, 1/|q|^2) forces |q|^2 < 1/y and |x - p/q| < 1/(2|q|^2).
        const Rational inv = 1 / y;
        if (g.boundary_dimension == 1) {
            if (sgn(x.im) != 0) throw Error(ErrorKind::InvalidArgument, "real-line probe needs a real coordinate");
            // Legendre: such p/q is a convergent of x.
            Integer h0 = 1, h1 = floor_q(x.re), k0 = 0, k1 = 1;
            Rational rest = x.re - Rational(h1);
            while (Rational(k1 * k1) < inv) {
                consider(best, {BoundaryPoint::rational(h1, k1), Rational(1, k1 * k1)}, x, y, k);
                if (sgn(rest) == 0) break;
                const Rational inv_rest = 1 / rest;
                const Integer a = floor_q(inv_rest);
                rest = inv_rest - Rational(a);
                Integer h2 = a * h1 + h0, k2 = a * k1 + k0;
                h0 = std::move(h1);
                h1 = std::move(h2);
                k0 = std::move(k1);
                k1 = std::move(k2);
            }
        } else {
            const Integer lim = ceil_q(inv);
            if (lim > 10'000'000)
                throw Error(ErrorKind::InvalidArgument, "probe too deep for the Gaussian scan");
            const double xr = x.re.get_d(), xi = x.im.get_d();
            for (const auto& [qa, qb] : canonical_gaussians({0, lim.get_si()})) {
                if (Rational(qa * qa + qb * qb) >= inv) continue;
                const double pr = xr * qa - xi * qb, pi = xr * qb + xi * qa;
                for (double fr : {std::floor(pr), std::floor(pr) + 1}) {
                    for (double fi : {std::floor(pi), std::floor(pi) + 1}) {
                        const Gaussian p(Integer(static_cast<long>(fr)), Integer(static_cast<long>(fi)));
                        const Gaussian q(Integer(static_cast<long>(qa)), Integer(static_cast<long>(qb)));
                        if (!is_unit(gcd(p, q))) continue;
                        consider(best, {BoundaryPoint::fraction(p, q), Rational(1, q.norm())}, x, y, k);
                    }
                }
            }
        }
    }
    if (best.cusp) best.rho = std::log(best.ratio.get_d());
    return best;
}

GeodesicProbe rho(const GroupPreset& g, const ExactPoint& z, double T) {
    if (!(T >= 0)) throw Error(ErrorKind::InvalidArgument, "geodesic time must be nonnegative");
    const Rational y = from_double(std::exp(-T));
    const ProbeResult r = probe(g, z, y);
    GeodesicProbe out{z, T, r.rho, r.k, std::nullopt};
    if (r.cusp) out.containing_cusp = r.cusp->tangent;
    return out;
}

double fluctuation_formula(double delta, int k, double rho_value, double T) {
    return std::exp(-T * delta) * std::exp(-rho_value * (delta - k));
}

double global_formula_delta(const GroupPreset& g, const ExactPoint& z, double T) {
    const GeodesicProbe p = rho(g, z, T);
    return fluctuation_formula(g.delta, p.k, p.rho, T);
}

int first_scale_below(const Rational& tau, const Rational& R) {
    if (tau <= 0 || tau >= 1) throw Error(ErrorKind::InvalidArgument, "tau must lie in (0,1)");
    if (sgn(R) <= 0) throw Error(ErrorKind::InvalidArgument, "R must be positive");
    int k = 0;
    Rational t = 1;
    while (t >= R) {
        t *= tau;
        ++k;
    }
    return k;
}

FormulaTerms global_formula_s(const GroupPreset& g, const Ball& ball, double s, const Rational& tau,
                              const Rational& C) {
    require_conformal(g, s);
    const int dim = g.boundary_dimension;
    const Rational& R = ball.radius;
    FormulaTerms t;
    t.term1 = std::pow(R.get_d(), 2 * (s - g.delta)) * mu_delta_ball(g, ball);

    const int k0 = first_scale_below(tau, R);
    const Rational floor_scale = C * R * R;
    t.k_first = k0;
    t.k_last = k0 - 1;
    Rational tk = pow_q(tau, static_cast<unsigned>(k0));
    for (int k = k0; tk >= floor_scale; ++k, tk *= tau) {
        const auto band = scale_band(tau, k);
        if (band.qnorm_max > band.qnorm_min)
            t.term2 += static_cast<double>(count_in_ball(dim, ball, band)) * std::pow(tk.get_d(), s);
        t.k_last = k;
    }

    // Largest horoball in the ball, i.e. the smallest denominator norm.
    const Integer nmax = floor_q(1 / pow_q(tau, static_cast<unsigned>(k0)));
    for (std::int64_t n = 1; Integer(static_cast<long>(n)) <= nmax; ++n) {
        if (count_in_ball(dim, ball, {n - 1, n}) == 0) continue;
        const auto pts = enumerate_in_ball(dim, ball, {n - 1, n});
        t.p_prime = pts.front();
        t.term3 = std::pow(static_cast<double>(n), -s);
        break;
    }
    t.total = t.term1 + t.term2 + t.term3;
    return t;
}

}  // namespace horo
