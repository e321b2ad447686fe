#include "horocount/orbit.hpp"

#include "horocount/farey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

namespace horo {

Rational HoroballSet::min_diameter() const {
    if (entries.empty()) return 0;
    Rational m = entries.front().horoball.size;
    for (const auto& e : entries) m = std::min(m, e.horoball.size);
    return m;
}

Rational HoroballSet::max_diameter() const {
    Rational m = 0;
    for (const auto& e : entries) m = std::max(m, e.horoball.size);
    return m;
}

std::vector<Horoball> HoroballSet::horoballs() const {
    std::vector<Horoball> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.horoball);
    return out;
}

namespace {

struct KeyLess {
    bool operator()(const BoundaryPoint& x, const BoundaryPoint& y) const {
        if (x.is_infinity() != y.is_infinity()) return x.is_infinity();
        if (x.num() != y.num()) return x.num() < y.num();
        return x.den() < y.den();
    }
};

// Translation lattice of the stabilizer of infinity, in Hermite form:
// v1 = (g, beta), v2 = (0, gamma).
struct Lattice {
    std::int64_t g = 0, beta = 0, gamma = 0;

    template <typename Visit>
    void points_in_box(double x0, double x1, double y0, double y1, Visit&& visit) const {
        auto column = [&](std::int64_t n1) {
            const double xs = static_cast<double>(n1 * g);
            if (xs < x0 || xs > x1) return;
            const double base = static_cast<double>(n1 * beta);
            if (gamma == 0) {
                if (base >= y0 && base <= y1) visit(Gaussian(Integer(static_cast<long>(n1 * g)), Integer(static_cast<long>(n1 * beta))));
                return;
            }
            const auto lo = static_cast<std::int64_t>(std::ceil((y0 - base) / static_cast<double>(gamma)));
            const auto hi = static_cast<std::int64_t>(std::floor((y1 - base) / static_cast<double>(gamma)));
            for (std::int64_t n2 = lo; n2 <= hi; ++n2)
                visit(Gaussian(Integer(static_cast<long>(n1 * g)), Integer(static_cast<long>(n1 * beta + n2 * gamma))));
        };
        if (g == 0) {
            column(0);
            return;
        }
        const auto lo = static_cast<std::int64_t>(std::ceil(x0 / static_cast<double>(g)));
        const auto hi = static_cast<std::int64_t>(std::floor(x1 / static_cast<double>(g)));
        for (std::int64_t n1 = lo; n1 <= hi; ++n1) column(n1);
    }
};

std::int64_t to64(const Integer& v) {
    if (!v.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "translation generator too large");
    return v.get_si();
}

Lattice translation_lattice(const std::vector<Gaussian>& shifts) {
    std::vector<std::pair<std::int64_t, std::int64_t>> vs;
    for (const auto& s : shifts) vs.emplace_back(to64(s.re), to64(s.im));
    // Extended-gcd elimination on the first coordinate.
    Lattice L;
    std::int64_t gx = 0, gy = 0;
    std::vector<std::int64_t> ys;
    for (auto [x, y] : vs) {
        if (x == 0) {
            ys.push_back(y);
            continue;
        }
        if (gx == 0) {
            gx = x;
            gy = y;
            continue;
        }
        // Combine (gx, gy) and (x, y): u gx + v x = gcd.
        std::int64_t a = gx, b = x, u0 = 1, u1 = 0, v0 = 0, v1 = 1;
        while (b != 0) {
            const std::int64_t q = a / b;
            std::tie(a, b) = std::make_pair(b, a - q * b);
            std::tie(u0, u1) = std::make_pair(u1, u0 - q * u1);
            std::tie(v0, v1) = std::make_pair(v1, v0 - q * v1);
        }
        const std::int64_t ny = u0 * gy + v0 * y;
        // The leftover combination has zero first coordinate.
        ys.push_back((x / a) * gy - (gx / a) * y);
        gx = a;
        gy = ny;
    }
    if (gx < 0) {
        gx = -gx;
        gy = -gy;
    }
    std::int64_t gamma = 0;
    for (auto y : ys) gamma = std::gcd(gamma, y);
    L.g = gx;
    L.gamma = gamma;
    L.beta = gamma != 0 ? ((gy % gamma) + gamma) % gamma : gy;
    return L;
}

struct Node {
    MoebiusMap map;
    Horoball ball;
};

bool in_inflated(const Window& region, const Horoball& h, const Rational& inflation) {
    if (h.at_infinity()) return false;
    return region.inflated(h.size * inflation).contains(h.tangent.value());
}

}  // namespace

HoroballSet expand_orbit(const OrbitRequest& req) {
    if (sgn(req.min_diameter) <= 0) throw Error(ErrorKind::InvalidArgument, "min_diameter must be positive");
    if (req.region.empty()) throw Error(ErrorKind::InvalidArgument, "orbit region is empty");
    if (sgn(req.inflation) < 0) throw Error(ErrorKind::InvalidArgument, "inflation must be nonnegative");
    std::vector<Gaussian> shifts;
    std::vector<MoebiusMap> moves;
    for (const auto& g : req.generators) {
        if (g.c().is_zero()) {
            const Gaussian a2 = g.a() * g.a();
            if (a2 != Gaussian(1))
                throw Error(ErrorKind::InvalidArgument, "stabilizer generator " + g.str() + " is not a translation");
            shifts.push_back(g.b() * g.a());
            continue;
        }
        for (const MoebiusMap& m : {g, g.inverse()})
            if (std::find(moves.begin(), moves.end(), m) == moves.end()) moves.push_back(m);
    }
    std::sort(moves.begin(), moves.end());
    const Lattice lattice = translation_lattice(shifts);
    const int dim = req.region.dim;
    const double min_d = req.min_diameter.get_d();

    HoroballSet out;
    out.dim = dim;
    std::set<BoundaryPoint, KeyLess> seen;

    for (const auto& seed : req.seeds) {
        if (!seed.at_infinity()) throw Error(ErrorKind::InvalidArgument, "orbit seeds must be tangent at infinity");
        if (sgn(seed.size) <= 0) throw Error(ErrorKind::InvalidArgument, "seed height must be positive");
        seen.insert(seed.tangent);
        std::vector<Node> frontier{{MoebiusMap::identity(), seed}};
        const double h = seed.size.get_d();
        for (int level = 1; !frontier.empty() && !out.truncated; ++level) {
            std::vector<Node> next;
            for (const Node& node : frontier) {
                const MoebiusMap& g = node.map;
                for (const MoebiusMap& w : moves) {
                    const std::complex<double> e = BoundaryPoint::fraction(w.a(), w.c()).approx();
                    const double tw = 1.0 / (w.c().norm().get_d() * h);
                    if (tw < min_d * (1 - 1e-12)) continue;
                    double x0, x1, y0, y1;
                    if (!g.c().is_zero()) {
                        // |c (x + e) + d|^2 <= tw / min_d
                        const std::complex<double> ctr = -g.d().approx() / g.c().approx() - e;
                        const double rad = std::sqrt(tw / (min_d * g.c().norm().get_d()));
                        x0 = ctr.real() - rad - 1;
                        x1 = ctr.real() + rad + 1;
                        y0 = ctr.imag() - rad - 1;
                        y1 = ctr.imag() + rad + 1;
                    } else {
                        // g is an isometry of the boundary; pull the inflated region back.
                        const double m = req.inflation.get_d() * tw;
                        const std::complex<double> rot = g.d().approx() / g.a().approx();
                        const std::complex<double> shift = g.b().approx() / g.d().approx();
                        const double rx0 = req.region.x.lo.get_d() - m, rx1 = req.region.x.hi.get_d() + m;
                        const double ry0 = dim == 2 ? req.region.y.lo.get_d() - m : 0.0;
                        const double ry1 = dim == 2 ? req.region.y.hi.get_d() + m : 0.0;
                        x0 = y0 = HUGE_VAL;
                        x1 = y1 = -HUGE_VAL;
                        for (double cx : {rx0, rx1}) {
                            for (double cy : {ry0, ry1}) {
                                const std::complex<double> y = (std::complex<double>(cx, cy) - shift) * rot - e;
                                x0 = std::min(x0, y.real());
                                x1 = std::max(x1, y.real());
                                y0 = std::min(y0, y.imag());
                                y1 = std::max(y1, y.imag());
                            }
                        }
                        x0 -= 1;
                        x1 += 1;
                        y0 -= 1;
                        y1 += 1;
                    }
                    lattice.points_in_box(x0, x1, y0, y1, [&](const Gaussian& x) {
                        if (out.truncated) return;
                        const MoebiusMap child = compose(compose(g, MoebiusMap(1, x, 0, 1)), w);
                        Horoball hb = horoball_image(child, seed);
                        if (hb.at_infinity() || hb.size < req.min_diameter) return;
                        if (!in_inflated(req.region, hb, req.inflation)) return;
                        if (!seen.insert(hb.tangent).second) return;
                        if (++out.nodes_visited >= req.max_nodes) out.truncated = true;
                        if (req.region.contains(hb.tangent.value())) out.entries.push_back({hb, level});
                        next.push_back({child, std::move(hb)});
                    });
                }
            }
            frontier = std::move(next);
        }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const OrbitEntry& a, const OrbitEntry& b) { return a.horoball.tangent < b.horoball.tangent; });
    return out;
}

HoroballSet ford_reference(const GroupPreset& group, const Window& region, const Rational& min_diameter) {
    if (sgn(min_diameter) <= 0) throw Error(ErrorKind::InvalidArgument, "min_diameter must be positive");
    HoroballSet out;
    out.dim = group.boundary_dimension;
    const Integer qmax = floor_q(1 / min_diameter);
    if (qmax < 1 || region.empty()) return out;
    if (!qmax.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "min_diameter too small");
    const DenominatorRange r{0, qmax.get_si()};
    const auto pts = group.boundary_dimension == 1 ? enumerate_rationals(region.x, r) : enumerate_gaussian(region, r);
    for (const auto& p : pts) {
        Rational d(1, p.den().norm());
        out.entries.push_back({{p, d}, -1});
    }
    return out;
}

bool interiors_disjoint(const Horoball& a, const Horoball& b) {
    if (a.at_infinity() && b.at_infinity()) return false;
    if (a.at_infinity()) return b.size <= a.size;
    if (b.at_infinity()) return a.size <= b.size;
    if (a.tangent == b.tangent) return false;
    return dist2(a.tangent.value(), b.tangent.value()) >= a.size * b.size;
}

void write_orbit_csv(std::ostream& out, const HoroballSet& set) {
    if (set.dim == 1)
        out << "tangent_num,tangent_den,diameter_num,diameter_den,word_length\n";
    else
        out << "tangent_num_re,tangent_num_im,tangent_den_re,tangent_den_im,diameter_num,diameter_den,word_length\n";
    for (const auto& e : set.entries) {
        const auto& t = e.horoball.tangent;
        if (set.dim == 1)
            out << t.num().re << ',' << t.den().re;
        else
            out << t.num().re << ',' << t.num().im << ',' << t.den().re << ',' << t.den().im;
        out << ',' << e.horoball.size.get_num() << ',' << e.horoball.size.get_den() << ',' << e.word_length << '\n';
    }
}

}  // namespace horo
