#include "horocount/moebius.hpp"

#include <cmath>

namespace horo {

BoundaryPoint BoundaryPoint::infinity() { return BoundaryPoint{}; }

BoundaryPoint BoundaryPoint::fraction(const Gaussian& num, const Gaussian& den) {
    if (den.is_zero()) {
        if (num.is_zero()) throw Error(ErrorKind::InvalidArgument, "0/0 is not a boundary point");
        return infinity();
    }
    Gaussian g = gcd(num, den);
    Gaussian n = exact_div(num, g);
    Gaussian d = exact_div(den, g);
    Gaussian unit;
    d = canonical_associate(d, &unit);
    n = n * unit;
    BoundaryPoint p;
    p.infinite_ = false;
    p.num_ = std::move(n);
    p.den_ = std::move(d);
    return p;
}

ExactPoint BoundaryPoint::value() const {
    if (infinite_) throw Error(ErrorKind::InvalidArgument, "infinity has no finite coordinates");
    Gaussian t = num_ * den_.conj();
    Integer n = den_.norm();
    Rational re(t.re, n), im(t.im, n);
    re.canonicalize();
    im.canonicalize();
    return {re, im};
}

std::complex<double> BoundaryPoint::approx() const {
    if (infinite_) return {HUGE_VAL, 0.0};
    return value().approx();
}

std::string BoundaryPoint::str() const {
    if (infinite_) return "inf";
    if (den_.is_real() && num_.is_real()) return num_.re.get_str() + "/" + den_.re.get_str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

bool operator<(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.infinite_ || b.infinite_) return !a.infinite_ && b.infinite_;
    if (a.den_.is_real() && a.num_.is_real() && b.den_.is_real() && b.num_.is_real()) {
        // Denominators are positive.
        return a.num_.re * b.den_.re < b.num_.re * a.den_.re;
    }
    return a.value() < b.value();
}

MoebiusMap::MoebiusMap(Gaussian a, Gaussian b, Gaussian c, Gaussian d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (a_ * d_ - b_ * c_ != Gaussian(1))
        throw Error(ErrorKind::InvalidArgument, "Moebius map must have determinant 1: " + str());
    canonicalize();
}

MoebiusMap MoebiusMap::identity() { return {1, 0, 0, 1}; }

void MoebiusMap::canonicalize() {
    // PSL representative: first nonzero of (a.re, a.im, b.re, ..., d.im) is positive.
    for (const Integer* v : {&a_.re, &a_.im, &b_.re, &b_.im, &c_.re, &c_.im, &d_.re, &d_.im}) {
        int s = sgn(*v);
        if (s == 0) continue;
        if (s < 0) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
            d_ = -d_;
        }
        return;
    }
}

MoebiusMap MoebiusMap::inverse() const { return {d_, -b_, -c_, a_}; }

bool MoebiusMap::is_real() const { return a_.is_real() && b_.is_real() && c_.is_real() && d_.is_real(); }

std::string MoebiusMap::str() const {
    return "(" + a_.str() + "," + b_.str() + ";" + c_.str() + "," + d_.str() + ")";
}

bool operator<(const MoebiusMap& x, const MoebiusMap& y) {
    if (x.a_ != y.a_) return x.a_ < y.a_;
    if (x.b_ != y.b_) return x.b_ < y.b_;
    if (x.c_ != y.c_) return x.c_ < y.c_;
    return x.d_ < y.d_;
}

MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
    return {m1.a() * m2.a() + m1.b() * m2.c(), m1.a() * m2.b() + m1.b() * m2.d(),
            m1.c() * m2.a() + m1.d() * m2.c(), m1.c() * m2.b() + m1.d() * m2.d()};
}

BoundaryPoint apply_boundary(const MoebiusMap& m, const BoundaryPoint& x) {
    if (x.is_infinity()) {
        if (m.c().is_zero()) return BoundaryPoint::infinity();
        return BoundaryPoint::fraction(m.a(), m.c());
    }
    return BoundaryPoint::fraction(m.a() * x.num() + m.b() * x.den(), m.c() * x.num() + m.d() * x.den());
}

Horoball horoball_image(const MoebiusMap& m, const Horoball& h) {
    if (h.at_infinity()) {
        if (m.c().is_zero()) {
            // z -> (a z + b) / d scales heights by |a/d|.
            Rational s(m.a().norm(), m.d().norm());
            s.canonicalize();
            return {BoundaryPoint::infinity(), h.size * s};
        }
        Rational diam = 1 / (h.size * Rational(m.c().norm()));
        return {BoundaryPoint::fraction(m.a(), m.c()), diam};
    }
    const Gaussian& u = h.tangent.num();
    const Gaussian& v = h.tangent.den();
    Gaussian w = m.c() * u + m.d() * v;
    if (w.is_zero()) {
        // Tangent goes to infinity; the horosphere becomes Im = 1 / (t |c|^2).
        Rational height = 1 / (h.size * Rational(m.c().norm()));
        return {BoundaryPoint::infinity(), height};
    }
    // |g'(p)| = 1 / |c p + d|^2 scales the diameter exactly.
    Rational factor(v.norm(), w.norm());
    factor.canonicalize();
    return {BoundaryPoint::fraction(m.a() * u + m.b() * v, w), h.size * factor};
}

HalfSpacePoint apply_halfspace(const MoebiusMap& m, const HalfSpacePoint& p) {
    const std::complex<double> a = m.a().approx(), b = m.b().approx(), c = m.c().approx(), d = m.d().approx();
    const std::complex<double> cz_d = c * p.x + d;
    const double y2 = p.height * p.height;
    const double den = std::norm(cz_d) + std::norm(c) * y2;
    const std::complex<double> x = ((a * p.x + b) * std::conj(cz_d) + a * std::conj(c) * y2) / den;
    return {x, p.height / den};
}

}  // namespace horo
