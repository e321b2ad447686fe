#pragma once

// Unimodular Moebius maps over Z or Z[i], their action on the boundary of
// upper half-space, and the exact transformation law for horoballs.

#include "horocount/exact.hpp"

#include <string>

namespace horo {

/// A point of R^d u {inf} with exact rational (d=1) or Gaussian-rational (d=2)
/// coordinates, stored as a reduced fraction num/den with canonical den.
class BoundaryPoint {
public:
    static BoundaryPoint infinity();
    /// Reduces num/den and normalizes den to its canonical associate;
    /// den == 0 yields infinity.
    static BoundaryPoint fraction(const Gaussian& num, const Gaussian& den);
    static BoundaryPoint rational(const Integer& p, const Integer& q) { return fraction(Gaussian(p), Gaussian(q)); }
    static BoundaryPoint rational(long p, long q) { return rational(Integer(p), Integer(q)); }

    bool is_infinity() const { return infinite_; }
    const Gaussian& num() const { return num_; }
    const Gaussian& den() const { return den_; }
    /// Exact coordinates; requires a finite point.
    ExactPoint value() const;
    std::complex<double> approx() const;
    std::string str() const;

    friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
        return a.infinite_ == b.infinite_ && a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const BoundaryPoint& a, const BoundaryPoint& b) { return !(a == b); }
    /// Orders finite points by (re, im) of their exact value; infinity last.
    friend bool operator<(const BoundaryPoint& a, const BoundaryPoint& b);

private:
    BoundaryPoint() = default;
    bool infinite_ = true;
    Gaussian num_{1, 0};
    Gaussian den_{0, 0};
};

/// Horoball tangent to the boundary at `tangent`. For a finite tangent
/// `size` is the Euclidean diameter; at infinity it is the height of the
/// bounding horosphere.
struct Horoball {
    BoundaryPoint tangent;
    Rational size;

    bool at_infinity() const { return tangent.is_infinity(); }
    friend bool operator==(const Horoball& a, const Horoball& b) { return a.tangent == b.tangent && a.size == b.size; }
};

/// Unimodular matrix (a b; c d), ad - bc = 1, modulo +-1.
class MoebiusMap {
public:
    /// Throws InvalidArgument unless ad - bc == 1.
    MoebiusMap(Gaussian a, Gaussian b, Gaussian c, Gaussian d);
    static MoebiusMap identity();

    const Gaussian& a() const { return a_; }
    const Gaussian& b() const { return b_; }
    const Gaussian& c() const { return c_; }
    const Gaussian& d() const { return d_; }

    MoebiusMap inverse() const;
    bool fixes_infinity() const { return c_.is_zero(); }
    /// True when every entry is a rational integer.
    bool is_real() const;
    std::string str() const;

    friend bool operator==(const MoebiusMap& x, const MoebiusMap& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }
    friend bool operator!=(const MoebiusMap& x, const MoebiusMap& y) { return !(x == y); }
    friend bool operator<(const MoebiusMap& x, const MoebiusMap& y);

private:
    void canonicalize();
    Gaussian a_, b_, c_, d_;
};

/// Matrix product m1 * m2, i.e. the map z -> m1(m2(z)).
MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2);
BoundaryPoint apply_boundary(const MoebiusMap& m, const BoundaryPoint& x);
Horoball horoball_image(const MoebiusMap& m, const Horoball& h);

/// Poincare extension of m to upper half-space, evaluated in floating point.
/// The point is (x, height) with x in C (im == 0 for the real line).
struct HalfSpacePoint {
    std::complex<double> x;
    double height;
};
HalfSpacePoint apply_halfspace(const MoebiusMap& m, const HalfSpacePoint& p);

}  // namespace horo
