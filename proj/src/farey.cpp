#include "horocount/farey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <shared_mutex>

namespace horo {

DenominatorRange DenominatorRange::make(std::int64_t lo, std::int64_t hi) {
    if (lo < 0 || lo >= hi)
        throw Error(ErrorKind::InvalidArgument,
                    "denominator range requires 0 <= qnorm_min < qnorm_max, got (" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    return {lo, hi};
}

DenominatorRange scale_band(const Rational& tau, int k) {
    if (tau <= 0 || tau >= 1) throw Error(ErrorKind::InvalidArgument, "tau must lie in (0,1)");
    if (k < 0) throw Error(ErrorKind::InvalidArgument, "scale index k must be nonnegative");
    Rational inv = 1 / tau;
    Integer lo = floor_q(pow_q(inv, static_cast<unsigned>(k)));
    Integer hi = floor_q(pow_q(inv, static_cast<unsigned>(k + 1)));
    if (!lo.fits_slong_p() || !hi.fits_slong_p())
        throw Error(ErrorKind::InvalidArgument, "scale band exceeds 64-bit denominator norms");
    // An empty band (lo == hi) is representable only as a degenerate range.
    return {lo.get_si(), hi.get_si()};
}

namespace {

constexpr std::int64_t kFastLimit = std::int64_t{1} << 62;

bool small(const Integer& v) { return v.fits_slong_p() && std::abs(v.get_si()) < kFastLimit; }

__int128 floor_div(__int128 a, __int128 b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t floor_div64(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t narrow(const Integer& v) {
    if (!v.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "numerator range exceeds 64 bits");
    return v.get_si();
}

// Smallest-prime-factor table grown on demand.
class PrimeTable {
public:
    static PrimeTable& instance() {
        static PrimeTable t;
        return t;
    }

    std::vector<std::int64_t> factor(std::int64_t n) {
        std::vector<std::int64_t> out;
        if (n <= 1) return out;
        {
            std::shared_lock lock(mutex_);
            if (static_cast<std::size_t>(n) < spf_.size()) {
                while (n > 1) {
                    std::int64_t p = spf_[static_cast<std::size_t>(n)];
                    out.push_back(p);
                    while (n % p == 0) n /= p;
                }
                return out;
            }
        }
        if (n < kMaxTable) {
            grow(static_cast<std::size_t>(n) + 1);
            return factor(n);
        }
        for (std::int64_t p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                out.push_back(p);
                while (n % p == 0) n /= p;
            }
        }
        if (n > 1) out.push_back(n);
        return out;
    }

private:
    static constexpr std::int64_t kMaxTable = std::int64_t{1} << 26;

    void grow(std::size_t need) {
        std::unique_lock lock(mutex_);
        if (need <= spf_.size()) return;
        std::size_t size = std::max<std::size_t>(need, std::max<std::size_t>(spf_.size() * 2, 1 << 16));
        size = std::min<std::size_t>(size, static_cast<std::size_t>(kMaxTable));
        std::vector<std::uint32_t> spf(size, 0);
        for (std::size_t i = 2; i < size; ++i) {
            if (spf[i] != 0) continue;
            for (std::size_t j = i; j < size; j += i)
                if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        }
        spf_ = std::move(spf);
    }

    std::shared_mutex mutex_;
    std::vector<std::uint32_t> spf_;
};

}  // namespace

IntervalKernel::IntervalKernel(const Interval& w) : w_(w) {
    if (small(w.lo.get_num()) && small(w.lo.get_den()) && small(w.hi.get_num()) && small(w.hi.get_den())) {
        fast_ = true;
        lo_n_ = w.lo.get_num().get_si();
        lo_d_ = w.lo.get_den().get_si();
        hi_n_ = w.hi.get_num().get_si();
        hi_d_ = w.hi.get_den().get_si();
    }
}

std::int64_t IntervalKernel::first(std::int64_t q) const {
    if (fast_) return static_cast<std::int64_t>(-floor_div(-static_cast<__int128>(q) * lo_n_, lo_d_));
    return narrow(ceil_q(w_.lo * q));
}

std::int64_t IntervalKernel::last(std::int64_t q) const {
    if (fast_) return static_cast<std::int64_t>(floor_div(static_cast<__int128>(q) * hi_n_, hi_d_));
    return narrow(floor_q(w_.hi * q));
}

std::vector<std::int64_t> distinct_primes(std::int64_t n) { return PrimeTable::instance().factor(n); }

std::int64_t totient(std::int64_t n) {
    std::int64_t r = n;
    for (std::int64_t p : distinct_primes(n)) r = r / p * (p - 1);
    return r;
}

std::int64_t coprime_in_range(std::int64_t q, std::int64_t first, std::int64_t last) {
    if (last < first) return 0;
    if (q == 1) return last - first + 1;
    const auto primes = distinct_primes(q);
    const std::size_t m = primes.size();
    std::int64_t total = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::int64_t e = 1;
        int bits = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if (mask & (1u << j)) {
                e *= primes[j];
                ++bits;
            }
        }
        std::int64_t multiples = floor_div64(last, e) - floor_div64(first - 1, e);
        total += (bits % 2 == 0) ? multiples : -multiples;
    }
    return total;
}

namespace {

std::int64_t q_lo(const DenominatorRange& r) { return isqrt64(r.qnorm_min) + 1; }
std::int64_t q_hi(const DenominatorRange& r) { return isqrt64(r.qnorm_max); }

}  // namespace

std::vector<BoundaryPoint> enumerate_rationals(const Interval& w, const DenominatorRange& r) {
    std::vector<std::pair<std::int64_t, std::int64_t>> found;
    if (w.empty()) return {};
    IntervalKernel kernel(w);
    for (std::int64_t q = q_lo(r); q <= q_hi(r); ++q) {
        const std::int64_t last = kernel.last(q);
        for (std::int64_t p = kernel.first(q); p <= last; ++p)
            if (std::gcd(p, q) == 1) found.emplace_back(p, q);
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
        return static_cast<__int128>(x.first) * y.second < static_cast<__int128>(y.first) * x.second;
    });
    std::vector<BoundaryPoint> out;
    out.reserve(found.size());
    for (const auto& [p, q] : found) out.push_back(BoundaryPoint::rational(p, q));
    return out;
}

std::vector<BoundaryPoint> sieve_rationals(const Interval& w, std::int64_t qnorm_max) {
    std::vector<BoundaryPoint> out;
    if (w.empty()) return out;
    for (long q = 1; static_cast<std::int64_t>(q) * q <= qnorm_max; ++q) {
        Integer start = floor_q(w.lo * q) - 1;
        Integer stop = ceil_q(w.hi * q) + 1;
        for (Integer p = start; p <= stop; ++p) {
            Rational x(p, q);
            x.canonicalize();
            if (!w.contains(x)) continue;
            Integer g;
            mpz_gcd_ui(g.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(q));
            if (g == 1) out.push_back(BoundaryPoint::rational(p, Integer(q)));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t count_rationals(const Interval& w, const DenominatorRange& r) {
    if (w.empty()) return 0;
    IntervalKernel kernel(w);
    std::uint64_t total = 0;
    for (std::int64_t q = q_lo(r); q <= q_hi(r); ++q)
        total += static_cast<std::uint64_t>(coprime_in_range(q, kernel.first(q), kernel.last(q)));
    return total;
}

// ---------------------------------------------------------------------------
// Gaussian fractions

namespace {

struct G64 {
    std::int64_t re;
    std::int64_t im;
};

std::int64_t norm64(G64 g) { return g.re * g.re + g.im * g.im; }

// Nearest-integer division for the Euclidean step; small operands only.
G64 gauss_mod(G64 a, G64 b) {
    const __int128 nr = static_cast<__int128>(a.re) * b.re + static_cast<__int128>(a.im) * b.im;
    const __int128 ni = static_cast<__int128>(a.im) * b.re - static_cast<__int128>(a.re) * b.im;
    const __int128 n = norm64(b);
    const auto qr = static_cast<std::int64_t>(floor_div(2 * nr + n, 2 * n));
    const auto qi = static_cast<std::int64_t>(floor_div(2 * ni + n, 2 * n));
    return {a.re - (qr * b.re - qi * b.im), a.im - (qr * b.im + qi * b.re)};
}

bool gauss_coprime(G64 a, G64 b) {
    while (b.re != 0 || b.im != 0) {
        G64 r = gauss_mod(a, b);
        a = b;
        b = r;
    }
    return norm64(a) == 1;
}

bool gauss_divides(G64 d, G64 a) {
    const __int128 nr = static_cast<__int128>(a.re) * d.re + static_cast<__int128>(a.im) * d.im;
    const __int128 ni = static_cast<__int128>(a.im) * d.re - static_cast<__int128>(a.re) * d.im;
    const __int128 n = norm64(d);
    return nr % n == 0 && ni % n == 0;
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
    __int128 r = 1, x = b % m;
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

G64 gauss_gcd(G64 a, G64 b) {
    while (b.re != 0 || b.im != 0) {
        G64 r = gauss_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

// Side of an exact rational threshold for a double estimate, or 0 if too close to call.
int rough_side(double value, double threshold) {
    const double tol = 1e-9 * std::max(1.0, std::abs(threshold));
    if (value < threshold - tol) return -1;
    if (value > threshold + tol) return 1;
    return 0;
}

bool in_interval(const Rational& v_exact_num, const Integer& n, const Interval& iv) {
    Rational v(v_exact_num);
    v /= n;
    return iv.contains(v);
}

// p/q inside a box, with exact fallback near the edges.
bool gaussian_in_box(G64 p, G64 q, const Window& box, const double (&edges)[4]) {
    const double n = static_cast<double>(norm64(q));
    const double vr = (static_cast<double>(p.re) * q.re + static_cast<double>(p.im) * q.im) / n;
    const double vi = (static_cast<double>(p.im) * q.re - static_cast<double>(p.re) * q.im) / n;
    const int s0 = rough_side(vr, edges[0]), s1 = rough_side(vr, edges[1]);
    const int s2 = rough_side(vi, edges[2]), s3 = rough_side(vi, edges[3]);
    if (s0 < 0 || s1 > 0 || s2 < 0 || s3 > 0) return false;
    if (s0 > 0 && s1 < 0 && s2 > 0 && s3 < 0) return true;
    const Integer nn(static_cast<long>(norm64(q)));
    const Integer re = Integer(static_cast<long>(p.re)) * q.re + Integer(static_cast<long>(p.im)) * q.im;
    const Integer im = Integer(static_cast<long>(p.im)) * q.re - Integer(static_cast<long>(p.re)) * q.im;
    return in_interval(Rational(re), nn, box.x) && in_interval(Rational(im), nn, box.y);
}

BoundaryPoint to_point(G64 p, G64 q) {
    return BoundaryPoint::fraction(Gaussian(Integer(static_cast<long>(p.re)), Integer(static_cast<long>(p.im))),
                                   Gaussian(Integer(static_cast<long>(q.re)), Integer(static_cast<long>(q.im))));
}

template <typename Visit>
void for_each_gaussian_in_box(const Window& box, const DenominatorRange& r, Visit&& visit) {
    if (box.empty()) return;
    const double edges[4] = {box.x.lo.get_d(), box.x.hi.get_d(), box.y.lo.get_d(), box.y.hi.get_d()};
    for (const auto& [qr, qi] : canonical_gaussians(r)) {
        const G64 q{qr, qi};
        // p = w q for w in the box; bound p by the image of the four corners.
        double re_min = HUGE_VAL, re_max = -HUGE_VAL, im_min = HUGE_VAL, im_max = -HUGE_VAL;
        for (double wx : {edges[0], edges[1]}) {
            for (double wy : {edges[2], edges[3]}) {
                const double pr = wx * qr - wy * qi;
                const double pi = wx * qi + wy * qr;
                re_min = std::min(re_min, pr);
                re_max = std::max(re_max, pr);
                im_min = std::min(im_min, pi);
                im_max = std::max(im_max, pi);
            }
        }
        const auto r0 = static_cast<std::int64_t>(std::floor(re_min)) - 1;
        const auto r1 = static_cast<std::int64_t>(std::ceil(re_max)) + 1;
        const auto i0 = static_cast<std::int64_t>(std::floor(im_min)) - 1;
        const auto i1 = static_cast<std::int64_t>(std::ceil(im_max)) + 1;
        for (std::int64_t a = r0; a <= r1; ++a) {
            for (std::int64_t b = i0; b <= i1; ++b) {
                const G64 p{a, b};
                if (!gaussian_in_box(p, q, box, edges)) continue;
                if (!gauss_coprime(p, q)) continue;
                visit(p, q);
            }
        }
    }
}

}  // namespace

std::vector<std::pair<std::int64_t, std::int64_t>> canonical_gaussians(const DenominatorRange& r) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    const std::int64_t lim = isqrt64(r.qnorm_max);
    for (std::int64_t a = 1; a <= lim; ++a) {
        for (std::int64_t b = 0; a * a + b * b <= r.qnorm_max; ++b) {
            if (r.contains(a * a + b * b)) out.emplace_back(a, b);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        const auto nx = x.first * x.first + x.second * x.second;
        const auto ny = y.first * y.first + y.second * y.second;
        return nx != ny ? nx < ny : x.first < y.first;
    });
    return out;
}

std::vector<BoundaryPoint> enumerate_gaussian(const Window& box, const DenominatorRange& r) {
    if (box.dim != 2) throw Error(ErrorKind::InvalidArgument, "enumerate_gaussian requires a 2-dimensional window");
    std::vector<BoundaryPoint> out;
    for_each_gaussian_in_box(box, r, [&](G64 p, G64 q) { out.push_back(to_point(p, q)); });
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t count_gaussian(const Window& box, const DenominatorRange& r) {
    if (box.dim != 2) throw Error(ErrorKind::InvalidArgument, "count_gaussian requires a 2-dimensional window");
    std::uint64_t n = 0;
    for_each_gaussian_in_box(box, r, [&](G64, G64) { ++n; });
    return n;
}

std::int64_t gaussian_totient(std::int64_t re, std::int64_t im) {
    const G64 q{re, im};
    const std::int64_t n = norm64(q);
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "totient of zero");
    std::int64_t phi = n;
    for (std::int64_t p : distinct_primes(n)) {
        if (p == 2) {
            phi = phi / 2;
        } else if (p % 4 == 3) {
            phi = phi / (p * p) * (p * p - 1);
        } else {
            // p = pi * conj(pi); find pi = gcd(p, x + i) with x^2 = -1 mod p.
            std::int64_t x = 0;
            for (std::int64_t c = 2;; ++c) {
                x = powmod(c, (p - 1) / 4, p);
                if (static_cast<__int128>(x) * x % p == p - 1) break;
            }
            const G64 pi = gauss_gcd({p, 0}, {x, 1});
            const G64 pi_bar{pi.re, -pi.im};
            if (gauss_divides(pi, q)) phi = phi / p * (p - 1);
            if (gauss_divides(pi_bar, q)) phi = phi / p * (p - 1);
        }
    }
    return phi;
}

std::uint64_t count_gaussian_fundamental(const DenominatorRange& r) {
    std::uint64_t total = 0;
    for (const auto& [a, b] : canonical_gaussians(r)) total += static_cast<std::uint64_t>(gaussian_totient(a, b));
    return total;
}

Interval ball_interval(const Ball& ball) { return {ball.center.re - ball.radius, ball.center.re + ball.radius}; }

namespace {

template <typename Visit>
void for_each_gaussian_in_disk(const Ball& ball, const DenominatorRange& r, Visit&& visit) {
    if (sgn(ball.radius) < 0) return;
    const double cr = ball.center.re.get_d(), ci = ball.center.im.get_d();
    const double rad = ball.radius.get_d();
    const Rational rad2 = ball.radius * ball.radius;
    const double rad2d = rad2.get_d();
    for (const auto& [qr, qi] : canonical_gaussians(r)) {
        const G64 q{qr, qi};
        const double qn = std::sqrt(static_cast<double>(norm64(q)));
        // Center of the disk z q in the numerator plane, radius R |q|.
        const double zr = cr * qr - ci * qi, zi = cr * qi + ci * qr;
        const double pr = rad * qn;
        const auto b0 = static_cast<std::int64_t>(std::floor(zi - pr)) - 1;
        const auto b1 = static_cast<std::int64_t>(std::ceil(zi + pr)) + 1;
        for (std::int64_t b = b0; b <= b1; ++b) {
            const double dy = static_cast<double>(b) - zi;
            const double half = std::sqrt(std::max(0.0, pr * pr - dy * dy));
            const auto a0 = static_cast<std::int64_t>(std::floor(zr - half)) - 1;
            const auto a1 = static_cast<std::int64_t>(std::ceil(zr + half)) + 1;
            for (std::int64_t a = a0; a <= a1; ++a) {
                const G64 p{a, b};
                const double n = static_cast<double>(norm64(q));
                const double vr = (static_cast<double>(a) * qr + static_cast<double>(b) * qi) / n - cr;
                const double vi = (static_cast<double>(b) * qr - static_cast<double>(a) * qi) / n - ci;
                const int side = rough_side(vr * vr + vi * vi, rad2d);
                if (side > 0) continue;
                if (side == 0) {
                    const ExactPoint v = to_point(p, q).value();
                    if (dist2(v, ball.center) > rad2) continue;
                }
                if (!gauss_coprime(p, q)) continue;
                visit(p, q);
            }
        }
    }
}

}  // namespace

std::vector<BoundaryPoint> enumerate_in_ball(int dim, const Ball& ball, const DenominatorRange& r) {
    if (dim == 1) return enumerate_rationals(ball_interval(ball), r);
    std::vector<BoundaryPoint> out;
    for_each_gaussian_in_disk(ball, r, [&](G64 p, G64 q) { out.push_back(to_point(p, q)); });
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t count_in_ball(int dim, const Ball& ball, const DenominatorRange& r) {
    if (dim == 1) return count_rationals(ball_interval(ball), r);
    std::uint64_t n = 0;
    for_each_gaussian_in_disk(ball, r, [&](G64, G64) { ++n; });
    return n;
}

}  // namespace horo

namespace horo {

void for_each_norm_count(int dim, const Ball& ball, const DenominatorRange& r,
                         const std::function<void(std::int64_t, std::uint64_t)>& visit) {
    if (dim == 1) {
        const Interval w = ball_interval(ball);
        if (w.empty()) return;
        IntervalKernel kernel(w);
        for (std::int64_t q = q_lo(r); q <= q_hi(r); ++q) {
            const std::int64_t n = coprime_in_range(q, kernel.first(q), kernel.last(q));
            if (n > 0) visit(q * q, static_cast<std::uint64_t>(n));
        }
        return;
    }
    std::int64_t current = -1;
    std::uint64_t n = 0;
    // canonical_gaussians is norm-ordered, so counts arrive grouped by norm.
    for_each_gaussian_in_disk(ball, r, [&](G64, G64 q) {
        const std::int64_t nq = norm64(q);
        if (nq != current) {
            if (n > 0) visit(current, n);
            current = nq;
            n = 0;
        }
        ++n;
    });
    if (n > 0) visit(current, n);
}

}  // namespace horo
