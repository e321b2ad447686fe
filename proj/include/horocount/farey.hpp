#pragma once

// Enumeration and counting of reduced fractions p/q (q in Z or Z[i]) inside
// a window, subject to a half-open bound qnorm_min < |q|^2 <= qnorm_max.

#include "horocount/preset.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace horo {

/// Half-open bound (qnorm_min, qnorm_max] on |q|^2.
struct DenominatorRange {
    std::int64_t qnorm_min = 0;
    std::int64_t qnorm_max = 1;

    /// Throws InvalidArgument unless 0 <= lo < hi.
    static DenominatorRange make(std::int64_t lo, std::int64_t hi);
    bool contains(std::int64_t qnorm) const { return qnorm_min < qnorm && qnorm <= qnorm_max; }
};

/// |q|^2 range equivalent to tau^(k+1) <= 1/|q|^2 < tau^k, i.e.
/// (floor(tau^-k), floor(tau^-(k+1))]. Requires tau in (0,1), k >= 0.
DenominatorRange scale_band(const Rational& tau, int k);

/// Closed ball: an interval for dim 1, a Euclidean disk for dim 2.
struct Ball {
    ExactPoint center;
    Rational radius;
};

/// ceil(q*lo) and floor(q*hi) for a fixed interval, with a 128-bit fast path
/// when the endpoints have small numerators and denominators.
class IntervalKernel {
public:
    explicit IntervalKernel(const Interval& w);
    std::int64_t first(std::int64_t q) const;
    std::int64_t last(std::int64_t q) const;

private:
    Interval w_;
    bool fast_ = false;
    std::int64_t lo_n_ = 0, lo_d_ = 1, hi_n_ = 0, hi_d_ = 1;
};

/// Number of integers p in [first, last] with gcd(p, q) = 1 (q >= 1).
std::int64_t coprime_in_range(std::int64_t q, std::int64_t first, std::int64_t last);
/// Distinct prime factors of n >= 1, ascending.
std::vector<std::int64_t> distinct_primes(std::int64_t n);
/// Euler totient.
std::int64_t totient(std::int64_t n);

std::vector<BoundaryPoint> enumerate_rationals(const Interval& w, const DenominatorRange& r);
/// Exhaustive double loop with gcd test; the independent oracle for enumerate_rationals.
std::vector<BoundaryPoint> sieve_rationals(const Interval& w, std::int64_t qnorm_max);
std::uint64_t count_rationals(const Interval& w, const DenominatorRange& r);

/// Canonical Gaussian denominators (re > 0, im >= 0) with norm in range,
/// ordered by (norm, re).
std::vector<std::pair<std::int64_t, std::int64_t>> canonical_gaussians(const DenominatorRange& r);
std::vector<BoundaryPoint> enumerate_gaussian(const Window& box, const DenominatorRange& r);
std::uint64_t count_gaussian(const Window& box, const DenominatorRange& r);
/// Count over the half-open fundamental square [0,1)^2 via the Gaussian totient.
std::uint64_t count_gaussian_fundamental(const DenominatorRange& r);
/// Number of residues mod q coprime to q, for q != 0 in Z[i].
std::int64_t gaussian_totient(std::int64_t re, std::int64_t im);

/// Reduced fractions inside a closed ball, dim 1 or 2, sorted ascending.
std::vector<BoundaryPoint> enumerate_in_ball(int dim, const Ball& ball, const DenominatorRange& r);
std::uint64_t count_in_ball(int dim, const Ball& ball, const DenominatorRange& r);

Interval ball_interval(const Ball& ball);

/// Calls visit(|q|^2, n) for every denominator norm in range with n > 0 reduced
/// fractions of that norm in the ball, in increasing norm order.
void for_each_norm_count(int dim, const Ball& ball, const DenominatorRange& r,
                         const std::function<void(std::int64_t, std::uint64_t)>& visit);

}  // namespace horo
