#pragma once

// Exact integer, Gaussian-integer and rational arithmetic used throughout the
// library. Integers and rationals are GMP-backed; Gaussian integers are pairs
// of arbitrary-precision integers.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace horo {

using Integer = mpz_class;
using Rational = mpq_class;

enum class ErrorKind {
    InvalidArgument,
    UnknownGroup,
    UnsupportedMeasure,
    DivergentModel,
    IncreaseQcut,
    TooFewSamples,
    CalibrationFailure,
    HypothesisViolated,
    EmptyInput,
    Io,
    Usage,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Element of Z[i]. Real integers are Gaussian integers with im == 0.
struct Gaussian {
    Integer re;
    Integer im;

    Gaussian() = default;
    Gaussian(Integer r, Integer i = 0) : re(std::move(r)), im(std::move(i)) {}
    Gaussian(long r) : re(r), im(0) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    Integer norm() const { return re * re + im * im; }
    Gaussian conj() const { return {re, -im}; }
    std::complex<double> approx() const { return {re.get_d(), im.get_d()}; }

    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) { return {a.re + b.re, a.im + b.im}; }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) { return {a.re - b.re, a.im - b.im}; }
    friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const Gaussian& a, const Gaussian& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
    /// Lexicographic on (re, im); used only as a container key.
    friend bool operator<(const Gaussian& a, const Gaussian& b) {
        int c = cmp(a.re, b.re);
        return c != 0 ? c < 0 : cmp(a.im, b.im) < 0;
    }

    std::string str() const;
};

/// Quotient rounded to the nearest Gaussian integer (ties toward +inf per component).
Gaussian round_div(const Gaussian& a, const Gaussian& b);
/// a / b, requires b | a.
Gaussian exact_div(const Gaussian& a, const Gaussian& b);
bool divides(const Gaussian& d, const Gaussian& a);
/// Euclidean gcd in Z[i]; result is not normalized.
Gaussian gcd(Gaussian a, Gaussian b);
bool is_unit(const Gaussian& g);

/// Associate u*g with re > 0 and im >= 0 (argument in [0, pi/2)); zero maps to zero.
/// For real g this is |g|.
Gaussian canonical_associate(const Gaussian& g, Gaussian* unit_out = nullptr);

/// An exact point of R (im == 0) or C viewed as R^2.
struct ExactPoint {
    Rational re;
    Rational im;

    std::complex<double> approx() const { return {re.get_d(), im.get_d()}; }
    friend bool operator==(const ExactPoint& a, const ExactPoint& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator<(const ExactPoint& a, const ExactPoint& b) {
        int c = cmp(a.re, b.re);
        return c != 0 ? c < 0 : cmp(a.im, b.im) < 0;
    }
};

/// |a - b|^2.
Rational dist2(const ExactPoint& a, const ExactPoint& b);

Integer floor_q(const Rational& x);
Integer ceil_q(const Rational& x);
/// floor(sqrt(n)) for n >= 0.
Integer isqrt(const Integer& n);
std::int64_t isqrt64(std::int64_t n);

/// Exact rational value of a finite double.
Rational from_double(double x);
/// Best rational approximation with denominator <= max_den (continued fractions).
Rational limit_denominator(const Rational& x, const Integer& max_den);
/// Exact power of a rational to a nonnegative integer exponent.
Rational pow_q(const Rational& base, unsigned exponent);

/// Parses "p/q", an integer, a decimal ("0.25", "1e-3"), or one of the named
/// constants "golden" ((sqrt5-1)/2), "silver" (sqrt2-1), "inv_e" (1/e).
/// Decimals are converted exactly; named constants carry error < 2^-84.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

namespace constants {
/// Rational approximations with error < 2^-84 and denominators at most 2^44.
const Rational& silver();   // sqrt(2) - 1
const Rational& golden();   // (sqrt(5) - 1) / 2
const Rational& inv_e();    // 1 / e
}  // namespace constants

}  // namespace horo
