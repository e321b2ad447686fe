#include "horocount/exact.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace horo {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::UnknownGroup: return "unknown-group";
        case ErrorKind::UnsupportedMeasure: return "unsupported-measure";
        case ErrorKind::DivergentModel: return "divergent-model";
        case ErrorKind::IncreaseQcut: return "increase-qcut";
        case ErrorKind::TooFewSamples: return "too-few-samples";
        case ErrorKind::CalibrationFailure: return "calibration-failure";
        case ErrorKind::HypothesisViolated: return "hypothesis-violated";
        case ErrorKind::EmptyInput: return "empty-input";
        case ErrorKind::Io: return "io";
        case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

std::string Gaussian::str() const {
    if (sgn(im) == 0) return re.get_str();
    std::string s = re.get_str();
    if (sgn(im) > 0) s += "+";
    return s + im.get_str() + "i";
}

namespace {

// Nearest integer to n / d with d > 0.
Integer round_ratio(const Integer& n, const Integer& d) {
    Integer num = 2 * n + d;
    Integer den = 2 * d;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

}  // namespace

Gaussian round_div(const Gaussian& a, const Gaussian& b) {
    if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero Gaussian integer");
    Gaussian num = a * b.conj();
    Integer n = b.norm();
    return {round_ratio(num.re, n), round_ratio(num.im, n)};
}

bool divides(const Gaussian& d, const Gaussian& a) {
    if (d.is_zero()) return a.is_zero();
    Gaussian num = a * d.conj();
    Integer n = d.norm();
    return mpz_divisible_p(num.re.get_mpz_t(), n.get_mpz_t()) != 0 &&
           mpz_divisible_p(num.im.get_mpz_t(), n.get_mpz_t()) != 0;
}

Gaussian exact_div(const Gaussian& a, const Gaussian& b) {
    Gaussian num = a * b.conj();
    Integer n = b.norm();
    Integer re, im;
    mpz_divexact(re.get_mpz_t(), num.re.get_mpz_t(), n.get_mpz_t());
    mpz_divexact(im.get_mpz_t(), num.im.get_mpz_t(), n.get_mpz_t());
    return {re, im};
}

Gaussian gcd(Gaussian a, Gaussian b) {
    if (a.is_real() && b.is_real()) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), a.re.get_mpz_t(), b.re.get_mpz_t());
        return {g, 0};
    }
    while (!b.is_zero()) {
        Gaussian r = a - round_div(a, b) * b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool is_unit(const Gaussian& g) { return g.norm() == 1; }

Gaussian canonical_associate(const Gaussian& g, Gaussian* unit_out) {
    // Multiplying by i rotates by pi/2; exactly one of the four associates
    // of a nonzero g lies in the sector re > 0, im >= 0.
    Gaussian cur = g;
    Gaussian unit{1, 0};
    const Gaussian i_unit{0, 1};
    if (!g.is_zero()) {
        for (int k = 0; k < 4; ++k) {
            if (sgn(cur.re) > 0 && sgn(cur.im) >= 0) break;
            cur = cur * i_unit;
            unit = unit * i_unit;
        }
    }
    if (unit_out) *unit_out = unit;
    return cur;
}

Rational dist2(const ExactPoint& a, const ExactPoint& b) {
    Rational dr = a.re - b.re;
    Rational di = a.im - b.im;
    return dr * dr + di * di;
}

Integer floor_q(const Rational& x) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Integer ceil_q(const Rational& x) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

Integer isqrt(const Integer& n) {
    if (sgn(n) < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of negative integer");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "isqrt of negative integer");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<__int128>(r) * r > n) --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

Rational from_double(double x) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite value cannot be made exact");
    Rational q(x);  // mpq_set_d is exact
    q.canonicalize();
    return q;
}

Rational limit_denominator(const Rational& x, const Integer& max_den) {
    if (x.get_den() <= max_den) return x;
    // Convergents p/q of x, then the best semiconvergent below the bound.
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Integer n = x.get_num(), d = x.get_den();
    while (true) {
        Integer a;
        mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        Integer q2 = q0 + a * q1;
        if (q2 > max_den) break;
        Integer p2 = p0 + a * p1;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Integer r = n - a * d;
        n = d; d = r;
        if (sgn(d) == 0) break;
    }
    Integer k = (max_den - q0) / q1;
    Rational semi(p0 + k * p1, q0 + k * q1);
    Rational conv(p1, q1);
    semi.canonicalize();
    conv.canonicalize();
    return abs(semi - x) < abs(conv - x) ? semi : conv;
}

Rational pow_q(const Rational& base, unsigned exponent) {
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), exponent);
    Rational r(n, d);
    r.canonicalize();
    return r;
}

namespace {

Rational parse_decimal(std::string_view text) {
    std::string mant;
    long exp10 = 0;
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mant += c;
            seen_digit = true;
            if (seen_dot) --exp10;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw Error(ErrorKind::InvalidArgument, "malformed number '" + std::string(text) + "'");
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::string e(text.substr(i + 1));
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(e, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != e.size())
            throw Error(ErrorKind::InvalidArgument, "malformed exponent in '" + std::string(text) + "'");
        exp10 += v;
        i = text.size();
    }
    if (i != text.size()) throw Error(ErrorKind::InvalidArgument, "malformed number '" + std::string(text) + "'");
    Integer m(mant, 10);
    if (neg) m = -m;
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational r = exp10 < 0 ? Rational(m, p) : Rational(m * p, 1);
    r.canonicalize();
    return r;
}

Integer parse_integer(std::string_view text) {
    std::string s(text);
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    Integer v;
    if (s.empty() || v.set_str(s, 10) != 0)
        throw Error(ErrorKind::InvalidArgument, "malformed integer '" + std::string(text) + "'");
    return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text == "golden") return constants::golden();
    if (text == "silver") return constants::silver();
    if (text == "inv_e") return constants::inv_e();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer n = parse_integer(text.substr(0, slash));
        Integer d = parse_integer(text.substr(slash + 1));
        if (sgn(d) == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
        Rational r(n, d);
        r.canonicalize();
        return r;
    }
    return parse_decimal(text);
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace constants {

namespace {

constexpr unsigned kBits = 200;

Integer pow2(unsigned bits) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, bits);
    return r;
}

Rational reduce(const Rational& x) { return limit_denominator(x, pow2(44)); }

}  // namespace

const Rational& silver() {
    static const Rational value = [] {
        Integer scale = pow2(kBits);
        Rational r(isqrt(2 * scale * scale) - scale, scale);
        r.canonicalize();
        return reduce(r);
    }();
    return value;
}

const Rational& golden() {
    static const Rational value = [] {
        Integer scale = pow2(kBits);
        Rational r(isqrt(5 * scale * scale) - scale, 2 * scale);
        r.canonicalize();
        return reduce(r);
    }();
    return value;
}

const Rational& inv_e() {
    static const Rational value = [] {
        Rational sum = 0;
        Rational term = 1;
        for (int n = 0; n < 60; ++n) {
            sum += (n % 2 == 0) ? term : Rational(-term);
            term /= n + 1;
        }
        return reduce(sum);
    }();
    return value;
}

}  // namespace constants

}  // namespace horo
