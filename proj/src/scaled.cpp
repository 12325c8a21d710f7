#include "indefla/scaled.hpp"

#include <cmath>
#include <limits>

namespace indefla {

namespace {

// Re-normalize a nonzero long-double mantissa/exponent pair so the mantissa
// lands in [1,2), then round to double once.
ScaledValue normalize(int sign, long double mant, std::int64_t exp2) {
    if (mant == 0.0L || sign == 0) return ScaledValue::zero();
    int k = 0;
    long double frac = std::frexp(mant, &k);  // frac in [0.5, 1)
    double m = static_cast<double>(2.0L * frac);
    std::int64_t e = exp2 + k - 1;
    if (m >= 2.0) {  // rounding of 2*frac can land exactly on 2.0
        m *= 0.5;
        ++e;
    }
    return ScaledValue{sign, m, e};
}

}  // namespace

ScaledValue ScaledValue::from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("ScaledValue: non-finite input");
    if (x == 0.0) return zero();
    int sign = x > 0 ? +1 : -1;
    int k = 0;
    double frac = std::frexp(std::fabs(x), &k);
    return ScaledValue{sign, 2.0 * frac, static_cast<std::int64_t>(k) - 1};
}

double ScaledValue::to_double() const {
    if (sign == 0) return 0.0;
    if (exponent > 1100) return sign > 0 ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
    if (exponent < -1120) return 0.0;
    return std::ldexp(sign * mantissa, static_cast<int>(exponent));
}

double ScaledValue::to_double_clamped(bool* clamped) const {
    if (clamped) *clamped = false;
    if (sign == 0) return 0.0;
    std::int64_t e = exponent;
    if (e > 1020) {
        e = 1020;
        if (clamped) *clamped = true;
    } else if (e < -1020) {
        e = -1020;
        if (clamped) *clamped = true;
    }
    return std::ldexp(sign * mantissa, static_cast<int>(e));
}

double ScaledValue::log2_abs() const {
    if (sign == 0) throw std::domain_error("ScaledValue::log2_abs of zero");
    return static_cast<double>(exponent) + std::log2(mantissa);
}

ScaledValue operator*(const ScaledValue& a, const ScaledValue& b) {
    if (a.sign == 0 || b.sign == 0) return ScaledValue::zero();
    double p = a.mantissa * b.mantissa;  // in [1,4)
    std::int64_t e = a.exponent + b.exponent;
    if (p >= 2.0) {
        p *= 0.5;
        ++e;
    }
    return ScaledValue{a.sign * b.sign, p, e};
}

ScaledValue operator/(const ScaledValue& a, const ScaledValue& b) {
    if (b.sign == 0) throw std::domain_error("ScaledValue: division by zero");
    if (a.sign == 0) return ScaledValue::zero();
    double q = a.mantissa / b.mantissa;  // in (0.5, 2)
    std::int64_t e = a.exponent - b.exponent;
    if (q < 1.0) {
        q *= 2.0;
        --e;
    }
    return ScaledValue{a.sign * b.sign, q, e};
}

ScaledValue operator+(const ScaledValue& a, const ScaledValue& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const ScaledValue* hi = &a;
    const ScaledValue* lo = &b;
    if (b.exponent > a.exponent ||
        (b.exponent == a.exponent && b.mantissa > a.mantissa)) {
        hi = &b;
        lo = &a;
    }
    std::int64_t de = hi->exponent - lo->exponent;
    if (de > 100) return *hi;  // smaller term cannot reach the mantissa
    long double sum = static_cast<long double>(hi->sign) * hi->mantissa +
                      std::ldexp(static_cast<long double>(lo->sign) * lo->mantissa,
                                 -static_cast<int>(de));
    int s = (sum > 0.0L) ? +1 : (sum < 0.0L ? -1 : 0);
    if (s == 0) return ScaledValue::zero();
    return normalize(s, std::fabs(sum), hi->exponent);
}

ScaledValue operator-(const ScaledValue& a) {
    ScaledValue r = a;
    r.sign = -r.sign;
    return r;
}

ScaledValue operator-(const ScaledValue& a, const ScaledValue& b) { return a + (-b); }

ScaledValue abs(const ScaledValue& a) {
    ScaledValue r = a;
    if (r.sign < 0) r.sign = +1;
    return r;
}

ScaledValue sqrt(const ScaledValue& a) {
    if (a.sign < 0) throw std::domain_error("ScaledValue: sqrt of negative value");
    if (a.sign == 0) return ScaledValue::zero();
    double m = a.mantissa;
    std::int64_t e = a.exponent;
    if (e % 2 != 0) {  // make the exponent even (C++ remainder may be -1)
        if (e > 0) {
            m *= 2.0;
            e -= 1;
        } else {
            m *= 0.5;
            e += 1;
        }
    }
    double rm = std::sqrt(m);  // in [sqrt(0.5), 2)
    std::int64_t re = e / 2;
    if (rm < 1.0) {
        rm *= 2.0;
        re -= 1;
    }
    return ScaledValue{+1, rm, re};
}

int compare_abs(const ScaledValue& a, const ScaledValue& b) {
    if (a.sign == 0 && b.sign == 0) return 0;
    if (a.sign == 0) return -1;
    if (b.sign == 0) return +1;
    if (a.exponent != b.exponent) return a.exponent < b.exponent ? -1 : +1;
    if (a.mantissa != b.mantissa) return a.mantissa < b.mantissa ? -1 : +1;
    return 0;
}

bool operator<(const ScaledValue& a, const ScaledValue& b) {
    if (a.sign != b.sign) return a.sign < b.sign;
    if (a.sign == 0) return false;
    int c = compare_abs(a, b);
    return a.sign > 0 ? c < 0 : c > 0;
}

bool operator==(const ScaledValue& a, const ScaledValue& b) {
    if (a.sign != b.sign) return false;
    if (a.sign == 0) return true;
    return a.exponent == b.exponent && a.mantissa == b.mantissa;
}

namespace {

struct LongScaled {
    long double mant;  // in [1,2)
    std::int64_t exp2;
};

LongScaled long_normalize(long double m, std::int64_t e) {
    int k = 0;
    long double frac = std::frexp(m, &k);
    return {2.0L * frac, e + k - 1};
}

LongScaled long_mul(const LongScaled& a, const LongScaled& b) {
    return long_normalize(a.mant * b.mant, a.exp2 + b.exp2);
}

}  // namespace

ScaledValue ratio_pow(double num, double den, std::int64_t k) {
    if (!(num > 0.0) || !(den > 0.0))
        throw std::domain_error("ratio_pow: base must be a ratio of positive numbers");
    if (k == 0) return ScaledValue::one();
    bool invert = k < 0;
    std::uint64_t n = invert ? static_cast<std::uint64_t>(-(k + 1)) + 1
                             : static_cast<std::uint64_t>(k);
    LongScaled base = long_normalize(static_cast<long double>(num) / den, 0);
    LongScaled acc{1.0L, 0};
    while (n > 0) {
        if (n & 1u) acc = long_mul(acc, base);
        base = long_mul(base, base);
        n >>= 1;
    }
    ScaledValue r = normalize(+1, acc.mant, acc.exp2);
    if (invert) r = ScaledValue::one() / r;
    return r;
}

ScaledValue pow_int(const ScaledValue& x, std::int64_t k) {
    if (k == 0) return ScaledValue::one();
    if (x.sign == 0) {
        if (k < 0) throw std::domain_error("pow_int: zero base with negative exponent");
        return ScaledValue::zero();
    }
    bool invert = k < 0;
    std::uint64_t n = invert ? static_cast<std::uint64_t>(-(k + 1)) + 1
                             : static_cast<std::uint64_t>(k);
    LongScaled base{static_cast<long double>(x.mantissa), x.exponent};
    LongScaled acc{1.0L, 0};
    while (n > 0) {
        if (n & 1u) acc = long_mul(acc, base);
        base = long_mul(base, base);
        n >>= 1;
    }
    int sign = (x.sign < 0 && (k % 2 != 0)) ? -1 : +1;
    ScaledValue r = normalize(sign, acc.mant, acc.exp2);
    if (invert) r = ScaledValue::one() / r;
    return r;
}

std::complex<double> ComplexScaled::to_complex_clamped(bool* clamped) const {
    bool c1 = false, c2 = false;
    double x = re.to_double_clamped(&c1);
    double y = im.to_double_clamped(&c2);
    if (clamped) *clamped = c1 || c2;
    return {x, y};
}

ComplexScaled operator+(const ComplexScaled& a, const ComplexScaled& b) {
    return {a.re + b.re, a.im + b.im};
}

ComplexScaled operator-(const ComplexScaled& a, const ComplexScaled& b) {
    return {a.re - b.re, a.im - b.im};
}

ComplexScaled operator*(const ComplexScaled& a, const ComplexScaled& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexScaled operator/(const ComplexScaled& a, const ComplexScaled& b) {
    ScaledValue d = b.abs2();
    if (d.is_zero()) throw std::domain_error("ComplexScaled: division by zero");
    ScaledValue re = (a.re * b.re + a.im * b.im) / d;
    ScaledValue im = (a.im * b.re - a.re * b.im) / d;
    return {re, im};
}

ComplexScaled operator-(const ComplexScaled& a) { return {-a.re, -a.im}; }

ComplexScaled operator*(const ScaledValue& a, const ComplexScaled& b) {
    return {a * b.re, a * b.im};
}

}  // namespace indefla
